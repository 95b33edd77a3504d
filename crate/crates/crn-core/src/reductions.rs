//! Hardness-construction generators: monotone 1-in-3 SAT → subset-fixed
//! atomicity, bimolecularization of arbitrary reactions, and space-bounded
//! TM → reachability.

use num::{BigUint, One};
use thiserror::Error;

use crate::deciders::AtomSet;
use crate::model::{Configuration, Network, Reaction, Species};
use crate::textio::{simulate_tm, SatInstance, SimOutcome, Symbol, TmError, TmSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error(transparent)]
    Tm(#[from] TmError),
    #[error("simulated run moved the head off the tape (boundary violation)")]
    BoundaryViolation,
    #[error("machine accepts without blanking the tape and returning the head to cell 1")]
    AcceptsWithoutCleanup,
}

/// A generated instance: the network plus whatever the construction pins
/// down (atom set, reachability endpoints) and a human-readable provenance.
#[derive(Debug, Clone)]
pub struct ReducedCrnInstance {
    pub network: Network,
    pub atoms: Option<AtomSet>,
    pub endpoints: Option<(Configuration, Configuration)>,
    pub provenance: String,
}

fn species(name: String) -> Species {
    Species::new(&name).expect("generated names are valid identifiers")
}

/// Monotone 1-in-3 SAT → Subset-Fixed-Atomic with Δ = {T, F, P, Q}.
///
/// Per clause m: 3P+2F+T → S_{m1}+S_{m2}+S_{m3} and 3Q+2F+T →
/// X_{m1}+X_{m2}+X_{m3}; per variable i: S_i + Q → X_i + P. The instance
/// is subset-Δ-atomic iff the formula is 1-in-3 satisfiable.
pub fn sat_to_crn(formula: &SatInstance) -> ReducedCrnInstance {
    let n = formula.variables().len();
    let s: Vec<Species> = (1..=n).map(|i| species(format!("S{i}"))).collect();
    let x: Vec<Species> = (1..=n).map(|i| species(format!("X{i}"))).collect();
    let t = species("T".into());
    let f = species("F".into());
    let p = species("P".into());
    let q = species("Q".into());

    let lhs = |lead: &Species| {
        Configuration::from_pairs(&[(lead, 3), (&f, 2), (&t, 1)])
    };
    let mut reactions = Vec::new();
    for clause in formula.clauses() {
        let products = Configuration::from_counts(
            clause.iter().map(|&v| (s[v].clone(), BigUint::one())),
        );
        reactions.push(Reaction::new(lhs(&p), products));
    }
    for clause in formula.clauses() {
        let products = Configuration::from_counts(
            clause.iter().map(|&v| (x[v].clone(), BigUint::one())),
        );
        reactions.push(Reaction::new(lhs(&q), products));
    }
    for i in 0..n {
        reactions.push(Reaction::new(
            Configuration::from_pairs(&[(&s[i], 1), (&q, 1)]),
            Configuration::from_pairs(&[(&x[i], 1), (&p, 1)]),
        ));
    }

    let mut all_species = Vec::with_capacity(2 * n + 4);
    all_species.extend(s.iter().cloned());
    all_species.extend(x.iter().cloned());
    all_species.extend([t, f, p, q]);
    let network = Network::new(all_species, reactions).expect("generated instance validates");
    assert!(network.max_coefficient() <= BigUint::from(3u32));

    let mut provenance = String::from("reduced from monotone 1-in-3 SAT; atoms T,F,P,Q");
    for (i, v) in formula.variables().iter().enumerate() {
        provenance.push_str(&format!("; {} -> S{}/X{}", v, i + 1, i + 1));
    }
    let atoms = AtomSet::from_names(&network, &["T", "F", "P", "Q"]).expect("atoms exist");
    ReducedCrnInstance {
        network,
        atoms: Some(atoms),
        endpoints: None,
        provenance,
    }
}

/// Expands one side into a unit list in Λ-ascending order.
fn units(network: &Network, side: &Configuration) -> Vec<Species> {
    let mut out = Vec::new();
    for s in network.species() {
        let count = side.get(s);
        let count = usize::try_from(&count).expect("side too large to bimolecularize");
        for _ in 0..count {
            out.push(s.clone());
        }
    }
    out
}

struct FreshNames<'a> {
    taken: Vec<String>,
    network: &'a Network,
}

impl FreshNames<'_> {
    fn fresh(&mut self, base: String) -> Species {
        let mut name = base;
        while self.network.species_by_name(&name).is_some() || self.taken.contains(&name) {
            name.push('_');
        }
        self.taken.push(name.clone());
        species(name)
    }
}

/// Replaces every reaction with more than two reactant units or more than
/// two product units by a chain of reversible pairwise bindings followed by
/// irreversible pairwise releases, through fresh intermediate species.
pub fn bimolecularize(network: &Network) -> Network {
    let two = BigUint::from(2u32);
    let mut fresh = FreshNames {
        taken: Vec::new(),
        network,
    };
    let mut new_species: Vec<Species> = network.species().to_vec();
    let mut reactions: Vec<Reaction> = Vec::new();

    for (idx, rxn) in network.reactions().iter().enumerate() {
        if rxn.reactants.l1_norm() <= two && rxn.products.l1_norm() <= two {
            reactions.push(rxn.clone());
            continue;
        }
        let reactant_units = units(network, &rxn.reactants);
        let product_units = units(network, &rxn.products);
        let a = reactant_units.len();
        let b = product_units.len();
        let mut next_m = 1usize;
        let mut make_m = |fresh: &mut FreshNames, new_species: &mut Vec<Species>| {
            let m = fresh.fresh(format!("M{}_{}", idx + 1, next_m));
            next_m += 1;
            new_species.push(m.clone());
            m
        };

        // Fold reactants pairwise while more than two units remain.
        let mut carrier: Option<Species> = None;
        if a >= 3 {
            let m1 = make_m(&mut fresh, &mut new_species);
            reactions.push(Reaction::new(
                Configuration::from_pairs(&[(&reactant_units[0], 1), (&reactant_units[1], 1)]),
                Configuration::from_pairs(&[(&m1, 1)]),
            ));
            reactions.push(Reaction::new(
                Configuration::from_pairs(&[(&m1, 1)]),
                Configuration::from_pairs(&[(&reactant_units[0], 1), (&reactant_units[1], 1)]),
            ));
            let mut prev = m1;
            for u in &reactant_units[2..a - 1] {
                let m = make_m(&mut fresh, &mut new_species);
                reactions.push(Reaction::new(
                    Configuration::from_pairs(&[(&prev, 1), (u, 1)]),
                    Configuration::from_pairs(&[(&m, 1)]),
                ));
                reactions.push(Reaction::new(
                    Configuration::from_pairs(&[(&m, 1)]),
                    Configuration::from_pairs(&[(&prev, 1), (u, 1)]),
                ));
                prev = m;
            }
            carrier = Some(prev);
        }
        // LHS of the first release step.
        let release_lhs = match &carrier {
            Some(m) => Configuration::from_pairs(&[(m, 1), (&reactant_units[a - 1], 1)]),
            None => rxn.reactants.clone(),
        };

        if b <= 2 {
            reactions.push(Reaction::new(release_lhs, rxn.products.clone()));
        } else {
            // Release products one at a time until two remain.
            let z = make_m(&mut fresh, &mut new_species);
            reactions.push(Reaction::new(
                release_lhs,
                Configuration::from_pairs(&[(&z, 1), (&product_units[0], 1)]),
            ));
            let mut prev = z;
            for w in &product_units[1..b - 2] {
                let z = make_m(&mut fresh, &mut new_species);
                reactions.push(Reaction::new(
                    Configuration::from_pairs(&[(&prev, 1)]),
                    Configuration::from_pairs(&[(&z, 1), (w, 1)]),
                ));
                prev = z;
            }
            reactions.push(Reaction::new(
                Configuration::from_pairs(&[(&prev, 1)]),
                Configuration::from_pairs(&[(&product_units[b - 2], 1), (&product_units[b - 1], 1)]),
            ));
        }
    }
    Network::new(new_species, reactions).expect("bimolecularization validates")
}

/// Space-bounded TM plus input → reachability instance over a reachably
/// atomic network with Δ = {A}.
///
/// Per transition δ(q,b) = (q',b',m) and in-range cell k:
/// Q_q + T_k^b + P_k → Q_q' + T_k^{b'} + P_{k+m}; plus S → 2A for every
/// molecular species. The machine accepts the input iff c1 ⇒* c2.
pub fn tm_to_crn(tm: &TmSpec, input: &str) -> Result<ReducedCrnInstance, ReductionError> {
    tm.validate()?;
    // Desk-scale validation by simulation: boundary discipline and the
    // blank-and-return acceptance discipline.
    match simulate_tm(tm, input)? {
        SimOutcome::OffTape => return Err(ReductionError::BoundaryViolation),
        SimOutcome::Accept { clean: false } => return Err(ReductionError::AcceptsWithoutCleanup),
        _ => {}
    }
    let p = tm.space_bound;

    let atom = species("A".into());
    let state_species: Vec<Species> = tm
        .states
        .iter()
        .map(|s| species(format!("Q_{s}")))
        .collect();
    let state_of = |name: &str| -> Species {
        let i = tm.states.iter().position(|s| s == name).expect("validated");
        state_species[i].clone()
    };
    let position_species: Vec<Species> = (1..=p).map(|k| species(format!("P{k}"))).collect();
    let tape_species: Vec<Vec<Species>> = (1..=p)
        .map(|k| {
            Symbol::ALL
                .iter()
                .map(|b| species(format!("T{k}_{}", b.tag())))
                .collect()
        })
        .collect();
    let tape = |k: usize, b: Symbol| -> Species {
        let bi = Symbol::ALL.iter().position(|&s| s == b).expect("symbol");
        tape_species[k - 1][bi].clone()
    };

    let mut all_species = vec![atom.clone()];
    all_species.extend(state_species.iter().cloned());
    all_species.extend(position_species.iter().cloned());
    for row in &tape_species {
        all_species.extend(row.iter().cloned());
    }

    let mut reactions = Vec::new();
    for t in &tm.transitions {
        for k in 1..=p {
            let k_next = k as i64 + t.move_dir as i64;
            if k_next < 1 || k_next > p as i64 {
                continue; // off-tape transitions are omitted
            }
            let reactants = Configuration::from_pairs(&[
                (&state_of(&t.state), 1),
                (&tape(k, t.read), 1),
                (&position_species[k - 1], 1),
            ]);
            let products = Configuration::from_pairs(&[
                (&state_of(&t.next), 1),
                (&tape(k, t.write), 1),
                (&position_species[k_next as usize - 1], 1),
            ]);
            reactions.push(Reaction::new(reactants, products));
        }
    }
    for s in all_species.iter().skip(1) {
        reactions.push(Reaction::new(
            Configuration::from_pairs(&[(s, 1)]),
            Configuration::from_pairs(&[(&atom, 2)]),
        ));
    }

    let network = Network::new(all_species, reactions).expect("generated instance validates");
    assert!(network.max_coefficient() <= BigUint::from(3u32));

    // c1 = {P1, Q_init, tape of the input padded with blanks}.
    let mut c1 = Configuration::zero();
    c1.add(&position_species[0], &BigUint::one());
    c1.add(&state_of(&tm.initial), &BigUint::one());
    let input_symbols: Vec<Symbol> = input
        .chars()
        .map(|c| match c {
            '0' => Symbol::Zero,
            '1' => Symbol::One,
            _ => unreachable!("validated by simulate_tm"),
        })
        .collect();
    for k in 1..=p {
        let sym = input_symbols.get(k - 1).copied().unwrap_or(Symbol::Blank);
        c1.add(&tape(k, sym), &BigUint::one());
    }
    // c2 = {P1, Q_accept, all-blank tape}.
    let mut c2 = Configuration::zero();
    c2.add(&position_species[0], &BigUint::one());
    c2.add(&state_of(&tm.accept), &BigUint::one());
    for k in 1..=p {
        c2.add(&tape(k, Symbol::Blank), &BigUint::one());
    }
    debug_assert_eq!(c1.l1_norm(), BigUint::from(p + 2));
    debug_assert_eq!(c2.l1_norm(), BigUint::from(p + 2));

    let atoms = AtomSet::from_names(&network, &["A"]).expect("atom exists");
    Ok(ReducedCrnInstance {
        network,
        atoms: Some(atoms),
        endpoints: Some((c1, c2)),
        provenance: format!(
            "reduced from a {}-state TM with space bound {} on input {:?}",
            tm.states.len(),
            p,
            input
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deciders::{decide_reachably_atomic, decide_subset_fixed_atomic, Answer};
    use crate::reach::{reachable, Reachability};
    use crate::textio::{parse_sat, tm_from_table};
    use Symbol::{Blank, One as SOne, Zero as SZero};

    #[test]
    fn footnote_formula_reduction_counts() {
        let sat = parse_sat("vars v1 v2 v3 v4 v5\nclause v1 v3 v4\nclause v3 v2 v5\n").unwrap();
        let inst = sat_to_crn(&sat);
        assert_eq!(inst.network.species().len(), 14);
        assert_eq!(inst.network.reactions().len(), 9);
        // First clause reaction is exactly 3P + 2F + T -> S1 + S3 + S4.
        let r0 = &inst.network.reactions()[0];
        let p = inst.network.species_by_name("P").unwrap();
        let f = inst.network.species_by_name("F").unwrap();
        let t = inst.network.species_by_name("T").unwrap();
        assert_eq!(r0.reactants.get(p), BigUint::from(3u32));
        assert_eq!(r0.reactants.get(f), BigUint::from(2u32));
        assert_eq!(r0.reactants.get(t), BigUint::one());
        let s1 = inst.network.species_by_name("S1").unwrap();
        let s3 = inst.network.species_by_name("S3").unwrap();
        let s4 = inst.network.species_by_name("S4").unwrap();
        for s in [s1, s3, s4] {
            assert_eq!(r0.products.get(s), BigUint::one());
        }
    }

    #[test]
    fn single_clause_reduction_counts() {
        let sat = parse_sat("clause v1 v2 v3\n").unwrap();
        let inst = sat_to_crn(&sat);
        assert_eq!(inst.network.species().len(), 10);
        assert_eq!(inst.network.reactions().len(), 5);
    }

    #[test]
    fn footnote_instance_is_subset_fixed_atomic() {
        let sat = parse_sat("vars v1 v2 v3 v4 v5\nclause v1 v3 v4\nclause v3 v2 v5\n").unwrap();
        let inst = sat_to_crn(&sat);
        let v =
            decide_subset_fixed_atomic(&inst.network, inst.atoms.as_ref().unwrap(), None).unwrap();
        assert!(v.is_yes());
    }

    #[test]
    fn bimolecularize_paper_gadget() {
        let sat = parse_sat("clause v1 v2 v3\n").unwrap();
        let inst = sat_to_crn(&sat);
        let bimol = bimolecularize(&inst.network);
        // Per clause: both 6-unit reactions become 10 directed reactions
        // through 5 intermediates; the n variable reactions pass through.
        assert_eq!(bimol.reactions().len(), 10 + 10 + 3);
        assert_eq!(bimol.species().len(), 10 + 5 + 5);
        // The first fold is T + F <-> M1_1.
        let m11 = bimol.species_by_name("M1_1").unwrap();
        let t = bimol.species_by_name("T").unwrap();
        let f = bimol.species_by_name("F").unwrap();
        let fwd = &bimol.reactions()[0];
        assert_eq!(fwd.reactants.get(t), BigUint::one());
        assert_eq!(fwd.reactants.get(f), BigUint::one());
        assert_eq!(fwd.products.get(m11), BigUint::one());
        let rev = &bimol.reactions()[1];
        assert_eq!(rev.reactants.get(m11), BigUint::one());
    }

    #[test]
    fn bimolecular_reactions_pass_through() {
        let net = crate::textio::parse_network("A + B -> C\nC -> A + B\nA -> 2B").unwrap();
        let out = bimolecularize(&net);
        assert_eq!(out, net);
    }

    #[test]
    fn bimolecularize_output_is_uni_or_bimolecular() {
        let net = crate::textio::parse_network("3A + 2B -> C + D + E + F\n0 -> 3G\n2H -> 0").unwrap();
        let out = bimolecularize(&net);
        let two = BigUint::from(2u32);
        for rxn in out.reactions() {
            assert!(rxn.reactants.l1_norm() <= two && rxn.products.l1_norm() <= two);
        }
    }

    fn first_bit_machine() -> TmSpec {
        tm_from_table(
            &["q1", "q2", "qA", "qR"],
            "q1",
            "qA",
            "qR",
            2,
            &[
                ("q1", SOne, "q2", Blank, 1),
                ("q1", SZero, "qR", SZero, 1),
                ("q1", Blank, "qR", Blank, 1),
                ("q2", SZero, "qA", Blank, -1),
                ("q2", SOne, "qA", Blank, -1),
                ("q2", Blank, "qA", Blank, -1),
            ],
        )
    }

    #[test]
    fn tm_reduction_species_count_and_norms() {
        let tm = first_bit_machine();
        let inst = tm_to_crn(&tm, "1").unwrap();
        // 1 + t + p + 3p with t = 4 states and p = 2.
        assert_eq!(inst.network.species().len(), 1 + 4 + 2 + 6);
        let (c1, c2) = inst.endpoints.clone().unwrap();
        assert_eq!(c1.l1_norm(), BigUint::from(4u32));
        assert_eq!(c2.l1_norm(), BigUint::from(4u32));
    }

    #[test]
    fn tm_reduction_network_is_reachably_atomic() {
        let tm = first_bit_machine();
        let inst = tm_to_crn(&tm, "1").unwrap();
        let v = decide_reachably_atomic(&inst.network);
        assert!(v.is_yes());
        assert_eq!(v.witness.unwrap().atoms, vec!["A".to_string()]);
    }

    #[test]
    fn tm_reduction_reachability_matches_acceptance() {
        let tm = first_bit_machine();
        for (input, expect) in [("1", true), ("0", false), ("10", true), ("", false)] {
            let inst = tm_to_crn(&tm, input).unwrap();
            let (c1, c2) = inst.endpoints.clone().unwrap();
            let r = reachable(&inst.network, &c1, &c2, 100_000).unwrap();
            match (expect, r) {
                (true, Reachability::Yes(_)) | (false, Reachability::No) => {}
                (e, got) => panic!("input {input:?}: expected accept={e}, got {got:?}"),
            }
        }
    }

    #[test]
    fn tm_reduction_rejects_input_too_long() {
        let tm = first_bit_machine();
        assert!(matches!(
            tm_to_crn(&tm, "101"),
            Err(ReductionError::Tm(TmError::InputTooLong))
        ));
    }

    #[test]
    fn tm_reduction_rejects_unclean_acceptance() {
        // Accepts immediately without blanking the input cell.
        let tm = tm_from_table(
            &["q1", "qA", "qR"],
            "q1",
            "qA",
            "qR",
            2,
            &[("q1", SOne, "qA", SOne, 1)],
        );
        assert!(matches!(
            tm_to_crn(&tm, "1"),
            Err(ReductionError::AcceptsWithoutCleanup)
        ));
    }

    #[test]
    fn subset_fixed_on_bimolecularized_matches_original() {
        let sat = parse_sat("clause v1 v2 v3\n").unwrap();
        let inst = sat_to_crn(&sat);
        let bimol = bimolecularize(&inst.network);
        let atoms = AtomSet::from_names(&bimol, &["T", "F", "P", "Q"]).unwrap();
        let v = decide_subset_fixed_atomic(&bimol, &atoms, None).unwrap();
        let orig =
            decide_subset_fixed_atomic(&inst.network, inst.atoms.as_ref().unwrap(), None).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert_eq!(orig.answer, Answer::Yes);
    }
}
