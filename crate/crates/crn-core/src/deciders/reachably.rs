//! Polynomial-time decider for reachable atomicity and its reversible
//! extension.
//!
//! Phases: (1) split Λ into molecules M (sole unit reactants) and atoms
//! Δ = Λ∖M; (2) record one-step decompositions into Δ-only products;
//! (3) peel the remaining molecules through a fixpoint loop; (4) verify
//! A·D = 0 and atom usage. Each rejection carries the matching case label.

use std::collections::HashSet;

use num::{BigInt, BigUint, One, Zero};

use crate::deciders::witness::{verify_witness, AtomicityClass};
use crate::deciders::{DecompositionWitness, RejectionCase, Verdict};
use crate::model::{Configuration, Network};

/// Indices of species that are the sole unit reactant of some reaction.
fn sole_unit_reactants(network: &Network) -> Vec<usize> {
    let mut out = Vec::new();
    let mut seen = vec![false; network.species().len()];
    for rxn in network.reactions() {
        if rxn.reactants.l1_norm() == BigUint::one() {
            let s = rxn.reactants.support().next().expect("norm 1");
            let i = network.species_index(s).expect("validated");
            if !seen[i] {
                seen[i] = true;
                out.push(i);
            }
        }
    }
    out.sort_unstable();
    out
}

/// The molecule index a `{1S}` reactant refers to, if the reaction has one.
fn unit_reactant(network: &Network, rxn_reactants: &Configuration) -> Option<usize> {
    if rxn_reactants.l1_norm() == BigUint::one() {
        let s = rxn_reactants.support().next().expect("norm 1");
        network.species_index(s)
    } else {
        None
    }
}

pub fn decide_reachably_atomic(network: &Network) -> Verdict {
    let n_species = network.species().len();

    // Phase 1: separation.
    let molecule_idx = sole_unit_reactants(network);
    if molecule_idx.is_empty() || molecule_idx.len() == n_species {
        return Verdict::no_case(RejectionCase::NoSeparation);
    }
    let is_molecule: Vec<bool> = {
        let set: HashSet<usize> = molecule_idx.iter().copied().collect();
        (0..n_species).map(|i| set.contains(&i)).collect()
    };
    let atom_idx: Vec<usize> = (0..n_species).filter(|&i| !is_molecule[i]).collect();
    let atom_col: Vec<Option<usize>> = {
        let mut cols = vec![None; n_species];
        for (col, &i) in atom_idx.iter().enumerate() {
            cols[i] = Some(col);
        }
        cols
    };
    let n_atoms = atom_idx.len();

    // A molecule that vanishes outright can never decompose.
    for rxn in network.reactions() {
        if unit_reactant(network, &rxn.reactants).is_some() && rxn.products.is_zero() {
            return Verdict::no_case(RejectionCase::DegenerateDecomposition);
        }
    }

    // Phase 2: one-step decompositions into Δ-only products of size ≥ 2.
    let mut decomposition: Vec<Option<Vec<BigUint>>> = vec![None; n_species];
    let mut saw_single_atom_product = false;
    for rxn in network.reactions() {
        let s = match unit_reactant(network, &rxn.reactants) {
            Some(s) => s,
            None => continue,
        };
        let all_atoms = rxn
            .products
            .support()
            .all(|p| !is_molecule[network.species_index(p).expect("validated")]);
        if !all_atoms {
            continue;
        }
        if rxn.products.l1_norm() < BigUint::from(2u32) {
            saw_single_atom_product = true;
            continue;
        }
        if decomposition[s].is_some() {
            continue;
        }
        let mut d = vec![BigUint::zero(); n_atoms];
        for (p, count) in rxn.products.iter() {
            let i = network.species_index(p).expect("validated");
            d[atom_col[i].expect("atom")] += count;
        }
        decomposition[s] = Some(d);
    }
    if molecule_idx.iter().all(|&s| decomposition[s].is_none()) {
        return Verdict::no_case(if saw_single_atom_product {
            RejectionCase::DegenerateDecomposition
        } else {
            RejectionCase::NoDirectDecomposer
        });
    }

    // Phase 3: peel molecules whose products are fully decomposed already.
    let mut remaining: Vec<usize> = molecule_idx
        .iter()
        .copied()
        .filter(|&s| decomposition[s].is_none())
        .collect();
    while !remaining.is_empty() {
        let mut peeled_any = false;
        let mut still: Vec<usize> = Vec::new();
        for &s in &remaining {
            let mut found: Option<Vec<BigUint>> = None;
            for rxn in network.reactions() {
                if unit_reactant(network, &rxn.reactants) != Some(s) {
                    continue;
                }
                let ready = rxn.products.support().all(|p| {
                    let i = network.species_index(p).expect("validated");
                    !is_molecule[i] || decomposition[i].is_some()
                });
                if !ready {
                    continue;
                }
                let mut d = vec![BigUint::zero(); n_atoms];
                for (p, count) in rxn.products.iter() {
                    let i = network.species_index(p).expect("validated");
                    match atom_col[i] {
                        Some(col) => d[col] += count,
                        None => {
                            let sub = decomposition[i].as_ref().expect("ready");
                            for (col, v) in sub.iter().enumerate() {
                                d[col] += v * count;
                            }
                        }
                    }
                }
                // A size-<2 total is no decomposition at all; keep looking.
                if d.iter().sum::<BigUint>() >= BigUint::from(2u32) {
                    found = Some(d);
                    break;
                }
            }
            match found {
                Some(d) => {
                    decomposition[s] = Some(d);
                    peeled_any = true;
                }
                None => still.push(s),
            }
        }
        if !peeled_any {
            return Verdict::no_case(RejectionCase::StuckMolecule);
        }
        remaining = still;
    }

    // Phase 4: conservation and atom usage.
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_species);
    for i in 0..n_species {
        if let Some(col) = atom_col[i] {
            let mut e = vec![BigUint::zero(); n_atoms];
            e[col] = BigUint::one();
            rows.push(e);
        } else {
            rows.push(decomposition[i].clone().expect("all molecules peeled"));
        }
    }
    for t in 0..network.reactions().len() {
        let v = network.reaction_vector(t);
        for col in 0..n_atoms {
            let mut sum = BigInt::zero();
            for (s, coeff) in v.iter().enumerate() {
                if !coeff.is_zero() {
                    sum += coeff * BigInt::from(rows[s][col].clone());
                }
            }
            if !sum.is_zero() {
                return Verdict::no_case(RejectionCase::AtomsNotConserved);
            }
        }
    }
    for col in 0..n_atoms {
        let used = molecule_idx.iter().any(|&s| !rows[s][col].is_zero());
        if !used {
            return Verdict::no_case(RejectionCase::RedundantAtom);
        }
    }

    let witness = DecompositionWitness {
        atoms: atom_idx
            .iter()
            .map(|&i| network.species()[i].name().to_string())
            .collect(),
        rows,
    };
    verify_witness(network, &witness, AtomicityClass::Reachably)
        .expect("accepted reachably witness must verify");
    Verdict::yes(witness)
}

/// Reachably atomic plus the mirrored requirement d_S ⇒* {1S}, decided by
/// the reverse fixpoint: a molecule is recomposable once some reaction
/// produces exactly {1S} from recomposable-or-atom reactants.
pub fn decide_reversibly_reachably_atomic(network: &Network) -> Verdict {
    let forward = decide_reachably_atomic(network);
    if !forward.is_yes() {
        return forward;
    }
    let witness = forward.witness.expect("yes carries witness");
    let atom_names: HashSet<&str> = witness.atoms.iter().map(|s| s.as_str()).collect();
    let n_species = network.species().len();
    let is_atom: Vec<bool> = network
        .species()
        .iter()
        .map(|s| atom_names.contains(s.name()))
        .collect();

    let mut recomposable = vec![false; n_species];
    loop {
        let mut changed = false;
        for rxn in network.reactions() {
            if rxn.products.l1_norm() != BigUint::one() {
                continue;
            }
            let s = network
                .species_index(rxn.products.support().next().expect("norm 1"))
                .expect("validated");
            if is_atom[s] || recomposable[s] {
                continue;
            }
            let ready = rxn.reactants.support().all(|r| {
                let i = network.species_index(r).expect("validated");
                is_atom[i] || recomposable[i]
            });
            if ready {
                recomposable[s] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let all = (0..n_species).all(|i| is_atom[i] || recomposable[i]);
    if all {
        Verdict::yes(witness)
    } else {
        let stuck = network
            .species()
            .iter()
            .enumerate()
            .find(|(i, _)| !is_atom[*i] && !recomposable[*i])
            .map(|(_, s)| s.name().to_string())
            .unwrap_or_default();
        let mut v = Verdict::no();
        v.note = Some(format!("molecule {stuck} is not recomposable from its atoms"));
        v
    }
}
