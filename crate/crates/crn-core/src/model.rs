//! Core immutable data model: species, configurations, reactions, networks,
//! and the stoichiometric matrix.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigUint, Zero};
use thiserror::Error;

/// A chemical species, identified by an interned name.
///
/// Names match `[A-Za-z][A-Za-z0-9_]*`. Equality and ordering are by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Species(Arc<str>);

impl Species {
    /// Creates a species, validating the identifier syntax.
    pub fn new(name: &str) -> Result<Self, ValidationError> {
        if !is_valid_species_name(name) {
            return Err(ValidationError::InvalidSpeciesName(name.to_string()));
        }
        Ok(Species(Arc::from(name)))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_valid_species_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A count vector in N^Λ. Species with zero count are not stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Configuration {
    counts: BTreeMap<Species, BigUint>,
}

impl Configuration {
    pub fn zero() -> Self {
        Configuration::default()
    }

    pub fn from_counts<I: IntoIterator<Item = (Species, BigUint)>>(counts: I) -> Self {
        let mut c = Configuration::default();
        for (s, n) in counts {
            c.add(&s, &n);
        }
        c
    }

    /// Convenience constructor with small counts, used heavily in tests.
    pub fn from_pairs(pairs: &[(&Species, u64)]) -> Self {
        Configuration::from_counts(
            pairs
                .iter()
                .map(|(s, n)| ((*s).clone(), BigUint::from(*n))),
        )
    }

    pub fn get(&self, s: &Species) -> BigUint {
        self.counts.get(s).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn add(&mut self, s: &Species, n: &BigUint) {
        if n.is_zero() {
            return;
        }
        let entry = self.counts.entry(s.clone()).or_insert_with(BigUint::zero);
        *entry += n;
    }

    /// The support [c]: species with nonzero count, in name order.
    pub fn support(&self) -> impl Iterator<Item = &Species> {
        self.counts.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Species, &BigUint)> {
        self.counts.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.counts.is_empty()
    }

    /// ‖c‖₁: the total count over all species.
    pub fn l1_norm(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// Componentwise ≤.
    pub fn le(&self, other: &Configuration) -> bool {
        self.counts.iter().all(|(s, n)| n <= &other.get(s))
    }

    /// Strictly greater: other ≤ self and self ≠ other.
    pub fn gt(&self, other: &Configuration) -> bool {
        other.le(self) && self != other
    }
}

impl fmt::Display for Configuration {
    /// The `{2X, 1Y}` multiset notation; `{}` for the zero vector.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (s, n)) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}{}", n, s)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A reaction (r, p): reactant and product count vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Reaction {
    pub reactants: Configuration,
    pub products: Configuration,
}

impl Reaction {
    pub fn new(reactants: Configuration, products: Configuration) -> Self {
        Reaction {
            reactants,
            products,
        }
    }

    /// True when the reaction is applicable at `c` (r ≤ c).
    pub fn applicable(&self, c: &Configuration) -> bool {
        self.reactants.le(c)
    }
}

impl fmt::Display for Reaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.reactants, self.products)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("invalid species name: {0:?}")]
    InvalidSpeciesName(String),
    #[error("duplicate species in Λ: {0}")]
    DuplicateSpecies(String),
    #[error("reaction {0} mentions species {1} not in Λ")]
    UnknownSpeciesInReaction(String, String),
    #[error("self-loop reaction forbidden: {0}")]
    SelfLoopReaction(String),
    #[error("duplicate reaction: {0}")]
    DuplicateReaction(String),
    #[error("unknown species: {0}")]
    UnknownSpecies(String),
}

/// A chemical reaction network (Λ, R).
///
/// Λ keeps its construction order; that order is the canonical index space
/// for every vector and matrix derived from the network. Immutable after
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    species: Vec<Species>,
    reactions: Vec<Reaction>,
    index: HashMap<Species, usize>,
}

impl Network {
    /// Validating constructor. Checks all type invariants: species names,
    /// no duplicate species, every mentioned species in Λ, no self-loop
    /// reactions (r = p), no duplicate reactions.
    pub fn new(species: Vec<Species>, reactions: Vec<Reaction>) -> Result<Self, ValidationError> {
        let mut index = HashMap::new();
        for (i, s) in species.iter().enumerate() {
            if !is_valid_species_name(s.name()) {
                return Err(ValidationError::InvalidSpeciesName(s.name().to_string()));
            }
            if index.insert(s.clone(), i).is_some() {
                return Err(ValidationError::DuplicateSpecies(s.name().to_string()));
            }
        }
        let mut seen: HashSet<&Reaction> = HashSet::new();
        for rxn in &reactions {
            for (s, _) in rxn.reactants.iter().chain(rxn.products.iter()) {
                if !index.contains_key(s) {
                    return Err(ValidationError::UnknownSpeciesInReaction(
                        rxn.to_string(),
                        s.name().to_string(),
                    ));
                }
            }
            if rxn.reactants == rxn.products {
                return Err(ValidationError::SelfLoopReaction(rxn.to_string()));
            }
            if !seen.insert(rxn) {
                return Err(ValidationError::DuplicateReaction(rxn.to_string()));
            }
        }
        Ok(Network {
            species,
            reactions,
            index,
        })
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn species_index(&self, s: &Species) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn species_by_name(&self, name: &str) -> Option<&Species> {
        self.species.iter().find(|s| s.name() == name)
    }

    /// Dense count vector in Λ order. Errors on species outside Λ.
    pub fn dense(&self, c: &Configuration) -> Result<Vec<BigUint>, ValidationError> {
        let mut v = vec![BigUint::zero(); self.species.len()];
        for (s, n) in c.iter() {
            match self.species_index(s) {
                Some(i) => v[i] = n.clone(),
                None => return Err(ValidationError::UnknownSpecies(s.name().to_string())),
            }
        }
        Ok(v)
    }

    pub fn config_from_dense(&self, v: &[BigUint]) -> Configuration {
        Configuration::from_counts(
            v.iter()
                .enumerate()
                .filter(|(_, n)| !n.is_zero())
                .map(|(i, n)| (self.species[i].clone(), n.clone())),
        )
    }

    /// The reaction vector p − r of reaction `t`, in Λ order.
    pub fn reaction_vector(&self, t: usize) -> Vec<BigInt> {
        let rxn = &self.reactions[t];
        let mut v = vec![BigInt::zero(); self.species.len()];
        for (s, n) in rxn.products.iter() {
            v[self.index[s]] += BigInt::from(n.clone());
        }
        for (s, n) in rxn.reactants.iter() {
            v[self.index[s]] -= BigInt::from(n.clone());
        }
        v
    }

    /// The largest coefficient appearing on either side of any reaction.
    pub fn max_coefficient(&self) -> BigUint {
        let mut max = BigUint::zero();
        for rxn in &self.reactions {
            for (_, n) in rxn.reactants.iter().chain(rxn.products.iter()) {
                if *n > max {
                    max = n.clone();
                }
            }
        }
        max
    }

    /// True when every reaction's reverse is also present.
    pub fn is_reversible(&self) -> bool {
        let set: HashSet<&Reaction> = self.reactions.iter().collect();
        self.reactions.iter().all(|rxn| {
            set.contains(&Reaction::new(
                rxn.products.clone(),
                rxn.reactants.clone(),
            ))
        })
    }
}

/// The stoichiometric matrix A: |R| × |Λ|, A[(r,p), S] = p(S) − r(S).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoichMatrix {
    species: Vec<Species>,
    rows: Vec<Vec<BigInt>>,
}

impl StoichMatrix {
    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.species.len()
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigInt {
        &self.rows[row][col]
    }
}

/// Builds the stoichiometric matrix of a validated network. Row order is
/// reaction order, column order is Λ order.
pub fn stoichiometric_matrix(network: &Network) -> StoichMatrix {
    let rows = (0..network.reactions().len())
        .map(|t| network.reaction_vector(t))
        .collect();
    StoichMatrix {
        species: network.species().to_vec(),
        rows,
    }
}

/// Fires reaction `t` at dense configuration `c`, or None if not applicable.
pub fn fire_dense(network: &Network, c: &[BigUint], t: usize) -> Option<Vec<BigUint>> {
    let rxn = &network.reactions()[t];
    let mut out = c.to_vec();
    for (s, n) in rxn.reactants.iter() {
        let i = network.species_index(s).expect("validated network");
        if out[i] < *n {
            return None;
        }
        out[i] -= n;
    }
    for (s, n) in rxn.products.iter() {
        let i = network.species_index(s).expect("validated network");
        out[i] += n;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(name: &str) -> Species {
        Species::new(name).unwrap()
    }

    /// The running example network: 2X+Y+Z → 2W+Z, X+2Y+W+Z → Y+W+2Z,
    /// with the explicit species order (X, Y, W, Z).
    pub(crate) fn example_network_xywz() -> Network {
        let (x, y, w, z) = (sp("X"), sp("Y"), sp("W"), sp("Z"));
        let r1 = Reaction::new(
            Configuration::from_pairs(&[(&x, 2), (&y, 1), (&z, 1)]),
            Configuration::from_pairs(&[(&w, 2), (&z, 1)]),
        );
        let r2 = Reaction::new(
            Configuration::from_pairs(&[(&x, 1), (&y, 2), (&w, 1), (&z, 1)]),
            Configuration::from_pairs(&[(&y, 1), (&w, 1), (&z, 2)]),
        );
        Network::new(vec![x, y, w, z], vec![r1, r2]).unwrap()
    }

    #[test]
    fn stoich_matrix_matches_definition() {
        let net = example_network_xywz();
        let a = stoichiometric_matrix(&net);
        let got: Vec<Vec<i64>> = a
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect();
        // Columns (X, Y, W, Z).
        assert_eq!(got, vec![vec![-2, -1, 2, 0], vec![-1, -1, 0, 1]]);
    }

    #[test]
    fn stoich_matrix_recomputation_invariant() {
        let net = example_network_xywz();
        let a = stoichiometric_matrix(&net);
        for (t, rxn) in net.reactions().iter().enumerate() {
            for (i, s) in net.species().iter().enumerate() {
                let expect = BigInt::from(rxn.products.get(s)) - BigInt::from(rxn.reactants.get(s));
                assert_eq!(*a.entry(t, i), expect);
            }
        }
    }

    #[test]
    fn empty_reaction_set_gives_zero_rows() {
        let net = Network::new(vec![sp("X"), sp("Y")], vec![]).unwrap();
        let a = stoichiometric_matrix(&net);
        assert_eq!(a.row_count(), 0);
        assert_eq!(a.col_count(), 2);
    }

    #[test]
    fn single_reaction_matrix() {
        let (x, y) = (sp("X"), sp("Y"));
        let r = Reaction::new(
            Configuration::from_pairs(&[(&x, 1)]),
            Configuration::from_pairs(&[(&y, 2)]),
        );
        let net = Network::new(vec![x, y], vec![r]).unwrap();
        let a = stoichiometric_matrix(&net);
        assert_eq!(a.rows()[0], vec![BigInt::from(-1), BigInt::from(2)]);
    }

    #[test]
    fn self_loop_rejected() {
        let a = sp("A");
        let r = Reaction::new(
            Configuration::from_pairs(&[(&a, 1)]),
            Configuration::from_pairs(&[(&a, 1)]),
        );
        let err = Network::new(vec![a], vec![r]).unwrap_err();
        assert!(matches!(err, ValidationError::SelfLoopReaction(_)));
    }

    #[test]
    fn duplicate_reaction_rejected() {
        let (x, y) = (sp("X"), sp("Y"));
        let r = Reaction::new(
            Configuration::from_pairs(&[(&x, 1)]),
            Configuration::from_pairs(&[(&y, 1)]),
        );
        let err = Network::new(vec![x, y], vec![r.clone(), r]).unwrap_err();
        assert!(matches!(err, ValidationError::DuplicateReaction(_)));
    }

    #[test]
    fn duplicate_species_rejected() {
        let err = Network::new(vec![sp("A"), sp("A")], vec![]).unwrap_err();
        assert!(matches!(err, ValidationError::DuplicateSpecies(_)));
    }

    #[test]
    fn unknown_species_in_reaction_rejected() {
        let (x, y) = (sp("X"), sp("Y"));
        let r = Reaction::new(
            Configuration::from_pairs(&[(&x, 1)]),
            Configuration::from_pairs(&[(&y, 1)]),
        );
        let err = Network::new(vec![x], vec![r]).unwrap_err();
        assert!(matches!(err, ValidationError::UnknownSpeciesInReaction(..)));
    }

    #[test]
    fn firing_preserves_nonnegativity() {
        let net = example_network_xywz();
        let i = net
            .dense(&Configuration::from_pairs(&[
                (&sp("X"), 2),
                (&sp("Y"), 1),
                (&sp("Z"), 1),
            ]))
            .unwrap();
        let fired = fire_dense(&net, &i, 0).unwrap();
        let expect = net
            .dense(&Configuration::from_pairs(&[(&sp("W"), 2), (&sp("Z"), 1)]))
            .unwrap();
        assert_eq!(fired, expect);
        // Second reaction needs a W; not applicable here.
        assert!(fire_dense(&net, &i, 1).is_none());
    }

    #[test]
    fn invalid_names_rejected() {
        assert!(Species::new("").is_err());
        assert!(Species::new("2X").is_err());
        assert!(Species::new("X-Y").is_err());
        assert!(Species::new("X_1").is_ok());
    }
}
