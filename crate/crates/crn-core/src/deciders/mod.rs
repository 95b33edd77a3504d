//! The four atomicity deciders and the integer-programming backend.
//!
//! Every yes verdict carries a decomposition witness that has been
//! re-verified against the definitions; every reachably-atomic no verdict
//! carries one of six rejection case labels.

pub mod ip;
mod reachably;
mod subset;
mod witness;

use num::BigUint;
use thiserror::Error;

use crate::model::{Network, Species};

pub use ip::{crn_to_ip, default_ip_bound, ip_feasible, ip_to_text, IpInstance, IpOutcome};
pub use reachably::{decide_reachably_atomic, decide_reversibly_reachably_atomic};
pub use subset::{decide_primitive_atomic, decide_subset_atomic, decide_subset_fixed_atomic};
pub use witness::{
    atom_counts, verify_recomposability, verify_witness, verify_witness_reachability,
    AtomicityClass,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeciderError {
    #[error("network has an empty reaction set")]
    EmptyReactionSet,
    #[error("invalid atom set: {0}")]
    InvalidAtomSet(String),
}

/// A nonempty candidate atom set Δ ⊆ Λ with Δ ≠ Λ, kept in Λ order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomSet {
    species: Vec<Species>,
}

impl AtomSet {
    pub fn new(
        network: &Network,
        atoms: impl IntoIterator<Item = Species>,
    ) -> Result<Self, DeciderError> {
        let mut picked = vec![false; network.species().len()];
        for s in atoms {
            match network.species_index(&s) {
                Some(i) => picked[i] = true,
                None => {
                    return Err(DeciderError::InvalidAtomSet(format!(
                        "{} is not a species of the network",
                        s.name()
                    )))
                }
            }
        }
        let species: Vec<Species> = network
            .species()
            .iter()
            .zip(picked.iter())
            .filter(|(_, &p)| p)
            .map(|(s, _)| s.clone())
            .collect();
        if species.is_empty() {
            return Err(DeciderError::InvalidAtomSet("atom set is empty".into()));
        }
        if species.len() == network.species().len() {
            return Err(DeciderError::InvalidAtomSet(
                "atom set equals Λ; no molecules to decompose".into(),
            ));
        }
        Ok(AtomSet { species })
    }

    pub fn from_names(network: &Network, names: &[&str]) -> Result<Self, DeciderError> {
        let mut atoms = Vec::new();
        for name in names {
            match network.species_by_name(name) {
                Some(s) => atoms.push(s.clone()),
                None => {
                    return Err(DeciderError::InvalidAtomSet(format!(
                        "{name} is not a species of the network"
                    )))
                }
            }
        }
        AtomSet::new(network, atoms)
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn contains(&self, s: &Species) -> bool {
        self.species.contains(s)
    }
}

/// Atom set Δ plus the |Λ|×|Δ| decomposition matrix D, rows in Λ order.
///
/// Atoms are species names for the subset classes and fresh symbols for
/// primitive witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionWitness {
    pub atoms: Vec<String>,
    pub rows: Vec<Vec<BigUint>>,
}

impl DecompositionWitness {
    pub fn row(&self, species_idx: usize) -> &[BigUint] {
        &self.rows[species_idx]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn label(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        }
    }
}

/// The six rejection cases of the reachably-atomic decider.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectionCase {
    /// No valid split of Λ into molecules and atoms (M = ∅ or M = Λ).
    NoSeparation,
    /// No molecule decomposes to atoms in a single reaction.
    NoDirectDecomposer,
    /// A molecule vanishes or the only direct decompositions have size ≤ 1.
    DegenerateDecomposition,
    /// The peeling fixpoint stalls: some molecule never reaches atoms.
    StuckMolecule,
    /// The derived decomposition violates A·D = 0.
    AtomsNotConserved,
    /// Some atom appears in no molecule's decomposition.
    RedundantAtom,
}

impl RejectionCase {
    pub fn label(self) -> &'static str {
        match self {
            RejectionCase::NoSeparation => "NoSeparation",
            RejectionCase::NoDirectDecomposer => "NoDirectDecomposer",
            RejectionCase::DegenerateDecomposition => "DegenerateDecomposition",
            RejectionCase::StuckMolecule => "StuckMolecule",
            RejectionCase::AtomsNotConserved => "AtomsNotConserved",
            RejectionCase::RedundantAtom => "RedundantAtom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    pub witness: Option<DecompositionWitness>,
    pub case: Option<RejectionCase>,
    pub note: Option<String>,
}

impl Verdict {
    pub fn yes(witness: DecompositionWitness) -> Self {
        Verdict {
            answer: Answer::Yes,
            witness: Some(witness),
            case: None,
            note: None,
        }
    }

    pub fn no() -> Self {
        Verdict {
            answer: Answer::No,
            witness: None,
            case: None,
            note: None,
        }
    }

    pub fn no_case(case: RejectionCase) -> Self {
        Verdict {
            answer: Answer::No,
            witness: None,
            case: Some(case),
            note: None,
        }
    }

    pub fn unknown(note: impl Into<String>) -> Self {
        Verdict {
            answer: Answer::Unknown,
            witness: None,
            case: None,
            note: Some(note.into()),
        }
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }
}
