//! Analysis toolkit for chemical reaction networks: atomicity deciders with
//! machine-checkable witnesses, configuration reachability over
//! mass-conserving networks, hardness-instance generators, and
//! composition-map checks.

pub mod composition;
pub mod deciders;
pub mod exactq;
pub mod model;
pub mod reach;
pub mod reductions;
pub mod textio;

pub use deciders::{Answer, AtomSet, DecompositionWitness, RejectionCase, Verdict};
pub use model::{Configuration, Network, Reaction, Species, StoichMatrix, ValidationError};
