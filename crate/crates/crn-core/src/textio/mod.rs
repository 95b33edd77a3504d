//! Text formats: the reaction DSL, configuration syntax, monotone-3-CNF
//! and Turing-machine inputs, verdict JSON, and DOT export glue.

mod dsl;
mod json;
mod sat;
mod tm;

pub use dsl::{
    format_configuration, parse_configuration, parse_network, serialize_network, TextError,
};
pub use json::{graph_json, verdict_json, witness_json};
pub use sat::{parse_dimacs, parse_sat, serialize_sat, SatError, SatInstance};
pub use tm::{
    parse_tm, serialize_tm, simulate_tm, tm_from_table, SimOutcome, Symbol, TmError, TmSpec,
    TmTransition,
};
