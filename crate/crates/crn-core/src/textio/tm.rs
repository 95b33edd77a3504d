//! Space-bounded Turing machine descriptions (JSON) and a direct simulator.
//!
//! The tape alphabet is fixed to {0, 1, blank}; the head works on cells
//! 1..=space_bound. Clocking is enforced by the simulator's configuration
//! budget rather than a step counter.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TmError {
    #[error("invalid machine: {0}")]
    Invalid(String),
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("input longer than the space bound")]
    InputTooLong,
    #[error("input symbol must be 0 or 1, got {0:?}")]
    BadInputSymbol(char),
}

/// Tape symbol: 0, 1, or blank (written `_` in text).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Symbol {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "_")]
    Blank,
}

impl Symbol {
    pub fn tag(self) -> &'static str {
        match self {
            Symbol::Zero => "0",
            Symbol::One => "1",
            Symbol::Blank => "b",
        }
    }

    pub const ALL: [Symbol; 3] = [Symbol::Zero, Symbol::One, Symbol::Blank];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TmTransition {
    pub state: String,
    pub read: Symbol,
    pub next: String,
    pub write: Symbol,
    /// Head move: −1 or +1.
    #[serde(rename = "move")]
    pub move_dir: i8,
}

/// A clocked, space-bounded Turing machine description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TmSpec {
    pub states: Vec<String>,
    pub initial: String,
    pub accept: String,
    pub reject: String,
    pub space_bound: usize,
    pub transitions: Vec<TmTransition>,
}

impl TmSpec {
    pub fn validate(&self) -> Result<(), TmError> {
        if self.space_bound == 0 {
            return Err(TmError::Invalid("space bound must be positive".into()));
        }
        let states: BTreeSet<&String> = self.states.iter().collect();
        if states.len() != self.states.len() {
            return Err(TmError::Invalid("duplicate state names".into()));
        }
        for s in [&self.initial, &self.accept, &self.reject] {
            if !states.contains(s) {
                return Err(TmError::Invalid(format!("designated state {s} not listed")));
            }
        }
        if self.accept == self.reject {
            return Err(TmError::Invalid("accept and reject must differ".into()));
        }
        let mut keys = BTreeSet::new();
        for t in &self.transitions {
            if !states.contains(&t.state) || !states.contains(&t.next) {
                return Err(TmError::Invalid(format!(
                    "transition uses unknown state: {} -> {}",
                    t.state, t.next
                )));
            }
            if t.state == self.accept || t.state == self.reject {
                return Err(TmError::Invalid(format!(
                    "no transitions may leave {}",
                    t.state
                )));
            }
            if t.move_dir != -1 && t.move_dir != 1 {
                return Err(TmError::Invalid("move must be -1 or +1".into()));
            }
            if !keys.insert((t.state.clone(), t.read)) {
                return Err(TmError::Invalid(format!(
                    "duplicate transition for ({}, {:?})",
                    t.state, t.read
                )));
            }
        }
        Ok(())
    }

    pub fn transition(&self, state: &str, read: Symbol) -> Option<&TmTransition> {
        self.transitions
            .iter()
            .find(|t| t.state == state && t.read == read)
    }
}

pub fn parse_tm(text: &str) -> Result<TmSpec, TmError> {
    let tm: TmSpec = serde_json::from_str(text).map_err(|e| TmError::Json(e.to_string()))?;
    tm.validate()?;
    Ok(tm)
}

pub fn serialize_tm(tm: &TmSpec) -> String {
    serde_json::to_string_pretty(tm).expect("serializable")
}

/// Result of a direct simulation run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimOutcome {
    /// Reached the accept state; records whether the run honored the
    /// blank-the-tape-and-return-the-head discipline.
    Accept { clean: bool },
    Reject,
    /// No halt within the configuration budget: the machine loops.
    Loop,
    /// A transition tried to move the head below cell 1 or above cell p.
    OffTape,
    /// A (state, symbol) pair with no transition; treated as a stuck reject.
    Stuck,
}

/// Runs the machine on `input` (a 0/1 string, |input| ≤ space_bound).
pub fn simulate_tm(tm: &TmSpec, input: &str) -> Result<SimOutcome, TmError> {
    tm.validate()?;
    let p = tm.space_bound;
    if input.len() > p {
        return Err(TmError::InputTooLong);
    }
    let mut tape = vec![Symbol::Blank; p];
    for (i, c) in input.chars().enumerate() {
        tape[i] = match c {
            '0' => Symbol::Zero,
            '1' => Symbol::One,
            other => return Err(TmError::BadInputSymbol(other)),
        };
    }
    let mut state = tm.initial.clone();
    let mut head: usize = 1;
    let mut seen: BTreeSet<(String, usize, Vec<Symbol>)> = BTreeSet::new();
    loop {
        if state == tm.accept {
            let clean = head == 1 && tape.iter().all(|&s| s == Symbol::Blank);
            return Ok(SimOutcome::Accept { clean });
        }
        if state == tm.reject {
            return Ok(SimOutcome::Reject);
        }
        if !seen.insert((state.clone(), head, tape.clone())) {
            return Ok(SimOutcome::Loop);
        }
        let read = tape[head - 1];
        let t = match tm.transition(&state, read) {
            Some(t) => t.clone(),
            None => return Ok(SimOutcome::Stuck),
        };
        tape[head - 1] = t.write;
        let next_head = head as i64 + t.move_dir as i64;
        if next_head < 1 || next_head > p as i64 {
            return Ok(SimOutcome::OffTape);
        }
        head = next_head as usize;
        state = t.next;
    }
}

/// A small builder used by tests and docs.
pub fn tm_from_table(
    states: &[&str],
    initial: &str,
    accept: &str,
    reject: &str,
    space_bound: usize,
    table: &[(&str, Symbol, &str, Symbol, i8)],
) -> TmSpec {
    TmSpec {
        states: states.iter().map(|s| s.to_string()).collect(),
        initial: initial.to_string(),
        accept: accept.to_string(),
        reject: reject.to_string(),
        space_bound,
        transitions: table
            .iter()
            .map(|(state, read, next, write, mv)| TmTransition {
                state: state.to_string(),
                read: *read,
                next: next.to_string(),
                write: *write,
                move_dir: *mv,
            })
            .collect(),
    }
}
