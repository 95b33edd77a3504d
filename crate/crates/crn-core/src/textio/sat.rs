//! Monotone 3-CNF input formats.
//!
//! Native format, one clause per line:
//!   vars v1 v2 v3 v4 v5      (optional, pins variable order)
//!   clause v1 v3 v4
//! A DIMACS importer is provided as a convenience; it rejects negative
//! literals, which a monotone formula cannot contain anyway.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatError {
    #[error("empty formula")]
    EmptyFormula,
    #[error("negative literal {0} in monotone formula")]
    NonMonotone(String),
    #[error("clause must have exactly 3 distinct variables: {0}")]
    WrongClauseArity(String),
    #[error("duplicate clause: {0}")]
    DuplicateClause(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("syntax error at line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

/// A monotone 3-CNF: ordered variables and clauses of variable-index triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatInstance {
    variables: Vec<String>,
    clauses: Vec<[usize; 3]>,
}

impl SatInstance {
    pub fn new(variables: Vec<String>, clauses: Vec<[usize; 3]>) -> Result<Self, SatError> {
        if clauses.is_empty() {
            return Err(SatError::EmptyFormula);
        }
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for clause in &clauses {
            for &v in clause {
                if v >= variables.len() {
                    return Err(SatError::UnknownVariable(format!("index {v}")));
                }
            }
            let set: BTreeSet<usize> = clause.iter().copied().collect();
            if set.len() != 3 {
                return Err(SatError::WrongClauseArity(format!("{clause:?}")));
            }
            if !seen.insert(set) {
                return Err(SatError::DuplicateClause(format!("{clause:?}")));
            }
        }
        Ok(SatInstance { variables, clauses })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn clauses(&self) -> &[[usize; 3]] {
        &self.clauses
    }

    /// True iff the assignment (indexed by variable) makes exactly one
    /// literal per clause true.
    pub fn one_in_three_satisfied(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().filter(|&&v| assignment[v]).count() == 1
        })
    }

    /// Brute-force 1-in-3 satisfiability over all 2^n assignments.
    pub fn one_in_three_satisfiable(&self) -> bool {
        let n = self.variables.len();
        assert!(n < 32, "brute force is for desk-scale formulas");
        (0u32..(1 << n)).any(|bits| {
            let assignment: Vec<bool> = (0..n).map(|i| bits & (1 << i) != 0).collect();
            self.one_in_three_satisfied(&assignment)
        })
    }
}

/// Parses the native monotone-3-CNF format.
pub fn parse_sat(text: &str) -> Result<SatInstance, SatError> {
    let mut variables: Vec<String> = Vec::new();
    let mut declared = false;
    let mut clauses: Vec<[usize; 3]> = Vec::new();
    let intern = |variables: &mut Vec<String>, name: &str, declared: bool| -> Result<usize, SatError> {
        if let Some(i) = variables.iter().position(|v| v == name) {
            return Ok(i);
        }
        if declared {
            return Err(SatError::UnknownVariable(name.to_string()));
        }
        variables.push(name.to_string());
        Ok(variables.len() - 1)
    };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        match words.next() {
            Some("vars") => {
                if declared || !variables.is_empty() {
                    return Err(SatError::Syntax {
                        line: line_no,
                        msg: "vars line must come first and appear once".into(),
                    });
                }
                for name in words {
                    if variables.iter().any(|v| v == name) {
                        return Err(SatError::Syntax {
                            line: line_no,
                            msg: format!("variable {name} declared twice"),
                        });
                    }
                    variables.push(name.to_string());
                }
                declared = true;
            }
            Some("clause") => {
                let mut ids = Vec::new();
                for name in words {
                    if let Some(stripped) = name.strip_prefix('-') {
                        return Err(SatError::NonMonotone(stripped.to_string()));
                    }
                    ids.push(intern(&mut variables, name, declared)?);
                }
                if ids.len() != 3 {
                    return Err(SatError::WrongClauseArity(line.to_string()));
                }
                clauses.push([ids[0], ids[1], ids[2]]);
            }
            Some(other) => {
                return Err(SatError::Syntax {
                    line: line_no,
                    msg: format!("expected `vars` or `clause`, got {other:?}"),
                });
            }
            None => {}
        }
    }
    SatInstance::new(variables, clauses)
}

/// DIMACS cnf importer; rejects negative literals.
pub fn parse_dimacs(text: &str) -> Result<SatInstance, SatError> {
    let mut nvars: Option<usize> = None;
    let mut literals: Vec<i64> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let words: Vec<&str> = rest.split_whitespace().collect();
            if words.len() != 3 || words[0] != "cnf" {
                return Err(SatError::Syntax {
                    line: line_no,
                    msg: "expected `p cnf <vars> <clauses>`".into(),
                });
            }
            nvars = Some(words[1].parse().map_err(|_| SatError::Syntax {
                line: line_no,
                msg: "bad variable count".into(),
            })?);
            continue;
        }
        for word in line.split_whitespace() {
            let lit: i64 = word.parse().map_err(|_| SatError::Syntax {
                line: line_no,
                msg: format!("bad literal {word:?}"),
            })?;
            literals.push(lit);
        }
    }
    let n = nvars.ok_or(SatError::Syntax {
        line: 1,
        msg: "missing `p cnf` header".into(),
    })?;
    let variables: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let mut clauses = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for lit in literals {
        if lit == 0 {
            if current.len() != 3 {
                return Err(SatError::WrongClauseArity(format!("{current:?}")));
            }
            clauses.push([current[0], current[1], current[2]]);
            current.clear();
        } else if lit < 0 {
            return Err(SatError::NonMonotone(format!("v{}", -lit)));
        } else {
            let v = lit as usize;
            if v > n {
                return Err(SatError::UnknownVariable(format!("v{v}")));
            }
            current.push(v - 1);
        }
    }
    if !current.is_empty() {
        return Err(SatError::Syntax {
            line: 0,
            msg: "clause not terminated by 0".into(),
        });
    }
    SatInstance::new(variables, clauses)
}

pub fn serialize_sat(sat: &SatInstance) -> String {
    let mut out = String::from("vars");
    for v in sat.variables() {
        out.push(' ');
        out.push_str(v);
    }
    out.push('\n');
    for clause in sat.clauses() {
        out.push_str("clause");
        for &v in clause {
            out.push(' ');
            out.push_str(&sat.variables()[v]);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_footnote_formula() {
        let sat = parse_sat("vars v1 v2 v3 v4 v5\nclause v1 v3 v4\nclause v3 v2 v5\n").unwrap();
        assert_eq!(sat.variables().len(), 5);
        assert_eq!(sat.clauses(), &[[0, 2, 3], [2, 1, 4]]);
        // Satisfiable by v3 = true, rest false.
        assert!(sat.one_in_three_satisfiable());
    }

    #[test]
    fn first_mention_order_without_vars_line() {
        let sat = parse_sat("clause b a c\n").unwrap();
        assert_eq!(sat.variables(), &["b", "a", "c"]);
    }

    #[test]
    fn rejects_bad_formulas() {
        assert_eq!(parse_sat("").unwrap_err(), SatError::EmptyFormula);
        assert!(matches!(
            parse_sat("clause a -b c"),
            Err(SatError::NonMonotone(_))
        ));
        assert!(matches!(
            parse_sat("clause a b"),
            Err(SatError::WrongClauseArity(_))
        ));
        assert!(matches!(
            parse_sat("clause a a b"),
            Err(SatError::WrongClauseArity(_))
        ));
        assert!(matches!(
            parse_sat("clause a b c\nclause c b a"),
            Err(SatError::DuplicateClause(_))
        ));
        assert!(matches!(
            parse_sat("vars a b\nclause a b c"),
            Err(SatError::UnknownVariable(_))
        ));
    }

    #[test]
    fn dimacs_import() {
        let sat = parse_dimacs("c comment\np cnf 4 2\n1 2 3 0\n2 3 4 0\n").unwrap();
        assert_eq!(sat.variables().len(), 4);
        assert_eq!(sat.clauses().len(), 2);
        assert!(matches!(
            parse_dimacs("p cnf 3 1\n1 -2 3 0\n"),
            Err(SatError::NonMonotone(_))
        ));
    }

    #[test]
    fn round_trip() {
        let sat = parse_sat("vars x y z w\nclause x y z\nclause x y w\n").unwrap();
        assert_eq!(parse_sat(&serialize_sat(&sat)).unwrap(), sat);
    }
}
