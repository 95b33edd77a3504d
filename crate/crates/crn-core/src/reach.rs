//! Configuration reachability graphs and reachability queries for
//! mass-conserving networks.
//!
//! Termination of the breadth-first closure is guaranteed by mass
//! conservation (every reachable configuration satisfies m·c = m·i for a
//! strictly positive m, so counts are bounded); the builder refuses
//! networks without such an m.

use std::collections::{HashMap, VecDeque};

use num::BigUint;
use thiserror::Error;

use crate::exactq::{solve_strict_positive_kernel, RationalMatrix};
use crate::model::{fire_dense, stoichiometric_matrix, Configuration, Network};
use crate::textio::format_configuration;

pub const DEFAULT_MAX_STATES: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReachError {
    #[error("network is not mass conserving; breadth-first closure may not terminate")]
    NotMassConserving,
    #[error("state budget of {budget} states exceeded")]
    StateBudgetExceeded {
        budget: usize,
        partial: Box<ReachGraph>,
    },
    #[error("configuration error: {0}")]
    BadConfiguration(String),
}

/// The i-initiated configuration reachability graph: vertices in discovery
/// order, edges (from, reaction index, to) by vertex index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachGraph {
    pub initial: Configuration,
    pub vertices: Vec<Configuration>,
    pub edges: Vec<(usize, usize, usize)>,
    pub complete: bool,
}

/// Requires a strictly positive mass vector before any state-space walk.
fn require_mass_conserving(network: &Network) -> Result<(), ReachError> {
    let a = RationalMatrix::from_stoich(&stoichiometric_matrix(network));
    if a.cols() == 0 {
        return Ok(()); // no species, nothing to expand
    }
    match solve_strict_positive_kernel(&a) {
        Some(_) => Ok(()),
        None => Err(ReachError::NotMassConserving),
    }
}

struct Bfs {
    vertices: Vec<Vec<BigUint>>,
    index: HashMap<Vec<BigUint>, usize>,
    edges: Vec<(usize, usize, usize)>,
    parent: Vec<Option<(usize, usize)>>,
    complete: bool,
}

fn bfs(network: &Network, initial: Vec<BigUint>, max_states: usize) -> Bfs {
    let mut vertices = vec![initial.clone()];
    let mut index = HashMap::new();
    index.insert(initial, 0usize);
    let mut edges = Vec::new();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut queue = VecDeque::new();
    queue.push_back(0usize);
    let mut complete = true;
    'outer: while let Some(v) = queue.pop_front() {
        for t in 0..network.reactions().len() {
            let c = &vertices[v];
            let next = match fire_dense(network, c, t) {
                Some(n) => n,
                None => continue,
            };
            let to = match index.get(&next) {
                Some(&to) => to,
                None => {
                    if vertices.len() >= max_states {
                        complete = false;
                        break 'outer;
                    }
                    let to = vertices.len();
                    vertices.push(next.clone());
                    index.insert(next, to);
                    parent.push(Some((v, t)));
                    queue.push_back(to);
                    to
                }
            };
            edges.push((v, t, to));
        }
    }
    Bfs {
        vertices,
        index,
        edges,
        parent,
        complete,
    }
}

/// Breadth-first closure of `initial` under single reaction firings.
/// Complete iff the state count stays within `max_states`; on overflow the
/// partial graph is returned inside the error.
pub fn build_config_graph(
    network: &Network,
    initial: &Configuration,
    max_states: usize,
) -> Result<ReachGraph, ReachError> {
    require_mass_conserving(network)?;
    let dense = network
        .dense(initial)
        .map_err(|e| ReachError::BadConfiguration(e.to_string()))?;
    let walk = bfs(network, dense, max_states);
    let graph = ReachGraph {
        initial: initial.clone(),
        vertices: walk
            .vertices
            .iter()
            .map(|v| network.config_from_dense(v))
            .collect(),
        edges: walk.edges,
        complete: walk.complete,
    };
    if graph.complete {
        Ok(graph)
    } else {
        Err(ReachError::StateBudgetExceeded {
            budget: max_states,
            partial: Box::new(graph),
        })
    }
}

/// Three-valued reachability answer with a shortest witness path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reachability {
    /// Reaction indices of a shortest firing sequence from `from` to `to`.
    Yes(Vec<usize>),
    No,
    /// The state budget ran out before `to` was found.
    Unknown,
}

/// Decides from ⇒* to by breadth-first search; the returned firing
/// sequence is shortest. `No` is only reported when the closure completed.
pub fn reachable(
    network: &Network,
    from: &Configuration,
    to: &Configuration,
    max_states: usize,
) -> Result<Reachability, ReachError> {
    require_mass_conserving(network)?;
    let from_dense = network
        .dense(from)
        .map_err(|e| ReachError::BadConfiguration(e.to_string()))?;
    let to_dense = network
        .dense(to)
        .map_err(|e| ReachError::BadConfiguration(e.to_string()))?;
    let walk = bfs(network, from_dense, max_states);
    match walk.index.get(&to_dense) {
        Some(&v) => {
            let mut path = Vec::new();
            let mut cur = v;
            while let Some((prev, t)) = walk.parent[cur] {
                path.push(t);
                cur = prev;
            }
            path.reverse();
            Ok(Reachability::Yes(path))
        }
        None if walk.complete => Ok(Reachability::No),
        None => Ok(Reachability::Unknown),
    }
}

/// DOT rendering: node ids are canonical configuration strings, the
/// initial vertex is a doublecircle, vertices appear in discovery order.
pub fn export_dot(network: &Network, graph: &ReachGraph) -> String {
    let mut out = String::from("digraph reachability {\n");
    for (i, c) in graph.vertices.iter().enumerate() {
        let id = format_configuration(network, c);
        if i == 0 {
            out.push_str(&format!("  \"{id}\" [shape=doublecircle];\n"));
        } else {
            out.push_str(&format!("  \"{id}\";\n"));
        }
    }
    for (from, t, to) in &graph.edges {
        let from_id = format_configuration(network, &graph.vertices[*from]);
        let to_id = format_configuration(network, &graph.vertices[*to]);
        out.push_str(&format!("  \"{from_id}\" -> \"{to_id}\" [label=\"r{t}\"];\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::{parse_configuration, parse_network};

    /// The worked reachability example: Λ = (S1, S2, S3, A1).
    pub(crate) fn example_network() -> Network {
        parse_network("# species: S1 S2 S3 A1\nS1 -> 4A1\nS2 -> 9A1\n2S1 + S2 -> S3\n").unwrap()
    }

    #[test]
    fn three_vertex_graph() {
        let net = example_network();
        let i = parse_configuration("{2S2, 1S3}", &net).unwrap();
        let g = build_config_graph(&net, &i, DEFAULT_MAX_STATES).unwrap();
        assert_eq!(g.vertices.len(), 3);
        assert_eq!(g.edges.len(), 2);
        let labels: Vec<String> = g
            .vertices
            .iter()
            .map(|c| format_configuration(&net, c))
            .collect();
        assert_eq!(
            labels,
            vec!["{2S2, 1S3}", "{1S2, 1S3, 9A1}", "{1S3, 18A1}"]
        );
    }

    #[test]
    fn zero_initial_gives_single_vertex() {
        let net = example_network();
        let i = parse_configuration("{}", &net).unwrap();
        let g = build_config_graph(&net, &i, DEFAULT_MAX_STATES).unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert!(g.edges.is_empty());
    }

    #[test]
    fn seven_vertex_graph() {
        let net = example_network();
        let i = parse_configuration("{2S1, 1S2, 3S3}", &net).unwrap();
        let g = build_config_graph(&net, &i, DEFAULT_MAX_STATES).unwrap();
        assert_eq!(g.vertices.len(), 7);
    }

    #[test]
    fn reachable_with_shortest_path() {
        let net = example_network();
        let from = parse_configuration("{2S2, 1S3}", &net).unwrap();
        let to = parse_configuration("{1S3, 18A1}", &net).unwrap();
        match reachable(&net, &from, &to, DEFAULT_MAX_STATES).unwrap() {
            Reachability::Yes(path) => assert_eq!(path, vec![1, 1]),
            other => panic!("expected yes, got {other:?}"),
        }
        // Reflexivity via the empty sequence.
        match reachable(&net, &from, &from, DEFAULT_MAX_STATES).unwrap() {
            Reachability::Yes(path) => assert!(path.is_empty()),
            other => panic!("expected yes, got {other:?}"),
        }
        let unreachable = parse_configuration("{1S1}", &net).unwrap();
        assert_eq!(
            reachable(&net, &from, &unreachable, DEFAULT_MAX_STATES).unwrap(),
            Reachability::No
        );
    }

    #[test]
    fn non_conserving_networks_are_refused() {
        let net = parse_network("X -> 2X").unwrap();
        let c = parse_configuration("{1X}", &net).unwrap();
        assert!(matches!(
            build_config_graph(&net, &c, 10),
            Err(ReachError::NotMassConserving)
        ));
        assert!(matches!(
            reachable(&net, &c, &c, 10),
            Err(ReachError::NotMassConserving)
        ));
    }

    #[test]
    fn budget_exceeded_returns_partial_graph() {
        let net = example_network();
        let i = parse_configuration("{2S1, 1S2, 3S3}", &net).unwrap();
        match build_config_graph(&net, &i, 3) {
            Err(ReachError::StateBudgetExceeded { partial, .. }) => {
                assert!(!partial.complete);
                assert_eq!(partial.vertices.len(), 3);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn dot_export_shape() {
        let net = example_network();
        let i = parse_configuration("{2S2, 1S3}", &net).unwrap();
        let g = build_config_graph(&net, &i, DEFAULT_MAX_STATES).unwrap();
        let dot = export_dot(&net, &g);
        assert_eq!(dot.matches("doublecircle").count(), 1);
        assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 2);
        // 3 node lines + 2 edge lines + braces.
        assert_eq!(dot.lines().count(), 7);
    }
}
