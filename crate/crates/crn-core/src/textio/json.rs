//! Verdict and graph JSON. Counts are serialized as decimal strings so the
//! schema stays uniform under arbitrary-precision values.

use serde_json::{json, Map, Value};

use crate::deciders::{DecompositionWitness, Verdict};
use crate::model::Network;
use crate::reach::ReachGraph;
use crate::textio::format_configuration;

/// `{"atoms": [...], "decomposition": {species: [counts...]}}`.
pub fn witness_json(network: &Network, witness: &DecompositionWitness) -> Value {
    let mut decomposition = Map::new();
    for (i, s) in network.species().iter().enumerate() {
        let row: Vec<Value> = witness.rows[i]
            .iter()
            .map(|v| Value::String(v.to_string()))
            .collect();
        decomposition.insert(s.name().to_string(), Value::Array(row));
    }
    json!({
        "atoms": witness.atoms,
        "decomposition": decomposition,
    })
}

/// The verdict schema shared by every query:
/// `{"query", "answer", "witness", "diagnostics": {"case", ...}}`.
pub fn verdict_json(network: &Network, query: &str, verdict: &Verdict) -> Value {
    let witness = verdict
        .witness
        .as_ref()
        .map(|w| witness_json(network, w))
        .unwrap_or(Value::Null);
    let mut diagnostics = Map::new();
    diagnostics.insert(
        "case".into(),
        match verdict.case {
            Some(c) => Value::String(c.label().to_string()),
            None => Value::Null,
        },
    );
    if let Some(note) = &verdict.note {
        diagnostics.insert("note".into(), Value::String(note.clone()));
    }
    json!({
        "query": query,
        "answer": verdict.answer.label(),
        "witness": witness,
        "diagnostics": diagnostics,
    })
}

/// `{"vertices": [canonical strings], "edges": [[from, rxn, to]]}`.
pub fn graph_json(network: &Network, graph: &ReachGraph) -> Value {
    let vertices: Vec<Value> = graph
        .vertices
        .iter()
        .map(|c| Value::String(format_configuration(network, c)))
        .collect();
    let edges: Vec<Value> = graph
        .edges
        .iter()
        .map(|(from, t, to)| json!([from, t, to]))
        .collect();
    json!({
        "vertices": vertices,
        "edges": edges,
        "complete": graph.complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deciders::decide_primitive_atomic;
    use crate::textio::parse_network;

    #[test]
    fn primitive_yes_verdict_shape() {
        let net = parse_network("2X + Y + Z -> 2W + Z\nX + 2Y + W + Z -> Y + W + 2Z").unwrap();
        let v = decide_primitive_atomic(&net).unwrap();
        let json = verdict_json(&net, "decide primitive", &v);
        assert_eq!(json["answer"], "yes");
        assert_eq!(json["witness"]["atoms"], json!(["A1"]));
        assert!(json["witness"]["decomposition"]["X"].is_array());
        assert_eq!(json["diagnostics"]["case"], Value::Null);
    }

    #[test]
    fn verdict_json_is_deterministic() {
        let net = parse_network("X -> 2X").unwrap();
        let v = decide_primitive_atomic(&net).unwrap();
        let a = serde_json::to_string(&verdict_json(&net, "decide primitive", &v)).unwrap();
        let b = serde_json::to_string(&verdict_json(&net, "decide primitive", &v)).unwrap();
        assert_eq!(a, b);
    }
}
