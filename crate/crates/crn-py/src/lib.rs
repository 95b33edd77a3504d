//! Python bindings: the network type, the four atomicity deciders,
//! reachability queries, and the reduction generators.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use num::BigUint;
use serde_json::Value;

use crn_core::composition::{
    associated_composition, elementary_classes_are_singletons, explicit_constructibility_report,
    is_core, is_explicitly_reversibly_constructive, is_near_core, CompositionMap,
};
use crn_core::deciders::{
    decide_primitive_atomic, decide_reachably_atomic, decide_reversibly_reachably_atomic,
    decide_subset_atomic, decide_subset_fixed_atomic, AtomSet,
};
use crn_core::reach::{build_config_graph, export_dot, reachable, ReachError, Reachability};
use crn_core::reductions as red;
use crn_core::textio::{
    format_configuration, graph_json, parse_configuration, parse_network, parse_sat, parse_tm,
    serialize_network, verdict_json,
};

fn value_to_py(py: Python<'_>, value: &Value) -> PyResult<PyObject> {
    Ok(match value {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_py(py),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_py(py)
            } else if let Some(u) = n.as_u64() {
                u.into_py(py)
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_py(py)
            }
        }
        Value::String(s) => s.into_py(py),
        Value::Array(items) => {
            let list = PyList::empty_bound(py);
            for item in items {
                list.append(value_to_py(py, item)?)?;
            }
            list.into_py(py)
        }
        Value::Object(map) => {
            let dict = PyDict::new_bound(py);
            for (k, v) in map {
                dict.set_item(k, value_to_py(py, v)?)?;
            }
            dict.into_py(py)
        }
    })
}

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A validated chemical reaction network.
#[pyclass]
struct Network {
    inner: crn_core::Network,
}

#[pymethods]
impl Network {
    /// Parses the reaction DSL (one reaction per line).
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Network {
            inner: parse_network(text).map_err(err)?,
        })
    }

    fn species(&self) -> Vec<String> {
        self.inner
            .species()
            .iter()
            .map(|s| s.name().to_string())
            .collect()
    }

    fn reactions(&self) -> Vec<String> {
        self.inner.reactions().iter().map(|r| r.to_string()).collect()
    }

    /// |R| × |Λ| stoichiometric matrix as Python ints.
    fn stoichiometric_matrix(&self, py: Python<'_>) -> PyResult<PyObject> {
        let a = crn_core::model::stoichiometric_matrix(&self.inner);
        let rows = PyList::empty_bound(py);
        for row in a.rows() {
            let out = PyList::empty_bound(py);
            for v in row {
                out.append(v.to_string().parse::<i128>().map_err(err)?)?;
            }
            rows.append(out)?;
        }
        Ok(rows.into_py(py))
    }

    fn serialize(&self) -> String {
        serialize_network(&self.inner)
    }

    fn decide_primitive(&self, py: Python<'_>) -> PyResult<PyObject> {
        let v = decide_primitive_atomic(&self.inner).map_err(err)?;
        value_to_py(py, &verdict_json(&self.inner, "decide primitive", &v))
    }

    #[pyo3(signature = (ip_bound=None))]
    fn decide_subset(&self, py: Python<'_>, ip_bound: Option<u64>) -> PyResult<PyObject> {
        let bound = ip_bound.map(BigUint::from);
        let v = decide_subset_atomic(&self.inner, bound.as_ref());
        value_to_py(py, &verdict_json(&self.inner, "decide subset", &v))
    }

    #[pyo3(signature = (atoms, ip_bound=None))]
    fn decide_subset_fixed(
        &self,
        py: Python<'_>,
        atoms: Vec<String>,
        ip_bound: Option<u64>,
    ) -> PyResult<PyObject> {
        let names: Vec<&str> = atoms.iter().map(|s| s.as_str()).collect();
        let atoms = AtomSet::from_names(&self.inner, &names).map_err(err)?;
        let bound = ip_bound.map(BigUint::from);
        let v = decide_subset_fixed_atomic(&self.inner, &atoms, bound.as_ref()).map_err(err)?;
        value_to_py(py, &verdict_json(&self.inner, "decide subset-fixed", &v))
    }

    fn decide_reachable(&self, py: Python<'_>) -> PyResult<PyObject> {
        let v = decide_reachably_atomic(&self.inner);
        value_to_py(py, &verdict_json(&self.inner, "decide reachable", &v))
    }

    fn decide_rev_reachable(&self, py: Python<'_>) -> PyResult<PyObject> {
        let v = decide_reversibly_reachably_atomic(&self.inner);
        value_to_py(py, &verdict_json(&self.inner, "decide rev-reachable", &v))
    }

    /// Reachability query; configurations in `{2A, 1B}` or `A:2 B:1` form.
    #[pyo3(signature = (from_cfg, to_cfg, max_states=1_000_000))]
    fn reachable(
        &self,
        py: Python<'_>,
        from_cfg: &str,
        to_cfg: &str,
        max_states: usize,
    ) -> PyResult<PyObject> {
        let from = parse_configuration(from_cfg, &self.inner).map_err(err)?;
        let to = parse_configuration(to_cfg, &self.inner).map_err(err)?;
        let outcome = reachable(&self.inner, &from, &to, max_states).map_err(err)?;
        let dict = PyDict::new_bound(py);
        match outcome {
            Reachability::Yes(path) => {
                dict.set_item("answer", "yes")?;
                dict.set_item("path", path)?;
            }
            Reachability::No => dict.set_item("answer", "no")?,
            Reachability::Unknown => dict.set_item("answer", "unknown")?,
        }
        Ok(dict.into_py(py))
    }

    #[pyo3(signature = (from_cfg, max_states=1_000_000))]
    fn graph_dot(&self, from_cfg: &str, max_states: usize) -> PyResult<String> {
        let from = parse_configuration(from_cfg, &self.inner).map_err(err)?;
        let graph = match build_config_graph(&self.inner, &from, max_states) {
            Ok(g) => g,
            Err(ReachError::StateBudgetExceeded { partial, .. }) => *partial,
            Err(e) => return Err(err(e)),
        };
        Ok(export_dot(&self.inner, &graph))
    }

    #[pyo3(signature = (from_cfg, max_states=1_000_000))]
    fn graph(&self, py: Python<'_>, from_cfg: &str, max_states: usize) -> PyResult<PyObject> {
        let from = parse_configuration(from_cfg, &self.inner).map_err(err)?;
        let graph = match build_config_graph(&self.inner, &from, max_states) {
            Ok(g) => g,
            Err(ReachError::StateBudgetExceeded { partial, .. }) => *partial,
            Err(e) => return Err(err(e)),
        };
        value_to_py(py, &graph_json(&self.inner, &graph))
    }

    /// Near-core / core / explicitly-reversibly-constructive checks against
    /// a composition map (JSON text); None uses the associated composition
    /// of the reachably-atomic witness.
    #[pyo3(signature = (check, map_json=None))]
    fn compose_check(&self, py: Python<'_>, check: &str, map_json: Option<&str>) -> PyResult<PyObject> {
        let e = match map_json {
            Some(text) => {
                let value: Value = serde_json::from_str(text).map_err(err)?;
                CompositionMap::from_json(&value).map_err(err)?
            }
            None => {
                let v = decide_reachably_atomic(&self.inner);
                let w = v
                    .witness
                    .ok_or_else(|| err("network is not reachably atomic; pass map_json"))?;
                associated_composition(&self.inner, &w).map_err(err)?
            }
        };
        let outcome = match check {
            "near-core" => is_near_core(&self.inner, &e).map_err(err)?,
            "core" => is_core(&self.inner, &e).map_err(err)?,
            "erc" => is_explicitly_reversibly_constructive(&self.inner, &e).map_err(err)?,
            other => return Err(err(format!("unknown check {other:?}"))),
        };
        let dict = PyDict::new_bound(py);
        dict.set_item("answer", if outcome.is_yes() { "yes" } else { "no" })?;
        if let Some(reason) = outcome.reason() {
            dict.set_item("reason", reason)?;
        }
        dict.set_item(
            "elementary_classes_singleton",
            elementary_classes_are_singletons(&e),
        )?;
        Ok(dict.into_py(py))
    }

    fn constructibility_report(&self, py: Python<'_>) -> PyResult<PyObject> {
        let report = explicit_constructibility_report(&self.inner);
        value_to_py(py, &report.to_json())
    }
}

/// Monotone 1-in-3 SAT text → reduction instance.
#[pyfunction]
fn sat_to_crn(py: Python<'_>, sat_text: &str) -> PyResult<PyObject> {
    let sat = parse_sat(sat_text).map_err(err)?;
    let inst = red::sat_to_crn(&sat);
    let dict = PyDict::new_bound(py);
    dict.set_item("network", serialize_network(&inst.network))?;
    if let Some(atoms) = &inst.atoms {
        let names: Vec<String> = atoms
            .species()
            .iter()
            .map(|s| s.name().to_string())
            .collect();
        dict.set_item("atoms", names)?;
    }
    dict.set_item("provenance", inst.provenance.clone())?;
    Ok(dict.into_py(py))
}

/// TM JSON + binary input → reachability instance.
#[pyfunction]
fn tm_to_crn(py: Python<'_>, tm_json: &str, input: &str) -> PyResult<PyObject> {
    let tm = parse_tm(tm_json).map_err(err)?;
    let inst = red::tm_to_crn(&tm, input).map_err(err)?;
    let dict = PyDict::new_bound(py);
    dict.set_item("network", serialize_network(&inst.network))?;
    let (c1, c2) = inst.endpoints.as_ref().expect("endpoints");
    dict.set_item("from", format_configuration(&inst.network, c1))?;
    dict.set_item("to", format_configuration(&inst.network, c2))?;
    dict.set_item("provenance", inst.provenance.clone())?;
    Ok(dict.into_py(py))
}

/// Folds every reaction into unimolecular/bimolecular form.
#[pyfunction]
fn bimolecularize(network_text: &str) -> PyResult<String> {
    let network = parse_network(network_text).map_err(err)?;
    Ok(serialize_network(&red::bimolecularize(&network)))
}

#[pymodule]
fn crn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Network>()?;
    m.add_function(wrap_pyfunction!(sat_to_crn, m)?)?;
    m.add_function(wrap_pyfunction!(tm_to_crn, m)?)?;
    m.add_function(wrap_pyfunction!(bimolecularize, m)?)?;
    Ok(())
}
