//! Independent witness checker: re-verifies every definition condition from
//! scratch, without reusing anything the deciders computed.

use std::collections::{HashSet, VecDeque};

use num::{BigInt, BigUint, One, Zero};

use crate::deciders::DecompositionWitness;
use crate::model::{fire_dense, stoichiometric_matrix, Network};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomicityClass {
    Primitive,
    Subset,
    Reachably,
    ReversiblyReachably,
}

/// Re-verifies the algebraic witness conditions: dimensions, nonzero rows,
/// A·D = 0, atom usage, and for the subset classes the e_A rows and the
/// molecule-size bound. Reachability conditions are checked separately by
/// [`verify_witness_reachability`] / [`verify_recomposability`].
pub fn verify_witness(
    network: &Network,
    witness: &DecompositionWitness,
    class: AtomicityClass,
) -> Result<(), String> {
    let n_species = network.species().len();
    let n_atoms = witness.atoms.len();
    if n_atoms == 0 {
        return Err("empty atom set".into());
    }
    if witness.rows.len() != n_species {
        return Err(format!(
            "decomposition matrix has {} rows, Λ has {} species",
            witness.rows.len(),
            n_species
        ));
    }
    if witness.rows.iter().any(|r| r.len() != n_atoms) {
        return Err("ragged decomposition matrix".into());
    }
    {
        let mut seen = HashSet::new();
        for a in &witness.atoms {
            if !seen.insert(a) {
                return Err(format!("duplicate atom {a}"));
            }
        }
    }
    for (i, row) in witness.rows.iter().enumerate() {
        if row.iter().all(|v| v.is_zero()) {
            return Err(format!(
                "species {} has an all-zero decomposition",
                network.species()[i]
            ));
        }
    }

    // A·D = 0, recomputed exactly from the definition.
    let a = stoichiometric_matrix(network);
    for (t, row) in a.rows().iter().enumerate() {
        for col in 0..n_atoms {
            let mut sum = BigInt::zero();
            for (s, coeff) in row.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                sum += coeff * BigInt::from(witness.rows[s][col].clone());
            }
            if !sum.is_zero() {
                return Err(format!(
                    "reaction {t} does not preserve atom {}",
                    witness.atoms[col]
                ));
            }
        }
    }

    match class {
        AtomicityClass::Primitive => {
            // Atoms are fresh symbols disjoint from Λ; each atom column must
            // be used by some species.
            for name in &witness.atoms {
                if network.species_by_name(name).is_some() {
                    return Err(format!("primitive atom {name} collides with a species"));
                }
            }
            for col in 0..n_atoms {
                if witness.rows.iter().all(|r| r[col].is_zero()) {
                    return Err(format!("atom {} is unused", witness.atoms[col]));
                }
            }
        }
        AtomicityClass::Subset | AtomicityClass::Reachably | AtomicityClass::ReversiblyReachably => {
            let atom_indices: Result<Vec<usize>, String> = witness
                .atoms
                .iter()
                .map(|name| {
                    network
                        .species_by_name(name)
                        .and_then(|s| network.species_index(s))
                        .ok_or_else(|| format!("atom {name} is not a species"))
                })
                .collect();
            let atom_indices = atom_indices?;
            if atom_indices.len() == n_species {
                return Err("atom set equals Λ".into());
            }
            let is_atom: HashSet<usize> = atom_indices.iter().copied().collect();
            // d_A = e_A for each atom.
            for (col, &s_idx) in atom_indices.iter().enumerate() {
                for (c, v) in witness.rows[s_idx].iter().enumerate() {
                    let expect_one = c == col;
                    if expect_one && !v.is_one() {
                        return Err(format!("atom {} row is not e_A", witness.atoms[col]));
                    }
                    if !expect_one && !v.is_zero() {
                        return Err(format!("atom {} row is not e_A", witness.atoms[col]));
                    }
                }
            }
            // Molecules decompose into at least 2 atoms.
            for s_idx in 0..n_species {
                if is_atom.contains(&s_idx) {
                    continue;
                }
                let size: BigUint = witness.rows[s_idx].iter().sum();
                if size < BigUint::from(2u32) {
                    return Err(format!(
                        "molecule {} decomposes into fewer than 2 atoms",
                        network.species()[s_idx]
                    ));
                }
            }
            // Each atom appears in some molecule's decomposition.
            for col in 0..n_atoms {
                let used = (0..n_species)
                    .filter(|s| !is_atom.contains(s))
                    .any(|s| !witness.rows[s][col].is_zero());
                if !used {
                    return Err(format!(
                        "atom {} appears in no molecule's decomposition",
                        witness.atoms[col]
                    ));
                }
            }
        }
    }
    Ok(())
}

/// The dense configuration d_S embedded into N^Λ (atoms at their species
/// coordinates).
fn embedded_decomposition(
    network: &Network,
    witness: &DecompositionWitness,
    s_idx: usize,
) -> Result<Vec<BigUint>, String> {
    let mut target = vec![BigUint::zero(); network.species().len()];
    for (col, name) in witness.atoms.iter().enumerate() {
        let a_idx = network
            .species_by_name(name)
            .and_then(|s| network.species_index(s))
            .ok_or_else(|| format!("atom {name} is not a species"))?;
        target[a_idx] = witness.rows[s_idx][col].clone();
    }
    Ok(target)
}

fn bfs_reaches(
    network: &Network,
    start: Vec<BigUint>,
    target: &[BigUint],
    budget: usize,
) -> Result<bool, String> {
    let mut seen: HashSet<Vec<BigUint>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(c) = queue.pop_front() {
        if c == target {
            return Ok(true);
        }
        for t in 0..network.reactions().len() {
            if let Some(next) = fire_dense(network, &c, t) {
                if seen.contains(&next) {
                    continue;
                }
                if seen.len() >= budget {
                    return Err(format!("reachability budget of {budget} states exhausted"));
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(false)
}

/// Confirms {1S} ⇒* d_S for every molecule by explicit bounded search.
pub fn verify_witness_reachability(
    network: &Network,
    witness: &DecompositionWitness,
    budget: usize,
) -> Result<(), String> {
    let atom_names: HashSet<&str> = witness.atoms.iter().map(|s| s.as_str()).collect();
    for (s_idx, species) in network.species().iter().enumerate() {
        if atom_names.contains(species.name()) {
            continue;
        }
        let mut start = vec![BigUint::zero(); network.species().len()];
        start[s_idx] = BigUint::one();
        let target = embedded_decomposition(network, witness, s_idx)?;
        if !bfs_reaches(network, start, &target, budget)? {
            return Err(format!("{{1{species}}} does not reach its decomposition"));
        }
    }
    Ok(())
}

/// Confirms d_S ⇒* {1S} for every molecule by explicit bounded search.
pub fn verify_recomposability(
    network: &Network,
    witness: &DecompositionWitness,
    budget: usize,
) -> Result<(), String> {
    let atom_names: HashSet<&str> = witness.atoms.iter().map(|s| s.as_str()).collect();
    for (s_idx, species) in network.species().iter().enumerate() {
        if atom_names.contains(species.name()) {
            continue;
        }
        let mut target = vec![BigUint::zero(); network.species().len()];
        target[s_idx] = BigUint::one();
        let start = embedded_decomposition(network, witness, s_idx)?;
        if !bfs_reaches(network, start, &target, budget)? {
            return Err(format!("decomposition of {species} does not reach {{1{species}}}"));
        }
    }
    Ok(())
}

/// Dᵀ·c: the per-atom totals of a dense configuration.
pub fn atom_counts(witness: &DecompositionWitness, dense: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); witness.atoms.len()];
    for (s, count) in dense.iter().enumerate() {
        if count.is_zero() {
            continue;
        }
        for (col, v) in witness.rows[s].iter().enumerate() {
            out[col] += v * count;
        }
    }
    out
}
