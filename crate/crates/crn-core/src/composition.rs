//! Composition-map analysis: extended compositions, near-core and core
//! tests, single-molecule decomposition vectors, and explicit
//! constructibility classification.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, BigUint, One, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::deciders::DecompositionWitness;
use crate::exactq::{rank_and_kernel_basis, stoich_rank, RationalMatrix};
use crate::model::{Network, Species};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompositionError {
    #[error("species {0} maps to the zero vector")]
    ZeroImage(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("species {0} has no image under the composition map")]
    MissingSpecies(String),
    #[error("invalid composition JSON: {0}")]
    Json(String),
}

/// A species composition map E: Λ → N^n ∖ {0}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionMap {
    n: usize,
    map: BTreeMap<Species, Vec<BigUint>>,
}

impl CompositionMap {
    pub fn new(n: usize, map: BTreeMap<Species, Vec<BigUint>>) -> Result<Self, CompositionError> {
        if n == 0 {
            return Err(CompositionError::DimensionMismatch("n must be ≥ 1".into()));
        }
        for (s, image) in &map {
            if image.len() != n {
                return Err(CompositionError::DimensionMismatch(format!(
                    "image of {s} has length {}, expected {n}",
                    image.len()
                )));
            }
            if image.iter().all(|v| v.is_zero()) {
                return Err(CompositionError::ZeroImage(s.name().to_string()));
            }
        }
        Ok(CompositionMap { n, map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn image(&self, s: &Species) -> Option<&[BigUint]> {
        self.map.get(s).map(|v| v.as_slice())
    }

    fn image_checked(&self, s: &Species) -> Result<&[BigUint], CompositionError> {
        self.image(s)
            .ok_or_else(|| CompositionError::MissingSpecies(s.name().to_string()))
    }

    /// ‖E(S)‖₁ = 1.
    pub fn is_elementary(&self, s: &Species) -> Option<bool> {
        self.image(s)
            .map(|v| v.iter().sum::<BigUint>() == BigUint::one())
    }

    /// The species mapping exactly to unit vector `i`.
    pub fn elementary_class(&self, i: usize) -> Vec<&Species> {
        self.map
            .iter()
            .filter(|(_, image)| {
                image
                    .iter()
                    .enumerate()
                    .all(|(j, v)| if j == i { v.is_one() } else { v.is_zero() })
            })
            .map(|(s, _)| s)
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (s, image) in &self.map {
            map.insert(
                s.name().to_string(),
                Value::Array(
                    image
                        .iter()
                        .map(|v| json!(u64::try_from(v).unwrap_or(u64::MAX)))
                        .collect(),
                ),
            );
        }
        json!({ "n": self.n, "map": map })
    }

    pub fn from_json(value: &Value) -> Result<Self, CompositionError> {
        let n = value["n"]
            .as_u64()
            .ok_or_else(|| CompositionError::Json("missing n".into()))? as usize;
        let obj = value["map"]
            .as_object()
            .ok_or_else(|| CompositionError::Json("missing map".into()))?;
        let mut map = BTreeMap::new();
        for (name, arr) in obj {
            let s = Species::new(name)
                .map_err(|e| CompositionError::Json(format!("bad species name: {e}")))?;
            let arr = arr
                .as_array()
                .ok_or_else(|| CompositionError::Json(format!("image of {name} not an array")))?;
            let image: Result<Vec<BigUint>, CompositionError> = arr
                .iter()
                .map(|v| {
                    v.as_u64().map(BigUint::from).ok_or_else(|| {
                        CompositionError::Json(format!("image entry of {name} not an integer"))
                    })
                })
                .collect();
            map.insert(s, image?);
        }
        CompositionMap::new(n, map)
    }
}

/// The associated composition of a subset-atomic witness: E(S) = d_S.
pub fn associated_composition(
    network: &Network,
    witness: &DecompositionWitness,
) -> Result<CompositionMap, CompositionError> {
    let mut map = BTreeMap::new();
    for (i, s) in network.species().iter().enumerate() {
        map.insert(s.clone(), witness.rows[i].clone());
    }
    CompositionMap::new(witness.atoms.len(), map)
}

/// The linear extension Ẽ applied to a rational vector over Λ:
/// component i = Σ_S c(S)·E(S)_i.
pub fn extended_composition_apply(
    network: &Network,
    e: &CompositionMap,
    c: &[BigRational],
) -> Result<Vec<BigRational>, CompositionError> {
    if c.len() != network.species().len() {
        return Err(CompositionError::DimensionMismatch(format!(
            "vector has {} entries, Λ has {}",
            c.len(),
            network.species().len()
        )));
    }
    let mut out = vec![BigRational::zero(); e.n()];
    for (s, coeff) in network.species().iter().zip(c.iter()) {
        if coeff.is_zero() {
            continue;
        }
        let image = e.image_checked(s)?;
        for (o, v) in out.iter_mut().zip(image.iter()) {
            *o += coeff * BigRational::from_integer(BigInt::from(v.clone()));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Yes,
    No(String),
}

impl CheckOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, CheckOutcome::Yes)
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            CheckOutcome::Yes => None,
            CheckOutcome::No(r) => Some(r),
        }
    }
}

/// Near-core: Ẽ(p−r) = 0 for every reaction (ker Ẽ ⊇ Θ) and every unit
/// vector is in range(E).
pub fn is_near_core(network: &Network, e: &CompositionMap) -> Result<CheckOutcome, CompositionError> {
    for s in network.species() {
        e.image_checked(s)?;
    }
    for (t, _) in network.reactions().iter().enumerate() {
        let v: Vec<BigRational> = network
            .reaction_vector(t)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let image = extended_composition_apply(network, e, &v)?;
        if image.iter().any(|x| !x.is_zero()) {
            return Ok(CheckOutcome::No(format!(
                "reaction {t} is not E-conserved: Ẽ(p−r) ≠ 0"
            )));
        }
    }
    for i in 0..e.n() {
        if e.elementary_class(i).is_empty() {
            return Ok(CheckOutcome::No(format!(
                "unit vector e_{} is not in range(E)",
                i + 1
            )));
        }
    }
    Ok(CheckOutcome::Yes)
}

/// The |Λ|×n matrix of images, rows in Λ order.
fn composition_matrix(network: &Network, e: &CompositionMap) -> Result<RationalMatrix, CompositionError> {
    let mut data = Vec::with_capacity(network.species().len());
    for s in network.species() {
        let image = e.image_checked(s)?;
        data.push(
            image
                .iter()
                .map(|v| BigRational::from_integer(BigInt::from(v.clone())))
                .collect(),
        );
    }
    RationalMatrix::new(
        network
            .species()
            .iter()
            .map(|s| s.name().to_string())
            .collect(),
        (0..e.n()).map(|i| format!("e{}", i + 1)).collect(),
        data,
    )
    .map_err(|err| CompositionError::DimensionMismatch(err.to_string()))
}

/// dim ker Ẽ = |Λ| − rank of the image matrix.
pub fn kernel_dimension(network: &Network, e: &CompositionMap) -> Result<usize, CompositionError> {
    let m = composition_matrix(network, e)?;
    // Ẽ(c) = Eᵀ·c, so ker Ẽ is the kernel of the transpose; rank is shared.
    let (rank, _) = rank_and_kernel_basis(&m);
    Ok(network.species().len() - rank)
}

/// Core: near-core with ker Ẽ = Θ, decided by containment plus equal
/// dimension (dim Θ = rank A).
pub fn is_core(network: &Network, e: &CompositionMap) -> Result<CheckOutcome, CompositionError> {
    match is_near_core(network, e)? {
        CheckOutcome::No(reason) => Ok(CheckOutcome::No(format!("not near-core: {reason}"))),
        CheckOutcome::Yes => {
            let ker_dim = kernel_dimension(network, e)?;
            let theta_dim = stoich_rank(network);
            if ker_dim == theta_dim {
                Ok(CheckOutcome::Yes)
            } else {
                Ok(CheckOutcome::No(format!(
                    "dim ker Ẽ = {ker_dim} but dim Θ = {theta_dim}"
                )))
            }
        }
    }
}

/// Single-molecule decomposition vectors d′_S = d_S − e_S over Λ, one per
/// molecule, verified linearly independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleMoleculeVectors {
    pub labels: Vec<Species>,
    /// One row per molecule, in Λ order.
    pub vectors: Vec<Vec<BigInt>>,
}

pub fn single_molecule_vectors(
    network: &Network,
    witness: &DecompositionWitness,
) -> Result<SingleMoleculeVectors, CompositionError> {
    let n_species = network.species().len();
    let atom_of: BTreeMap<&str, usize> = witness
        .atoms
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_str(), i))
        .collect();
    let mut vectors = Vec::new();
    for (i, s) in network.species().iter().enumerate() {
        if atom_of.contains_key(s.name()) {
            continue;
        }
        let mut v = vec![BigInt::zero(); n_species];
        v[i] = -BigInt::one();
        for (j, other) in network.species().iter().enumerate() {
            if let Some(&col) = atom_of.get(other.name()) {
                v[j] = BigInt::from(witness.rows[i][col].clone());
            }
        }
        vectors.push(v);
    }
    // U is a basis: |U| = |Λ| − |Δ| and the vectors are independent.
    let data: Vec<Vec<BigRational>> = vectors
        .iter()
        .map(|v| v.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mat = RationalMatrix::new(
        (0..vectors.len()).map(|i| format!("u{i}")).collect(),
        network
            .species()
            .iter()
            .map(|s| s.name().to_string())
            .collect(),
        data,
    )
    .map_err(|e| CompositionError::DimensionMismatch(e.to_string()))?;
    let (rank, _) = rank_and_kernel_basis(&mat);
    if rank != vectors.len() {
        return Err(CompositionError::DimensionMismatch(format!(
            "single-molecule vectors are dependent: rank {rank} of {}",
            vectors.len()
        )));
    }
    Ok(SingleMoleculeVectors {
        labels: network.species().to_vec(),
        vectors,
    })
}

/// Per-species explicit constructibility classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructibilityReport {
    pub species: Vec<Species>,
    pub constructible: Vec<bool>,
    pub destructible: Vec<bool>,
    pub constructive: Vec<bool>,
    pub destructive: Vec<bool>,
}

impl ConstructibilityReport {
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (i, s) in self.species.iter().enumerate() {
            map.insert(
                s.name().to_string(),
                json!({
                    "constructible": self.constructible[i],
                    "destructible": self.destructible[i],
                    "constructive": self.constructive[i],
                    "destructive": self.destructive[i],
                }),
            );
        }
        Value::Object(map)
    }
}

/// Classifies reactions as binding (‖r‖≥2, ‖p‖=1), dissociation (mirror),
/// or isomerization (both sides single units), then closes over
/// isomerization chains: constructible species are reachable from binding
/// targets, destructible species reach dissociation sources.
pub fn explicit_constructibility_report(network: &Network) -> ConstructibilityReport {
    let n = network.species().len();
    let one = BigUint::one();
    let two = BigUint::from(2u32);

    let mut constructible = vec![false; n];
    let mut destructible = vec![false; n];
    let mut constructive = vec![false; n];
    let mut destructive = vec![false; n];
    // Isomerization edges S → T.
    let mut iso: Vec<(usize, usize)> = Vec::new();

    for rxn in network.reactions() {
        let r_size = rxn.reactants.l1_norm();
        let p_size = rxn.products.l1_norm();
        if r_size >= two && p_size == one {
            let target = network
                .species_index(rxn.products.support().next().expect("norm 1"))
                .expect("validated");
            constructible[target] = true;
            for s in rxn.reactants.support() {
                constructive[network.species_index(s).expect("validated")] = true;
            }
        } else if r_size == one && p_size >= two {
            let source = network
                .species_index(rxn.reactants.support().next().expect("norm 1"))
                .expect("validated");
            destructible[source] = true;
            for s in rxn.products.support() {
                destructive[network.species_index(s).expect("validated")] = true;
            }
        } else if r_size == one && p_size == one {
            let from = network
                .species_index(rxn.reactants.support().next().expect("norm 1"))
                .expect("validated");
            let to = network
                .species_index(rxn.products.support().next().expect("norm 1"))
                .expect("validated");
            iso.push((from, to));
        }
    }

    // Forward closure for constructibility, backward for destructibility.
    let mut changed = true;
    while changed {
        changed = false;
        for &(from, to) in &iso {
            if constructible[from] && !constructible[to] {
                constructible[to] = true;
                changed = true;
            }
            if destructible[to] && !destructible[from] {
                destructible[from] = true;
                changed = true;
            }
        }
    }

    ConstructibilityReport {
        species: network.species().to_vec(),
        constructible,
        destructible,
        constructive,
        destructive,
    }
}

/// Explicitly-reversibly constructive: core composition, every E-composite
/// explicitly constructible and destructible, every E-elementary explicitly
/// constructive and destructive.
pub fn is_explicitly_reversibly_constructive(
    network: &Network,
    e: &CompositionMap,
) -> Result<CheckOutcome, CompositionError> {
    match is_core(network, e)? {
        CheckOutcome::No(reason) => return Ok(CheckOutcome::No(reason)),
        CheckOutcome::Yes => {}
    }
    let report = explicit_constructibility_report(network);
    for (i, s) in network.species().iter().enumerate() {
        let elementary = e
            .is_elementary(s)
            .ok_or_else(|| CompositionError::MissingSpecies(s.name().to_string()))?;
        if elementary {
            if !report.constructive[i] {
                return Ok(CheckOutcome::No(format!(
                    "elementary species {s} is not explicitly constructive"
                )));
            }
            if !report.destructive[i] {
                return Ok(CheckOutcome::No(format!(
                    "elementary species {s} is not explicitly destructive"
                )));
            }
        } else {
            if !report.constructible[i] {
                return Ok(CheckOutcome::No(format!(
                    "composite species {s} is not explicitly constructible"
                )));
            }
            if !report.destructible[i] {
                return Ok(CheckOutcome::No(format!(
                    "composite species {s} is not explicitly destructible"
                )));
            }
        }
    }
    Ok(CheckOutcome::Yes)
}

/// True when every elementary isomeric class X_i is a singleton.
pub fn elementary_classes_are_singletons(e: &CompositionMap) -> bool {
    (0..e.n()).all(|i| e.elementary_class(i).len() == 1)
}

/// The reverse translation of the subset-atomicity/near-core equivalence:
/// Δ = the unit-vector preimages, D = the images. Requires the preimages to
/// be singletons (the one-to-one condition).
pub fn composition_to_witness(
    network: &Network,
    e: &CompositionMap,
) -> Result<DecompositionWitness, CompositionError> {
    let mut atoms = Vec::with_capacity(e.n());
    for i in 0..e.n() {
        let class = e.elementary_class(i);
        if class.len() != 1 {
            return Err(CompositionError::DimensionMismatch(format!(
                "unit vector e_{} has {} preimages; need exactly one",
                i + 1,
                class.len()
            )));
        }
        atoms.push(class[0].name().to_string());
    }
    let mut rows = Vec::with_capacity(network.species().len());
    for s in network.species() {
        rows.push(e.image_checked(s)?.to_vec());
    }
    Ok(DecompositionWitness { atoms, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deciders::{
        decide_reachably_atomic, decide_subset_fixed_atomic, verify_witness, AtomSet,
        AtomicityClass,
    };
    use crate::exactq::big_rational_from_int;
    use crate::textio::parse_network;

    fn paper_subset_witness() -> (Network, DecompositionWitness) {
        let net = parse_network("2X + Y + Z -> 2W + Z\nX + 2Y + W + Z -> Y + W + 2Z").unwrap();
        let atoms = AtomSet::from_names(&net, &["X"]).unwrap();
        let v = decide_subset_fixed_atomic(&net, &atoms, None).unwrap();
        (net, v.witness.unwrap())
    }

    #[test]
    fn extended_composition_examples() {
        let (net, w) = paper_subset_witness();
        let e = associated_composition(&net, &w).unwrap();
        // c = {1Y} maps to (d_Y); c = 0 maps to 0; c = e_X maps to e_1.
        let n = net.species().len();
        let mut c = vec![BigRational::zero(); n];
        let y = net.species_index(net.species_by_name("Y").unwrap()).unwrap();
        c[y] = big_rational_from_int(1);
        let image = extended_composition_apply(&net, &e, &c).unwrap();
        let x_idx = net.species_index(net.species_by_name("X").unwrap()).unwrap();
        let d_y = BigRational::from_integer(BigInt::from(w.rows[y][0].clone()));
        assert_eq!(image, vec![d_y]);

        let zero = vec![BigRational::zero(); n];
        assert!(extended_composition_apply(&net, &e, &zero)
            .unwrap()
            .iter()
            .all(|v| v.is_zero()));

        let mut ex = vec![BigRational::zero(); n];
        ex[x_idx] = big_rational_from_int(1);
        assert_eq!(
            extended_composition_apply(&net, &e, &ex).unwrap(),
            vec![big_rational_from_int(1)]
        );
    }

    #[test]
    fn near_core_checks() {
        let (net, w) = paper_subset_witness();
        let e = associated_composition(&net, &w).unwrap();
        assert!(is_near_core(&net, &e).unwrap().is_yes());

        // X → Y with E(X) = e1, E(Y) = 2e1 is not conserved.
        let net = parse_network("X -> Y").unwrap();
        let x = net.species_by_name("X").unwrap().clone();
        let y = net.species_by_name("Y").unwrap().clone();
        let mut map = BTreeMap::new();
        map.insert(x, vec![BigUint::one()]);
        map.insert(y, vec![BigUint::from(2u32)]);
        let e = CompositionMap::new(1, map).unwrap();
        assert!(!is_near_core(&net, &e).unwrap().is_yes());

        // A+B → C with all of A, B mapping to e1 and C to 2e1 conserves and
        // covers the unit vector.
        let net = parse_network("A + B -> C").unwrap();
        let mut map = BTreeMap::new();
        map.insert(net.species_by_name("A").unwrap().clone(), vec![BigUint::one()]);
        map.insert(net.species_by_name("B").unwrap().clone(), vec![BigUint::one()]);
        map.insert(net.species_by_name("C").unwrap().clone(), vec![BigUint::from(2u32)]);
        let e = CompositionMap::new(1, map).unwrap();
        assert!(is_near_core(&net, &e).unwrap().is_yes());
    }

    #[test]
    fn core_for_reachably_atomic_network() {
        let net = parse_network(
            "2X + Y + Z -> 2W + Z\nX + 2Y + W + Z -> Y + W + 2Z\nY -> 2X\nZ -> 3X\nW -> 2X",
        )
        .unwrap();
        let w = decide_reachably_atomic(&net).witness.unwrap();
        let e = associated_composition(&net, &w).unwrap();
        assert!(is_core(&net, &e).unwrap().is_yes());
    }

    #[test]
    fn two_way_isomerization_is_core() {
        let net = parse_network("X <-> Y").unwrap();
        let mut map = BTreeMap::new();
        map.insert(net.species_by_name("X").unwrap().clone(), vec![BigUint::one()]);
        map.insert(net.species_by_name("Y").unwrap().clone(), vec![BigUint::one()]);
        let e = CompositionMap::new(1, map).unwrap();
        // ker Ẽ is 1-dimensional and rank A = 1.
        assert_eq!(kernel_dimension(&net, &e).unwrap(), 1);
        assert!(is_near_core(&net, &e).unwrap().is_yes());
        assert!(is_core(&net, &e).unwrap().is_yes());
    }

    #[test]
    fn single_molecule_vectors_basis() {
        let net = parse_network("A + B -> C").unwrap();
        let atoms = AtomSet::from_names(&net, &["A", "B"]).unwrap();
        let rows = vec![
            vec![BigUint::one(), BigUint::zero()],
            vec![BigUint::zero(), BigUint::one()],
            vec![BigUint::one(), BigUint::one()],
        ];
        let w = DecompositionWitness {
            atoms: atoms
                .species()
                .iter()
                .map(|s| s.name().to_string())
                .collect(),
            rows,
        };
        verify_witness(&net, &w, AtomicityClass::Subset).unwrap();
        let u = single_molecule_vectors(&net, &w).unwrap();
        // Λ order is (A, B, C); the only molecule is C: d'_C = (1, 1, −1).
        assert_eq!(u.vectors.len(), 1);
        assert_eq!(
            u.vectors[0],
            vec![BigInt::one(), BigInt::one(), -BigInt::one()]
        );
    }

    #[test]
    fn constructibility_report_cases() {
        let net = parse_network("A + B -> C\nC -> D").unwrap();
        let report = explicit_constructibility_report(&net);
        let idx = |name: &str| {
            net.species_index(net.species_by_name(name).unwrap()).unwrap()
        };
        assert!(report.constructible[idx("C")]);
        assert!(report.constructible[idx("D")]); // via isomerization C → D
        assert!(report.constructive[idx("A")]);
        assert!(report.constructive[idx("B")]);
        assert!(!report.destructible[idx("C")]);

        // X + Y <-> 4Z has no binding reactions (product side size 4).
        let net = parse_network("X + Y <-> 4Z").unwrap();
        let report = explicit_constructibility_report(&net);
        assert!(report.constructible.iter().all(|&b| !b));
    }

    #[test]
    fn erc_on_reversible_reachably_atomic_network() {
        let net = parse_network(
            "Y -> 2X\n2X -> Y\nZ -> 3X\n3X -> Z\nW -> 2X\n2X -> W",
        )
        .unwrap();
        let w = decide_reachably_atomic(&net).witness.unwrap();
        let e = associated_composition(&net, &w).unwrap();
        assert!(is_explicitly_reversibly_constructive(&net, &e)
            .unwrap()
            .is_yes());
        assert!(elementary_classes_are_singletons(&e));

        // Delete one recomposition reaction: W is no longer constructible.
        let net = parse_network("Y -> 2X\n2X -> Y\nZ -> 3X\n3X -> Z\nW -> 2X").unwrap();
        let w = decide_reachably_atomic(&net).witness.unwrap();
        let e = associated_composition(&net, &w).unwrap();
        assert!(!is_explicitly_reversibly_constructive(&net, &e)
            .unwrap()
            .is_yes());
    }

    #[test]
    fn isomerization_is_not_erc() {
        let net = parse_network("X -> Y").unwrap();
        let mut map = BTreeMap::new();
        map.insert(
            net.species_by_name("X").unwrap().clone(),
            vec![BigUint::one(), BigUint::zero()],
        );
        map.insert(
            net.species_by_name("Y").unwrap().clone(),
            vec![BigUint::zero(), BigUint::one()],
        );
        let e = CompositionMap::new(2, map).unwrap();
        assert!(!is_explicitly_reversibly_constructive(&net, &e)
            .unwrap()
            .is_yes());
    }

    #[test]
    fn composition_round_trip_through_witness() {
        let (net, w) = paper_subset_witness();
        let e = associated_composition(&net, &w).unwrap();
        let back = composition_to_witness(&net, &e).unwrap();
        assert_eq!(back, w);
        verify_witness(&net, &back, AtomicityClass::Subset).unwrap();
    }

    #[test]
    fn json_round_trip() {
        let (net, w) = paper_subset_witness();
        let e = associated_composition(&net, &w).unwrap();
        let json = e.to_json();
        assert_eq!(CompositionMap::from_json(&json).unwrap(), e);
    }
}
