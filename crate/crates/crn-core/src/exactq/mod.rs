//! Exact rational linear algebra: strictly-positive kernel feasibility,
//! rational→integer scaling, rank and kernel-basis computation.
//!
//! No floating point anywhere; every answer is exact and re-verified
//! before it is returned.

mod simplex;

use num::{BigInt, BigRational, BigUint, Integer, One, Signed, Zero};
use thiserror::Error;

use crate::model::{Network, StoichMatrix};

pub(crate) use simplex::{solve_eq_bounded, solve_eq_nonneg, Feasibility};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactqError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("entry {0} is not strictly positive")]
    NonPositiveEntry(String),
}

/// Dense row-major rational matrix with row and column labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    data: Vec<Vec<BigRational>>,
}

impl RationalMatrix {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        data: Vec<Vec<BigRational>>,
    ) -> Result<Self, ExactqError> {
        if data.len() != row_labels.len() || data.iter().any(|r| r.len() != col_labels.len()) {
            return Err(ExactqError::DimensionMismatch(format!(
                "{}x{} labels vs data",
                row_labels.len(),
                col_labels.len()
            )));
        }
        Ok(RationalMatrix {
            row_labels,
            col_labels,
            data,
        })
    }

    pub fn from_stoich(a: &StoichMatrix) -> Self {
        let data = a
            .rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| BigRational::from_integer(v.clone()))
                    .collect()
            })
            .collect();
        RationalMatrix {
            row_labels: (0..a.row_count()).map(|t| format!("r{t}")).collect(),
            col_labels: a.species().iter().map(|s| s.name().to_string()).collect(),
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.data.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn data(&self) -> &[Vec<BigRational>] {
        &self.data
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    /// Exact matrix-vector product.
    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>, ExactqError> {
        if v.len() != self.cols() {
            return Err(ExactqError::DimensionMismatch(format!(
                "matrix has {} columns, vector has {} entries",
                self.cols(),
                v.len()
            )));
        }
        Ok(self
            .data
            .iter()
            .map(|row| row.iter().zip(v.iter()).map(|(a, b)| a * b).sum())
            .collect())
    }
}

/// Labeled rational vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalVector {
    pub labels: Vec<String>,
    pub data: Vec<BigRational>,
}

/// Finds m ∈ ℚ^cols with A·m = 0 and m > 0 entrywise, iff one exists.
///
/// By homogeneity this is equivalent to feasibility of {A·m = 0, m ≥ 1},
/// solved by exact two-phase simplex after the shift m = y + 1. The witness
/// is re-verified (A·m recomputed, positivity checked) before return.
pub fn solve_strict_positive_kernel(a: &RationalMatrix) -> Option<RationalVector> {
    let n = a.cols();
    if n == 0 {
        return None;
    }
    // rhs = -A·1 per row.
    let rhs: Vec<BigRational> = a
        .data()
        .iter()
        .map(|row| -row.iter().cloned().sum::<BigRational>())
        .collect();
    let y = match solve_eq_nonneg(a.data(), &rhs, n) {
        Feasibility::Point(y) => y,
        Feasibility::Infeasible => return None,
    };
    let m: Vec<BigRational> = y.into_iter().map(|v| v + BigRational::one()).collect();
    // Verification: exact arithmetic, every entry > 0, A·m = 0.
    assert!(m.iter().all(|v| v.is_positive()));
    let prod = a.mul_vec(&m).expect("dimensions fixed above");
    assert!(prod.iter().all(|v| v.is_zero()));
    Some(RationalVector {
        labels: a.col_labels().to_vec(),
        data: m,
    })
}

/// Scales a strictly positive rational vector by the lcm of its
/// denominators, yielding a strictly positive integer vector.
pub fn integerize_positive(m: &RationalVector) -> Result<Vec<BigUint>, ExactqError> {
    for (label, v) in m.labels.iter().zip(m.data.iter()) {
        if !v.is_positive() {
            return Err(ExactqError::NonPositiveEntry(label.clone()));
        }
    }
    let mut c = BigInt::one();
    for v in &m.data {
        c = c.lcm(v.denom());
    }
    Ok(m.data
        .iter()
        .map(|v| {
            let scaled = v * BigRational::from_integer(c.clone());
            debug_assert!(scaled.is_integer());
            scaled
                .to_integer()
                .to_biguint()
                .expect("positive by construction")
        })
        .collect())
}

/// Exact Gauss-Jordan elimination: returns the rank and a basis of the
/// kernel. rank + |basis| = column count; every basis vector v satisfies
/// M·v = 0 exactly.
pub fn rank_and_kernel_basis(m: &RationalMatrix) -> (usize, Vec<RationalVector>) {
    let rows = m.rows();
    let cols = m.cols();
    let mut mat: Vec<Vec<BigRational>> = m.data().to_vec();

    // Reduced row echelon form, first-nonzero pivoting for determinism.
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let pivot_row = (r..rows).find(|&i| !mat[i][c].is_zero());
        let i = match pivot_row {
            Some(i) => i,
            None => continue,
        };
        mat.swap(r, i);
        let piv = mat[r][c].clone();
        for v in mat[r].iter_mut() {
            *v /= piv.clone();
        }
        let pivot_row_vals = mat[r].clone();
        for (k, row) in mat.iter_mut().enumerate() {
            if k == r {
                continue;
            }
            let factor = row[c].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, p) in row.iter_mut().zip(pivot_row_vals.iter()) {
                *v -= factor.clone() * p;
            }
        }
        pivot_col_of_row.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let rank = r;

    let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
    let is_pivot = |c: usize| pivot_cols.contains(&c);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (row_idx, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -mat[row_idx][free].clone();
        }
        basis.push(RationalVector {
            labels: m.col_labels().to_vec(),
            data: v,
        });
    }
    (rank, basis)
}

/// Rank of the stoichiometric matrix, i.e. dim span{p − r}.
pub fn stoich_rank(network: &Network) -> usize {
    let a = RationalMatrix::from_stoich(&crate::model::stoichiometric_matrix(network));
    rank_and_kernel_basis(&a).0
}

pub fn big_rational_from_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> RationalMatrix {
        let data: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| big_rational_from_int(v)).collect())
            .collect();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        RationalMatrix::new(
            (0..rows.len()).map(|i| format!("r{i}")).collect(),
            (0..ncols).map(|i| format!("c{i}")).collect(),
            data,
        )
        .unwrap()
    }

    #[test]
    fn paper_matrix_has_positive_kernel_vector() {
        // Columns (X, Y, W, Z).
        let a = mat(&[&[-2, -1, 2, 0], &[-1, -1, 0, 1]]);
        let m = solve_strict_positive_kernel(&a).expect("mass conserving");
        // The known witness m(X)=1/2, m(Y)=1, m(W)=1, m(Z)=3/2 is one of
        // many; any verified strictly positive kernel vector is accepted.
        assert!(m.data.iter().all(|v| v.is_positive()));
        assert!(a.mul_vec(&m.data).unwrap().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn creation_reaction_has_none() {
        // X → 2X gives the 1×1 matrix [1]; 1·m = 0 forces m = 0.
        let a = mat(&[&[1]]);
        assert!(solve_strict_positive_kernel(&a).is_none());
    }

    #[test]
    fn isomerization_gives_unit_masses() {
        let a = mat(&[&[-1, 1]]);
        let m = solve_strict_positive_kernel(&a).unwrap();
        assert_eq!(m.data, vec![big_rational_from_int(1), big_rational_from_int(1)]);
    }

    #[test]
    fn integerize_examples() {
        let v = RationalVector {
            labels: vec!["X".into(), "Y".into(), "Z".into(), "W".into()],
            data: vec![
                BigRational::new(1.into(), 2.into()),
                big_rational_from_int(1),
                BigRational::new(3.into(), 2.into()),
                big_rational_from_int(1),
            ],
        };
        let ints = integerize_positive(&v).unwrap();
        let expect: Vec<BigUint> = [1u32, 2, 3, 2].iter().map(|&n| BigUint::from(n)).collect();
        assert_eq!(ints, expect);

        let v = RationalVector {
            labels: vec!["a".into(), "b".into()],
            data: vec![
                BigRational::new(2.into(), 3.into()),
                BigRational::new(1.into(), 6.into()),
            ],
        };
        let ints = integerize_positive(&v).unwrap();
        let expect: Vec<BigUint> = [4u32, 1].iter().map(|&n| BigUint::from(n)).collect();
        assert_eq!(ints, expect);

        let v = RationalVector {
            labels: vec!["a".into(), "b".into()],
            data: vec![big_rational_from_int(1), big_rational_from_int(1)],
        };
        let expect: Vec<BigUint> = [1u32, 1].iter().map(|&n| BigUint::from(n)).collect();
        assert_eq!(integerize_positive(&v).unwrap(), expect);
    }

    #[test]
    fn integerize_rejects_nonpositive() {
        let v = RationalVector {
            labels: vec!["a".into()],
            data: vec![big_rational_from_int(0)],
        };
        assert!(integerize_positive(&v).is_err());
    }

    #[test]
    fn integerize_ratio_is_constant() {
        let v = RationalVector {
            labels: vec!["a".into(), "b".into(), "c".into()],
            data: vec![
                BigRational::new(5.into(), 6.into()),
                BigRational::new(7.into(), 4.into()),
                big_rational_from_int(3),
            ],
        };
        let ints = integerize_positive(&v).unwrap();
        let ratios: Vec<BigRational> = ints
            .iter()
            .zip(v.data.iter())
            .map(|(i, q)| BigRational::from_integer(BigInt::from(i.clone())) / q)
            .collect();
        assert!(ratios.windows(2).all(|w| w[0] == w[1]));
        assert!(ratios[0].is_integer() && ratios[0].is_positive());
    }

    #[test]
    fn rank_identity() {
        let a = mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let (rank, basis) = rank_and_kernel_basis(&a);
        assert_eq!(rank, 3);
        assert!(basis.is_empty());
    }

    #[test]
    fn rank_zero_matrix() {
        let a = mat(&[&[0, 0, 0], &[0, 0, 0]]);
        let (rank, basis) = rank_and_kernel_basis(&a);
        assert_eq!(rank, 0);
        assert_eq!(basis.len(), 3);
    }

    #[test]
    fn paper_matrix_rank_and_kernel() {
        let a = mat(&[&[-2, -1, 2, 0], &[-1, -1, 0, 1]]);
        let (rank, basis) = rank_and_kernel_basis(&a);
        assert_eq!(rank, 2);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(a.mul_vec(&v.data).unwrap().iter().all(|x| x.is_zero()));
        }
    }
}
