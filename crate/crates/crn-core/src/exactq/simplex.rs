//! Exact-rational two-phase simplex with Bland's rule.
//!
//! Everything here works on equality systems `A·x = b, x ≥ 0` in dense
//! tableau form. Bland's rule guarantees termination; all arithmetic is
//! exact, so feasibility answers are certificates.

use num::{BigRational, One, Signed, Zero};

/// Dense tableau: `rows` holds the constraint rows over the structural
/// columns plus the rhs in the last position; `basis[i]` is the column
/// currently basic in row `i`, or `usize::MAX` while an artificial variable
/// still occupies the row.
struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    cost: Vec<BigRational>,
    ncols: usize,
}

const ARTIFICIAL: usize = usize::MAX;

impl Tableau {
    fn rhs(&self, i: usize) -> &BigRational {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        debug_assert!(!piv.is_zero());
        for v in self.rows[r].iter_mut() {
            *v /= piv.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, p) in row.iter_mut().zip(pivot_row.iter()) {
                *v -= factor.clone() * p;
            }
        }
        let factor = self.cost[c].clone();
        if !factor.is_zero() {
            for (v, p) in self.cost.iter_mut().zip(pivot_row.iter()) {
                *v -= factor.clone() * p;
            }
        }
        self.basis[r] = c;
    }

    /// One simplex run to optimality with Bland's rule. Columns in
    /// `enterable` are the only candidates for entering the basis.
    /// Returns false if the problem is unbounded below (cannot happen for
    /// the objectives used here, but handled defensively).
    fn optimize(&mut self, enterable: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let entering = (0..self.ncols)
                .find(|&j| enterable(j) && self.cost[j].is_negative());
            let j = match entering {
                Some(j) => j,
                None => return true,
            };
            let mut leaving: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leaving {
                    None => true,
                    Some((best_i, best)) => {
                        // Bland tie-break: smallest basis label. Rows still
                        // held by artificials (label MAX) lose ties last,
                        // which keeps the rule deterministic.
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*best_i])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            match leaving {
                Some((r, _)) => self.pivot(r, j),
                None => return false,
            }
        }
    }
}

/// Outcome of a feasibility solve.
pub(crate) enum Feasibility {
    /// A verified point of `{A·x = b, x ≥ 0}` (and any upper bounds given).
    Point(Vec<BigRational>),
    Infeasible,
}

/// Finds some x ≥ 0 with A·x = b over `n` variables, minimizing Σx among
/// basic feasible solutions reached (phase 2 keeps the output deterministic
/// and small).
pub(crate) fn solve_eq_nonneg(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    n: usize,
) -> Feasibility {
    let m = a.len();
    if m == 0 {
        return Feasibility::Point(vec![BigRational::zero(); n]);
    }

    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (row, rhs) in a.iter().zip(b.iter()) {
        let mut r: Vec<BigRational> = row.clone();
        r.push(rhs.clone());
        if rhs.is_negative() {
            for v in r.iter_mut() {
                *v = -v.clone();
            }
        }
        rows.push(r);
    }

    // Phase 1: minimize the sum of artificial variables. With the
    // artificial basis, the reduced cost row is minus the column sums.
    let mut cost = vec![BigRational::zero(); n + 1];
    for row in &rows {
        for (c, v) in cost.iter_mut().zip(row.iter()) {
            *c -= v;
        }
    }
    let mut t = Tableau {
        rows,
        basis: vec![ARTIFICIAL; m],
        cost,
        ncols: n,
    };
    let bounded = t.optimize(&|_| true);
    debug_assert!(bounded, "phase 1 objective is bounded below by zero");
    // Objective value is -cost[rhs]; nonzero means infeasible.
    if !t.cost[n].is_zero() {
        return Feasibility::Infeasible;
    }

    // Drive leftover artificials out of the basis (degenerate rows).
    for r in 0..m {
        if t.basis[r] != ARTIFICIAL {
            continue;
        }
        match (0..n).find(|&j| !t.rows[r][j].is_zero()) {
            Some(j) => t.pivot(r, j),
            None => {
                // Redundant all-zero row; harmless to leave in place.
                debug_assert!(t.rhs(r).is_zero());
            }
        }
    }

    // Phase 2: minimize Σx over the feasible region.
    let mut cost = vec![BigRational::zero(); n + 1];
    for c in cost.iter_mut().take(n) {
        *c = BigRational::one();
    }
    for (r, &bi) in t.basis.iter().enumerate() {
        if bi == ARTIFICIAL {
            continue;
        }
        let factor = cost[bi].clone();
        if factor.is_zero() {
            continue;
        }
        let row = t.rows[r].clone();
        for (v, p) in cost.iter_mut().zip(row.iter()) {
            *v -= factor.clone() * p;
        }
    }
    t.cost = cost;
    let bounded = t.optimize(&|_| true);
    debug_assert!(bounded, "phase 2 objective is bounded below by zero");

    let mut x = vec![BigRational::zero(); n];
    for (r, &bi) in t.basis.iter().enumerate() {
        if bi != ARTIFICIAL {
            x[bi] = t.rhs(r).clone();
        }
    }
    Feasibility::Point(x)
}

/// Finds some x with A·x = b, 0 ≤ x, and x_j ≤ upper_j where given.
///
/// Upper bounds are enforced lazily: solve without them, then add a slack
/// row for each violated bound and re-solve. Each bound is added at most
/// once, so this terminates; any infeasibility answer is exact.
pub(crate) fn solve_eq_bounded(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    upper: &[Option<BigRational>],
) -> Feasibility {
    let n = upper.len();
    let mut added: Vec<usize> = Vec::new();
    loop {
        let width = n + added.len();
        let mut ext_a: Vec<Vec<BigRational>> = Vec::with_capacity(a.len() + added.len());
        let mut ext_b: Vec<BigRational> = Vec::with_capacity(a.len() + added.len());
        for (row, rhs) in a.iter().zip(b.iter()) {
            let mut r = row.clone();
            r.resize(width, BigRational::zero());
            ext_a.push(r);
            ext_b.push(rhs.clone());
        }
        for (k, &j) in added.iter().enumerate() {
            let mut r = vec![BigRational::zero(); width];
            r[j] = BigRational::one();
            r[n + k] = BigRational::one();
            ext_a.push(r);
            ext_b.push(upper[j].clone().expect("added bounds are finite"));
        }
        match solve_eq_nonneg(&ext_a, &ext_b, width) {
            Feasibility::Infeasible => return Feasibility::Infeasible,
            Feasibility::Point(x) => {
                let violated = (0..n).find(|&j| {
                    !added.contains(&j)
                        && matches!(&upper[j], Some(u) if x[j] > *u)
                });
                match violated {
                    Some(j) => added.push(j),
                    None => return Feasibility::Point(x[..n].to_vec()),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn solve(a: &[&[i64]], b: &[i64]) -> Option<Vec<BigRational>> {
        let n = a[0].len();
        let a: Vec<Vec<BigRational>> = a
            .iter()
            .map(|row| row.iter().map(|&v| q(v)).collect())
            .collect();
        let b: Vec<BigRational> = b.iter().map(|&v| q(v)).collect();
        match solve_eq_nonneg(&a, &b, n) {
            Feasibility::Point(x) => {
                for (row, rhs) in a.iter().zip(b.iter()) {
                    let dot: BigRational =
                        row.iter().zip(x.iter()).map(|(u, v)| u * v).sum();
                    assert_eq!(&dot, rhs);
                }
                assert!(x.iter().all(|v| !v.is_negative()));
                Some(x)
            }
            Feasibility::Infeasible => None,
        }
    }

    #[test]
    fn feasible_system() {
        let x = solve(&[&[1, 1], &[1, -1]], &[4, 2]).unwrap();
        assert_eq!(x, vec![q(3), q(1)]);
    }

    #[test]
    fn infeasible_sign() {
        // x1 + x2 = -1 has no nonnegative solution.
        assert!(solve(&[&[1, 1]], &[-1]).is_none());
    }

    #[test]
    fn infeasible_contradiction() {
        assert!(solve(&[&[1], &[1]], &[1, 2]).is_none());
    }

    #[test]
    fn redundant_rows_ok() {
        assert!(solve(&[&[1, 2], &[2, 4]], &[3, 6]).is_some());
    }

    #[test]
    fn phase2_minimizes() {
        // x1 + x2 = 2 with min Σx still 2; any vertex works, but the
        // answer must be a valid point.
        let x = solve(&[&[1, 1]], &[2]).unwrap();
        let total: BigRational = x.iter().cloned().sum();
        assert_eq!(total, q(2));
    }

    #[test]
    fn bounded_solve_respects_uppers() {
        // x1 + x2 = 10, x1 ≤ 3 forces x2 ≥ 7.
        let a = vec![vec![q(1), q(1)]];
        let b = vec![q(10)];
        let upper = vec![Some(q(3)), None];
        match solve_eq_bounded(&a, &b, &upper) {
            Feasibility::Point(x) => {
                assert!(x[0] <= q(3));
                assert_eq!(x[0].clone() + x[1].clone(), q(10));
            }
            Feasibility::Infeasible => panic!("feasible system"),
        }
    }

    #[test]
    fn bounded_solve_detects_box_infeasibility() {
        // x1 + x2 = 10 with both ≤ 3 is infeasible.
        let a = vec![vec![q(1), q(1)]];
        let b = vec![q(10)];
        let upper = vec![Some(q(3)), Some(q(3))];
        assert!(matches!(
            solve_eq_bounded(&a, &b, &upper),
            Feasibility::Infeasible
        ));
    }
}
