//! Minimal dense two-phase simplex, used for membership and radial oracles
//! on vertex-represented polytopes (`x ∈ conv(V)` is a small feasibility LP).
//!
//! Problems here have at most a few hundred variables and ~10 rows, so a
//! dense tableau with Bland's rule is adequate and dependency-free.

use nalgebra::DMatrix;

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    /// Minimizer of `cᵀx` over `{Ax = b, x ≥ 0}` with its objective value.
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

/// Solves `min cᵀx  s.t.  A x = b, x ≥ 0` by the two-phase simplex method.
pub(crate) fn solve_min(c: &[f64], a: &DMatrix<f64>, b: &[f64]) -> LpOutcome {
    let m = a.nrows();
    let n = a.ncols();
    debug_assert_eq!(c.len(), n);
    debug_assert_eq!(b.len(), m);

    // Tableau with artificial variables appended: columns 0..n real,
    // n..n+m artificial, last column rhs. Rows are sign-fixed so rhs ≥ 0.
    let mut t = DMatrix::<f64>::zeros(m, n + m + 1);
    for i in 0..m {
        let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[(i, j)] = s * a[(i, j)];
        }
        t[(i, n + i)] = 1.0;
        t[(i, n + m)] = s * b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: minimize the sum of artificials.
    let mut cost1 = vec![0.0; n + m];
    for cj in cost1.iter_mut().skip(n) {
        *cj = 1.0;
    }
    if !run_simplex(&mut t, &mut basis, &cost1, n + m) {
        return LpOutcome::Unbounded; // cannot happen: phase 1 is bounded below by 0
    }
    let phase1_value: f64 = basis
        .iter()
        .enumerate()
        .map(|(i, &j)| if j >= n { t[(i, n + m)] } else { 0.0 })
        .sum();
    if phase1_value > 1e-7 {
        return LpOutcome::Infeasible;
    }
    // Pivot lingering artificials out of the basis where possible.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t[(i, j)].abs() > EPS) {
                pivot(&mut t, &mut basis, i, j);
            }
        }
    }

    // Phase 2 on the real columns only (artificial columns are ignored by
    // giving them a prohibitive cost).
    let mut cost2 = vec![0.0; n + m];
    cost2[..n].copy_from_slice(c);
    for cj in cost2.iter_mut().skip(n) {
        *cj = 1e30;
    }
    if !run_simplex(&mut t, &mut basis, &cost2, n) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![0.0; n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[(i, n + m)];
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpOutcome::Optimal { x, value }
}

/// Runs simplex iterations with Bland's rule over columns `0..active`.
/// Returns false on unboundedness.
fn run_simplex(t: &mut DMatrix<f64>, basis: &mut [usize], cost: &[f64], active: usize) -> bool {
    let m = t.nrows();
    let rhs_col = t.ncols() - 1;
    for _ in 0..20_000 {
        // Reduced costs r_j = c_j − c_Bᵀ T_j.
        let mut entering = None;
        for j in 0..active {
            if basis.contains(&j) {
                continue;
            }
            let mut r = cost[j];
            for i in 0..m {
                r -= cost[basis[i]] * t[(i, j)];
            }
            if r < -EPS {
                entering = Some(j);
                break; // Bland: smallest index
            }
        }
        let Some(j) = entering else {
            return true; // optimal
        };
        // Ratio test (Bland tie-break on basis index).
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if t[(i, j)] > EPS {
                let ratio = t[(i, rhs_col)] / t[(i, j)];
                if ratio < best - EPS
                    || (ratio < best + EPS && leave.map(|l| basis[i] < basis[l]).unwrap_or(true))
                {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(i) = leave else {
            return false; // unbounded
        };
        pivot(t, basis, i, j);
    }
    true // iteration cap; treat as converged for these tiny problems
}

fn pivot(t: &mut DMatrix<f64>, basis: &mut [usize], row: usize, col: usize) {
    let m = t.nrows();
    let piv = t[(row, col)];
    let ncols = t.ncols();
    for j in 0..ncols {
        t[(row, j)] /= piv;
    }
    for i in 0..m {
        if i != row {
            let f = t[(i, col)];
            if f != 0.0 {
                for j in 0..ncols {
                    t[(i, j)] -= f * t[(row, j)];
                }
            }
        }
    }
    basis[row] = col;
}
