//! Dense tableau simplex for covering LPs `min c·x, A x ≥ b, x ≥ 0` with `c ≥ 0`.
//!
//! The tableau is built on the dual `max b·y, Aᵀy ≤ c, y ≥ 0`, whose slack
//! basis is feasible at `y = 0` because `c ≥ 0`. The primal solution is read
//! off the reduced costs of the dual slacks. An unbounded dual means the
//! primal rows are infeasible.
//!
//! Pricing is Dantzig (most negative reduced cost) until a run of degenerate
//! pivots, then Bland's rule for the rest of the solve.

use thiserror::Error;

/// Pivot element / ratio-test threshold.
pub const PIVOT_TOL: f64 = 1e-9;
/// Reduced-cost optimality threshold.
pub const OPTIMALITY_TOL: f64 = 1e-9;
/// Entries this small after a pivot are rounding noise.
const DRIFT_TOL: f64 = 1e-11;
const REINVERT_EVERY: usize = 200;
const DEGENERATE_RUN: usize = 50;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimplexError {
    #[error("covering rows are infeasible")]
    Infeasible,
    #[error("simplex exceeded {0} pivots")]
    PivotLimit(usize),
    #[error("objective coefficient {0} is negative or not finite")]
    BadObjective(f64),
}

/// One covering row `Σ coeff·x ≥ rhs`, sparse over variable indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        Row { coeffs, rhs }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Dual multiplier per row.
    pub duals: Vec<f64>,
    pub pivots: usize,
}

/// Minimizes `cost·x` subject to `rows`, `x ≥ 0`.
pub fn solve_covering(cost: &[f64], rows: &[Row]) -> Result<LpSolution, SimplexError> {
    if let Some(&c) = cost.iter().find(|c| !c.is_finite() || **c < 0.0) {
        return Err(SimplexError::BadObjective(c));
    }
    let n = cost.len(); // dual constraints, one per primal variable
    let m = rows.len(); // dual variables, one per primal row
    let width = m + n + 1;
    let rhs_col = m + n;

    // Tableau rows 0..n are dual constraints, row n is the objective.
    let mut t = vec![0.0f64; (n + 1) * width];
    for (r, row) in rows.iter().enumerate() {
        for &(j, a) in &row.coeffs {
            t[j * width + r] += a;
        }
        t[n * width + r] = -row.rhs;
    }
    for j in 0..n {
        t[j * width + m + j] = 1.0;
        t[j * width + rhs_col] = cost[j];
    }
    let original = t.clone();
    let mut basis: Vec<usize> = (m..m + n).collect();

    let mut pivots = 0;
    let mut degenerate = 0;
    let mut bland = false;
    loop {
        let obj = &t[n * width..n * width + m + n];
        let entering = if bland {
            obj.iter().position(|&v| v < -OPTIMALITY_TOL)
        } else {
            obj.iter()
                .enumerate()
                .filter(|(_, &v)| v < -OPTIMALITY_TOL)
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(j, _)| j)
        };
        let Some(col) = entering else { break };

        let mut leave: Option<(usize, f64)> = None;
        for i in 0..n {
            let a = t[i * width + col];
            if a > PIVOT_TOL {
                let ratio = t[i * width + rhs_col].max(0.0) / a;
                let better = match leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < lr - 1e-12 || (ratio <= lr + 1e-12 && basis[i] < basis[li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((prow, ratio)) = leave else {
            return Err(SimplexError::Infeasible);
        };

        if ratio.abs() <= 1e-12 {
            degenerate += 1;
            if degenerate >= DEGENERATE_RUN {
                bland = true;
            }
        } else {
            degenerate = 0;
        }

        pivot(&mut t, width, n + 1, prow, col);
        basis[prow] = col;
        pivots += 1;
        if pivots % REINVERT_EVERY == 0 {
            reinvert(&original, &mut t, &mut basis, width);
        }
        if pivots >= MAX_PIVOTS {
            return Err(SimplexError::PivotLimit(MAX_PIVOTS));
        }
    }

    if pivots >= REINVERT_EVERY {
        reinvert(&original, &mut t, &mut basis, width);
    }
    let obj_row = &t[n * width..];
    let x: Vec<f64> = (0..n).map(|j| obj_row[m + j].max(0.0)).collect();
    let mut duals = vec![0.0; m];
    for (i, &b) in basis.iter().enumerate() {
        if b < m {
            duals[b] = t[i * width + rhs_col].max(0.0);
        }
    }
    let objective = cost.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution {
        x,
        objective,
        duals,
        pivots,
    })
}

/// Rebuilds the tableau for `basis` from the original data with partial
/// pivoting, discarding accumulated rounding error. Keeps the current tableau
/// if the basis looks singular.
fn reinvert(original: &[f64], t: &mut Vec<f64>, basis: &mut [usize], width: usize) {
    let n = basis.len();
    let mut fresh = original.to_vec();
    let mut row_done = vec![false; n];
    let mut new_basis = vec![0; n];
    for &col in basis.iter() {
        let best = (0..n).filter(|&i| !row_done[i]).max_by(|&a, &b| {
            fresh[a * width + col]
                .abs()
                .total_cmp(&fresh[b * width + col].abs())
        });
        let Some(i) = best else { return };
        if fresh[i * width + col].abs() < PIVOT_TOL {
            return;
        }
        pivot(&mut fresh, width, n + 1, i, col);
        row_done[i] = true;
        new_basis[i] = col;
    }
    *t = fresh;
    basis.copy_from_slice(&new_basis);
}

fn pivot(t: &mut [f64], width: usize, height: usize, prow: usize, col: usize) {
    let p = t[prow * width + col];
    for v in &mut t[prow * width..(prow + 1) * width] {
        *v /= p;
    }
    let pivot_row: Vec<f64> = t[prow * width..(prow + 1) * width].to_vec();
    for i in 0..height {
        if i == prow {
            continue;
        }
        let f = t[i * width + col];
        if f.abs() <= 1e-15 {
            continue;
        }
        let row = &mut t[i * width..(i + 1) * width];
        for (v, &pv) in row.iter_mut().zip(&pivot_row) {
            *v -= f * pv;
        }
        row[col] = 0.0;
    }
    for v in t.iter_mut() {
        if v.abs() < DRIFT_TOL {
            *v = 0.0;
        }
    }
}
