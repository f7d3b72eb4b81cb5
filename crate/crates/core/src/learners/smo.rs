//! Sequential minimal optimization for the soft-margin SVM dual
//!
//! ```text
//! min ½ βᵀQβ − Σβᵢ   s.t.  yᵀβ = 0,  0 ≤ βᵢ ≤ Cᵢ,   Q_ij = yᵢyⱼK_ij
//! ```
//!
//! with maximal-violating-pair working set selection.

use nalgebra::DMatrix;

use crate::error::{KreinError, Result};

/// KKT gap at which the solver stops.
pub const KKT_TOL: f64 = 1e-6;

/// Iteration cap before reporting non-convergence.
pub const MAX_ITER: usize = 1_000_000;

const TAU: f64 = 1e-12;

/// Dual solution and bias of a soft-margin SVM.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmDual {
    pub beta: Vec<f64>,
    /// Decision function is `Σ βᵢyᵢ K(xᵢ, ·) + bias`.
    pub bias: f64,
    pub iterations: usize,
}

/// Solves the dual on Gram matrix `k` with labels `y` (±1) and per-sample
/// upper bounds `upper`.
pub fn solve(k: &DMatrix<f64>, y: &[f64], upper: &[f64], tol: f64, max_iter: usize) -> Result<SvmDual> {
    let n = y.len();
    if k.nrows() != n || k.ncols() != n {
        return Err(KreinError::Dimension { expected: n, got: k.nrows() });
    }
    if upper.len() != n {
        return Err(KreinError::Dimension { expected: n, got: upper.len() });
    }
    if upper.iter().any(|c| !(*c > 0.0) || !c.is_finite()) {
        return Err(KreinError::Parameter("box bounds must be positive and finite".into()));
    }
    if !y.iter().any(|v| *v > 0.0) || !y.iter().any(|v| *v < 0.0) {
        return Err(KreinError::Parameter("SVM training needs both classes".into()));
    }

    let mut beta = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let at_upper = |b: f64, c: f64| b >= c;
    let at_lower = |b: f64| b <= 0.0;

    let mut iterations = 0;
    loop {
        // i maximizes −y∇ over I_up, j minimizes it over I_low
        let mut gmax = f64::NEG_INFINITY;
        let mut gmax2 = f64::NEG_INFINITY;
        let mut i = usize::MAX;
        let mut j = usize::MAX;
        for t in 0..n {
            if y[t] > 0.0 {
                if !at_upper(beta[t], upper[t]) && -grad[t] >= gmax {
                    gmax = -grad[t];
                    i = t;
                }
                if !at_lower(beta[t]) && grad[t] >= gmax2 {
                    gmax2 = grad[t];
                    j = t;
                }
            } else {
                if !at_lower(beta[t]) && grad[t] >= gmax {
                    gmax = grad[t];
                    i = t;
                }
                if !at_upper(beta[t], upper[t]) && -grad[t] >= gmax2 {
                    gmax2 = -grad[t];
                    j = t;
                }
            }
        }
        if i == usize::MAX || j == usize::MAX || gmax + gmax2 < tol {
            break;
        }
        if iterations == max_iter {
            return Err(KreinError::NoConvergence(format!(
                "SMO did not reach KKT gap {tol:e} in {max_iter} iterations (gap {:e})",
                gmax + gmax2
            )));
        }
        iterations += 1;

        let (ci, cj) = (upper[i], upper[j]);
        let (old_i, old_j) = (beta[i], beta[j]);
        let mut quad = k[(i, i)] + k[(j, j)] - 2.0 * k[(i, j)];
        if quad <= 0.0 {
            quad = TAU;
        }
        if y[i] != y[j] {
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = beta[i] - beta[j];
            beta[i] += delta;
            beta[j] += delta;
            if diff > 0.0 {
                if beta[j] < 0.0 {
                    beta[j] = 0.0;
                    beta[i] = diff;
                }
            } else if beta[i] < 0.0 {
                beta[i] = 0.0;
                beta[j] = -diff;
            }
            if diff > ci - cj {
                if beta[i] > ci {
                    beta[i] = ci;
                    beta[j] = ci - diff;
                }
            } else if beta[j] > cj {
                beta[j] = cj;
                beta[i] = cj + diff;
            }
        } else {
            let delta = (grad[i] - grad[j]) / quad;
            let sum = beta[i] + beta[j];
            beta[i] -= delta;
            beta[j] += delta;
            if sum > ci {
                if beta[i] > ci {
                    beta[i] = ci;
                    beta[j] = sum - ci;
                }
            } else if beta[j] < 0.0 {
                beta[j] = 0.0;
                beta[i] = sum;
            }
            if sum > cj {
                if beta[j] > cj {
                    beta[j] = cj;
                    beta[i] = sum - cj;
                }
            } else if beta[i] < 0.0 {
                beta[i] = 0.0;
                beta[j] = sum;
            }
        }

        let (di, dj) = (beta[i] - old_i, beta[j] - old_j);
        for t in 0..n {
            grad[t] += y[t] * (y[i] * k[(t, i)] * di + y[j] * k[(t, j)] * dj);
        }
    }

    // bias from free vectors, else the midpoint of the feasible interval
    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    let mut free_sum = 0.0;
    let mut free = 0usize;
    for t in 0..n {
        let yg = y[t] * grad[t];
        if at_upper(beta[t], upper[t]) {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if at_lower(beta[t]) {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            free_sum += yg;
        }
    }
    let rho = if free > 0 { free_sum / free as f64 } else { 0.5 * (ub + lb) };
    Ok(SvmDual { beta, bias: -rho, iterations })
}
