//! Binary soft-margin SVM trained by sequential minimal optimization.
//!
//! Solves the dual problem
//!   maximize  sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K(x_i, x_j)
//!   s.t.      0 <= alpha_i <= C,  sum_i alpha_i y_i = 0
//! by repeatedly optimizing the maximal-KKT-violating pair, with ties broken
//! by index order so runs are fully deterministic.

use ndarray::{Array2, ArrayView2};

use super::kernel::{kernel_eval, kernel_matrix, KernelParams};
use super::SvmError;

/// Default KKT violation tolerance.
pub const DEFAULT_TOL: f64 = 1e-3;

const TAU: f64 = 1e-12;

/// A trained binary decision function `f(x) = sum_k coef_k K(sv_k, x) + b`,
/// where `coef_k = alpha_k y_k` for the support vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryModel {
    pub support_vectors: Array2<f64>,
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    pub params: KernelParams,
}

impl BinaryModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        let mut f = self.intercept;
        for (k, coef) in self.coefficients.iter().enumerate() {
            let sv = self.support_vectors.row(k);
            f += coef * kernel_eval(sv.as_slice().unwrap(), x, &self.params);
        }
        f
    }

    /// Class in {-1, +1}; the boundary itself counts as +1.
    pub fn predict(&self, x: &[f64]) -> i8 {
        if self.decision(x) >= 0.0 {
            1
        } else {
            -1
        }
    }
}

/// Full solver output: the model plus the per-training-point multipliers
/// and convergence diagnostics.
#[derive(Debug, Clone)]
pub struct SmoOutcome {
    pub model: BinaryModel,
    pub alphas: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn validate(x: ArrayView2<'_, f64>, y: &[i8]) -> Result<(), SvmError> {
    let n = x.nrows();
    if y.len() != n {
        return Err(SvmError::LabelMismatch {
            rows: n,
            labels: y.len(),
        });
    }
    if n < 2 {
        return Err(SvmError::TooFewSamples(n));
    }
    if y.iter().any(|l| *l != 1 && *l != -1) {
        return Err(SvmError::BadBinaryLabel);
    }
    if !(y.contains(&1) && y.contains(&-1)) {
        return Err(SvmError::SingleClass);
    }
    for ((row, col), v) in x.indexed_iter() {
        if !v.is_finite() {
            return Err(SvmError::NonFinite { row, col });
        }
    }
    Ok(())
}

/// Trains a binary SVM and returns the model together with the multipliers.
///
/// `max_passes` bounds the work at `max_passes * n` pair optimizations; if
/// the cap is reached before the KKT gap falls below `tol`, the current
/// iterate is returned with `converged = false` and a warning is logged.
pub fn smo_solve(
    x: ArrayView2<'_, f64>,
    y: &[i8],
    params: &KernelParams,
    tol: f64,
    max_passes: usize,
) -> Result<SmoOutcome, SvmError> {
    validate(x, y)?;
    let n = x.nrows();
    let c = params.c;
    let k = kernel_matrix(x, params);
    let yf: Vec<f64> = y.iter().map(|l| *l as f64).collect();

    let mut alpha = vec![0.0f64; n];
    // Gradient of 1/2 a'Qa - e'a  with Q_ij = y_i y_j K_ij; at a = 0 it is -e.
    let mut grad = vec![-1.0f64; n];

    // v_i = -y_i grad_i; the KKT gap is max(v over I_up) - min(v over I_low).
    let in_up = |a: f64, yi: f64| (yi > 0.0 && a < c) || (yi < 0.0 && a > 0.0);
    let in_low = |a: f64, yi: f64| (yi > 0.0 && a > 0.0) || (yi < 0.0 && a < c);

    let max_iter = max_passes.max(1).saturating_mul(n);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        let mut i_best: Option<(usize, f64)> = None;
        let mut j_best: Option<(usize, f64)> = None;
        for idx in 0..n {
            let v = -yf[idx] * grad[idx];
            if in_up(alpha[idx], yf[idx]) && i_best.is_none_or(|(_, best)| v > best) {
                i_best = Some((idx, v));
            }
            if in_low(alpha[idx], yf[idx]) && j_best.is_none_or(|(_, best)| v < best) {
                j_best = Some((idx, v));
            }
        }
        let (Some((i, v_i)), Some((j, v_j))) = (i_best, j_best) else {
            converged = true;
            break;
        };
        if v_i - v_j <= tol {
            converged = true;
            break;
        }
        iterations += 1;

        // Optimize the (i, j) pair analytically along the equality
        // constraint, clipping to the box. Updated multipliers within a
        // rounding band of a bound are snapped onto it, so the bound tests
        // in the selection sets stay exact.
        let snap = 1e-12 * c.max(1.0);
        let snapped = |v: f64| {
            if v < snap {
                0.0
            } else if v > c - snap {
                c
            } else {
                v
            }
        };
        let s = yf[i] * yf[j];
        let (lo, hi) = if s < 0.0 {
            ((alpha[j] - alpha[i]).max(0.0), (c + alpha[j] - alpha[i]).min(c))
        } else {
            ((alpha[i] + alpha[j] - c).max(0.0), (alpha[i] + alpha[j]).min(c))
        };
        let eta = (k[[i, i]] + k[[j, j]] - 2.0 * k[[i, j]]).max(TAU);
        // E_i - E_j equals v_j - v_i.
        let unclipped = alpha[j] + yf[j] * (v_j - v_i) / eta;
        let new_j = snapped(unclipped.clamp(lo, hi));
        let delta_j = new_j - alpha[j];
        if delta_j == 0.0 {
            log::warn!("smo: stalled on pair ({i}, {j}) at gap {}", v_i - v_j);
            break;
        }
        let new_i = snapped((alpha[i] + s * (alpha[j] - new_j)).clamp(0.0, c));
        let delta_i = new_i - alpha[i];
        alpha[i] = new_i;
        alpha[j] = new_j;
        for idx in 0..n {
            grad[idx] += yf[idx]
                * (yf[i] * k[[i, idx]] * delta_i + yf[j] * k[[j, idx]] * delta_j);
        }
    }
    if !converged && iterations >= max_iter {
        log::warn!("smo: iteration cap {max_iter} reached before convergence (tol {tol})");
    }

    // Intercept: any value between the final bounds is KKT-consistent; use
    // the midpoint, falling back to the mean over free vectors.
    let mut m_up = f64::NEG_INFINITY;
    let mut m_low = f64::INFINITY;
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    for idx in 0..n {
        let v = -yf[idx] * grad[idx];
        if in_up(alpha[idx], yf[idx]) {
            m_up = m_up.max(v);
        }
        if in_low(alpha[idx], yf[idx]) {
            m_low = m_low.min(v);
        }
        if alpha[idx] > 0.0 && alpha[idx] < c {
            free_sum += v;
            free_count += 1;
        }
    }
    let intercept = if m_up.is_finite() && m_low.is_finite() {
        0.5 * (m_up + m_low)
    } else if free_count > 0 {
        free_sum / free_count as f64
    } else {
        0.0
    };

    let sv_idx: Vec<usize> = (0..n).filter(|i| alpha[*i] > 0.0).collect();
    let mut support_vectors = Array2::zeros((sv_idx.len(), x.ncols()));
    let mut coefficients = Vec::with_capacity(sv_idx.len());
    for (row, &i) in sv_idx.iter().enumerate() {
        support_vectors.row_mut(row).assign(&x.row(i));
        coefficients.push(alpha[i] * yf[i]);
    }

    Ok(SmoOutcome {
        model: BinaryModel {
            support_vectors,
            coefficients,
            intercept,
            params: *params,
        },
        alphas: alpha,
        iterations,
        converged,
    })
}

/// Trains a binary SVM, discarding solver diagnostics.
pub fn smo_train(
    x: ArrayView2<'_, f64>,
    y: &[i8],
    params: &KernelParams,
    tol: f64,
    max_passes: usize,
) -> Result<BinaryModel, SvmError> {
    smo_solve(x, y, params, tol, max_passes).map(|out| out.model)
}
