//! Kernel functions and hyper-parameters.

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Linear,
    Rbf,
}

/// SVM hyper-parameters: kernel kind, box constraint C, and RBF width
/// gamma (ignored for the linear kernel).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub kind: KernelKind,
    pub c: f64,
    pub gamma: f64,
}

impl KernelParams {
    /// # Panics
    /// Panics unless `c > 0`.
    pub fn linear(c: f64) -> Self {
        assert!(c > 0.0, "C must be positive");
        KernelParams {
            kind: KernelKind::Linear,
            c,
            gamma: 0.0,
        }
    }

    /// # Panics
    /// Panics unless `c > 0` and `gamma > 0`.
    pub fn rbf(c: f64, gamma: f64) -> Self {
        assert!(c > 0.0, "C must be positive");
        assert!(gamma > 0.0, "gamma must be positive");
        KernelParams {
            kind: KernelKind::Rbf,
            c,
            gamma,
        }
    }
}

impl std::fmt::Display for KernelParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            KernelKind::Linear => write!(f, "linear(C={})", self.c),
            KernelKind::Rbf => write!(f, "rbf(C={}, gamma={})", self.c, self.gamma),
        }
    }
}

/// Evaluates the kernel: `<x,z>` for linear, `exp(-gamma * |x-z|^2)` for RBF.
///
/// # Panics
/// Panics on a length mismatch.
pub fn kernel_eval(x: &[f64], z: &[f64], p: &KernelParams) -> f64 {
    assert_eq!(x.len(), z.len(), "kernel arguments must have equal length");
    match p.kind {
        KernelKind::Linear => x.iter().zip(z).map(|(a, b)| a * b).sum(),
        KernelKind::Rbf => {
            let sq: f64 = x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum();
            (-p.gamma * sq).exp()
        }
    }
}

/// Full kernel matrix over the rows of `x`, built from one pass of pairwise
/// dot products.
pub fn kernel_matrix(x: ArrayView2<'_, f64>, p: &KernelParams) -> Array2<f64> {
    let n = x.nrows();
    let mut dots = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        let xi = x.row(i);
        for j in i..n {
            let d = xi.dot(&x.row(j));
            dots[[i, j]] = d;
            dots[[j, i]] = d;
        }
    }
    match p.kind {
        KernelKind::Linear => dots,
        KernelKind::Rbf => {
            let sq: Vec<f64> = (0..n).map(|i| dots[[i, i]]).collect();
            let mut k = dots;
            for i in 0..n {
                for j in 0..n {
                    let dist_sq = (sq[i] + sq[j] - 2.0 * k[[i, j]]).max(0.0);
                    k[[i, j]] = (-p.gamma * dist_sq).exp();
                }
            }
            k
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    #[test]
    fn rbf_of_identical_points_is_one() {
        let p = KernelParams::rbf(1.0, 0.5);
        assert_eq!(kernel_eval(&[1.0, 2.0], &[1.0, 2.0], &p), 1.0);
    }

    #[test]
    fn linear_is_dot_product() {
        let p = KernelParams::linear(1.0);
        assert_eq!(kernel_eval(&[1.0, 2.0], &[3.0, 4.0], &p), 11.0);
    }

    #[test]
    fn rbf_closed_form() {
        let p = KernelParams::rbf(1.0, 1.0);
        assert_abs_diff_eq!(
            kernel_eval(&[0.0], &[1.0], &p),
            (-1.0f64).exp(),
            epsilon = 1e-12
        );
    }

    #[test]
    #[should_panic(expected = "equal length")]
    fn length_mismatch_panics() {
        kernel_eval(&[1.0], &[1.0, 2.0], &KernelParams::linear(1.0));
    }

    #[test]
    fn matrix_matches_pointwise_eval() {
        let x = array![[0.0, 1.0], [2.0, -1.0], [0.5, 0.5]];
        for p in [KernelParams::linear(1.0), KernelParams::rbf(1.0, 0.7)] {
            let k = kernel_matrix(x.view(), &p);
            for i in 0..3 {
                for j in 0..3 {
                    let expected = kernel_eval(
                        x.row(i).as_slice().unwrap(),
                        x.row(j).as_slice().unwrap(),
                        &p,
                    );
                    assert_abs_diff_eq!(k[[i, j]], expected, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn rbf_is_scale_invariant_with_matching_gamma() {
        // Scaling features by s and gamma by 1/s^2 leaves values unchanged.
        let s = 3.5;
        let x = [0.2, -1.0, 0.7];
        let z = [1.0, 0.5, -0.25];
        let xs: Vec<f64> = x.iter().map(|v| v * s).collect();
        let zs: Vec<f64> = z.iter().map(|v| v * s).collect();
        let p = KernelParams::rbf(1.0, 0.8);
        let ps = KernelParams::rbf(1.0, 0.8 / (s * s));
        assert_abs_diff_eq!(
            kernel_eval(&x, &z, &p),
            kernel_eval(&xs, &zs, &ps),
            epsilon = 1e-12
        );
    }
}
