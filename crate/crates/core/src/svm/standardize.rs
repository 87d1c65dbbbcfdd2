//! Per-column z-score standardization fit on training data only.

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

const MIN_STDDEV: f64 = 1e-12;

/// Per-feature mean and population standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizerStats {
    pub mean: Vec<f64>,
    pub stddev: Vec<f64>,
}

/// Computes column means and population standard deviations.
///
/// # Panics
/// Panics on an empty matrix.
pub fn standardize_fit(x: ArrayView2<'_, f64>) -> StandardizerStats {
    let (n, d) = (x.nrows(), x.ncols());
    assert!(n > 0, "cannot fit a standardizer on an empty matrix");
    let mut mean = vec![0.0; d];
    let mut stddev = vec![0.0; d];
    for j in 0..d {
        let col = x.column(j);
        let m = col.sum() / n as f64;
        let var = col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n as f64;
        mean[j] = m;
        stddev[j] = var.sqrt();
    }
    StandardizerStats { mean, stddev }
}

/// Maps each value to `(x - mean) / stddev`; columns with near-zero spread
/// map to 0.
pub fn standardize_apply(stats: &StandardizerStats, x: ArrayView2<'_, f64>) -> Array2<f64> {
    let (n, d) = (x.nrows(), x.ncols());
    assert_eq!(d, stats.mean.len(), "stats fitted on a different width");
    let mut out = Array2::zeros((n, d));
    for j in 0..d {
        let (m, s) = (stats.mean[j], stats.stddev[j]);
        for i in 0..n {
            out[[i, j]] = if s < MIN_STDDEV {
                0.0
            } else {
                (x[[i, j]] - m) / s
            };
        }
    }
    out
}

/// Standardizes a single row with fitted stats.
pub fn standardize_row(stats: &StandardizerStats, row: &[f64]) -> Vec<f64> {
    assert_eq!(row.len(), stats.mean.len(), "stats fitted on a different width");
    row.iter()
        .zip(stats.mean.iter().zip(&stats.stddev))
        .map(|(v, (m, s))| if *s < MIN_STDDEV { 0.0 } else { (v - m) / s })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use proptest::prelude::*;

    #[test]
    fn constant_column_maps_to_zero() {
        let x = array![[5.0, 1.0], [5.0, 3.0], [5.0, 5.0]];
        let stats = standardize_fit(x.view());
        let z = standardize_apply(&stats, x.view());
        assert!(z.column(0).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn population_stddev_on_two_points() {
        let x = array![[0.0], [2.0]];
        let stats = standardize_fit(x.view());
        assert_abs_diff_eq!(stats.mean[0], 1.0);
        assert_abs_diff_eq!(stats.stddev[0], 1.0);
        let z = standardize_apply(&stats, x.view());
        assert_abs_diff_eq!(z[[0, 0]], -1.0);
        assert_abs_diff_eq!(z[[1, 0]], 1.0);
    }

    #[test]
    fn row_and_matrix_paths_agree() {
        let x = array![[1.0, -2.0, 0.0], [4.0, 6.0, 0.0], [-2.0, 1.0, 0.0]];
        let stats = standardize_fit(x.view());
        let z = standardize_apply(&stats, x.view());
        for i in 0..3 {
            let row = standardize_row(&stats, x.row(i).as_slice().unwrap());
            for j in 0..3 {
                assert_abs_diff_eq!(row[j], z[[i, j]], epsilon = 1e-15);
            }
        }
    }

    proptest! {
        #[test]
        fn transformed_columns_are_centered(
            rows in proptest::collection::vec(
                proptest::collection::vec(-100.0f64..100.0, 3), 2..20)
        ) {
            let n = rows.len();
            let flat: Vec<f64> = rows.iter().flatten().copied().collect();
            let x = Array2::from_shape_vec((n, 3), flat).unwrap();
            let stats = standardize_fit(x.view());
            let z = standardize_apply(&stats, x.view());
            for j in 0..3 {
                let mean = z.column(j).sum() / n as f64;
                prop_assert!(mean.abs() < 1e-12, "column {} mean {}", j, mean);
            }
        }
    }
}
