//! One-vs-one multi-class wrapper over the binary SMO solver.

use ndarray::{Array2, ArrayView2};

use super::smo::{smo_train, BinaryModel, DEFAULT_TOL};
use super::standardize::{standardize_fit, standardize_row, StandardizerStats};
use super::{KernelParams, SvmError};

/// One binary model for an unordered class pair; positive decisions vote
/// for `class_a` (the lower ordinal).
#[derive(Debug, Clone)]
pub struct PairModel {
    pub class_a: usize,
    pub class_b: usize,
    pub model: BinaryModel,
}

/// Standardization stats plus one binary SVM per class pair. Prediction is
/// by majority vote with ties broken toward the lower ordinal class.
#[derive(Debug, Clone)]
pub struct MultiModel {
    pub classes: Vec<usize>,
    pub stats: StandardizerStats,
    pub params: KernelParams,
    pub pairs: Vec<PairModel>,
}

/// Trains K(K-1)/2 pairwise models on standardized features. The
/// standardizer is fit here, on the given training rows only.
pub fn ovo_train(
    x: ArrayView2<'_, f64>,
    y: &[usize],
    params: &KernelParams,
) -> Result<MultiModel, SvmError> {
    if x.nrows() != y.len() {
        return Err(SvmError::LabelMismatch {
            rows: x.nrows(),
            labels: y.len(),
        });
    }
    let mut classes: Vec<usize> = y.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(SvmError::SingleClass);
    }

    let stats = standardize_fit(x);
    let xs = super::standardize_apply(&stats, x);

    let mut pairs = Vec::with_capacity(classes.len() * (classes.len() - 1) / 2);
    for (ai, &class_a) in classes.iter().enumerate() {
        for &class_b in &classes[ai + 1..] {
            let idx: Vec<usize> = y
                .iter()
                .enumerate()
                .filter(|(_, l)| **l == class_a || **l == class_b)
                .map(|(i, _)| i)
                .collect();
            let sub_x = xs.select(ndarray::Axis(0), &idx);
            let sub_y: Vec<i8> = idx
                .iter()
                .map(|&i| if y[i] == class_a { 1 } else { -1 })
                .collect();
            let n = sub_x.nrows();
            let model = smo_train(sub_x.view(), &sub_y, params, DEFAULT_TOL, 10 * n.max(1))
                .map_err(|source| SvmError::Pair {
                    class_a,
                    class_b,
                    source: Box::new(source),
                })?;
            pairs.push(PairModel {
                class_a,
                class_b,
                model,
            });
        }
    }
    Ok(MultiModel {
        classes,
        stats,
        params: *params,
        pairs,
    })
}

impl MultiModel {
    /// Predicts the class of one raw (unstandardized) feature row.
    pub fn predict(&self, row: &[f64]) -> usize {
        let z = standardize_row(&self.stats, row);
        let mut votes = vec![0usize; self.classes.len()];
        for pair in &self.pairs {
            let winner = if pair.model.decision(&z) >= 0.0 {
                pair.class_a
            } else {
                pair.class_b
            };
            let slot = self.classes.iter().position(|c| *c == winner).unwrap();
            votes[slot] += 1;
        }
        let mut best = 0usize;
        for (slot, &count) in votes.iter().enumerate() {
            if count > votes[best] {
                best = slot;
            }
        }
        self.classes[best]
    }

    pub fn predict_batch(&self, x: ArrayView2<'_, f64>) -> Vec<usize> {
        (0..x.nrows())
            .map(|i| self.predict(&x.row(i).to_vec()))
            .collect()
    }
}

/// Converts rows to an owned matrix; a helper for callers assembling
/// feature vectors.
pub fn rows_to_matrix(rows: &[Vec<f64>]) -> Array2<f64> {
    let n = rows.len();
    let d = rows.first().map_or(0, Vec::len);
    let mut x = Array2::zeros((n, d));
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), d, "ragged feature rows");
        x.row_mut(i).assign(&ndarray::ArrayView1::from(&row[..]));
    }
    x
}
