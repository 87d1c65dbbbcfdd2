//! Accuracy, macro-averaged F1, MAE, and macro-averaged MAE for ordinal
//! classification.

use serde::{Deserialize, Serialize};

/// The metric quadruple reported for every run. Accuracy and macro-F1 are
/// fractions in [0,1]; the MAE values are in label units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricQuad {
    pub accuracy: f64,
    pub macro_f1: f64,
    pub mae: f64,
    pub mae_macro: f64,
}

/// Computes the metric quadruple over `k` classes.
///
/// Macro-F1 averages per-class F1 over all `k` classes, scoring 0 for a
/// class with no true and no predicted members. Macro MAE averages the
/// per-class mean absolute error over the classes present in `y_true`.
///
/// # Panics
/// Panics on empty or mismatched inputs or out-of-range labels.
pub fn metrics(y_true: &[usize], y_pred: &[usize], k: usize) -> MetricQuad {
    assert!(!y_true.is_empty(), "metrics require at least one sample");
    assert_eq!(y_true.len(), y_pred.len(), "length mismatch");
    assert!(
        y_true.iter().chain(y_pred).all(|l| *l < k),
        "label out of range [0, {k})"
    );

    let n = y_true.len() as f64;
    let correct = y_true.iter().zip(y_pred).filter(|(t, p)| t == p).count();
    let accuracy = correct as f64 / n;

    let mut f1_sum = 0.0;
    for class in 0..k {
        let tp = y_true
            .iter()
            .zip(y_pred)
            .filter(|(t, p)| **t == class && **p == class)
            .count() as f64;
        let pred_pos = y_pred.iter().filter(|p| **p == class).count() as f64;
        let true_pos = y_true.iter().filter(|t| **t == class).count() as f64;
        let precision = if pred_pos > 0.0 { tp / pred_pos } else { 0.0 };
        let recall = if true_pos > 0.0 { tp / true_pos } else { 0.0 };
        if precision + recall > 0.0 {
            f1_sum += 2.0 * precision * recall / (precision + recall);
        }
    }
    let macro_f1 = f1_sum / k as f64;

    let mae = y_true
        .iter()
        .zip(y_pred)
        .map(|(t, p)| (*t as f64 - *p as f64).abs())
        .sum::<f64>()
        / n;

    let mut mae_macro = 0.0;
    let mut present = 0usize;
    for class in 0..k {
        let errors: Vec<f64> = y_true
            .iter()
            .zip(y_pred)
            .filter(|(t, _)| **t == class)
            .map(|(t, p)| (*t as f64 - *p as f64).abs())
            .collect();
        if !errors.is_empty() {
            mae_macro += errors.iter().sum::<f64>() / errors.len() as f64;
            present += 1;
        }
    }
    mae_macro /= present.max(1) as f64;

    MetricQuad {
        accuracy,
        macro_f1,
        mae,
        mae_macro,
    }
}

/// K x K count matrix; rows are true classes, columns predicted classes.
pub fn confusion_matrix(y_true: &[usize], y_pred: &[usize], k: usize) -> Vec<Vec<u64>> {
    assert_eq!(y_true.len(), y_pred.len(), "length mismatch");
    let mut m = vec![vec![0u64; k]; k];
    for (t, p) in y_true.iter().zip(y_pred) {
        m[*t][*p] += 1;
    }
    m
}

/// Most frequent class, ties broken toward the lower ordinal.
pub fn majority_class(y: &[usize], k: usize) -> usize {
    let mut counts = vec![0usize; k];
    for l in y {
        counts[*l] += 1;
    }
    let mut best = 0usize;
    for (class, &count) in counts.iter().enumerate() {
        if count > counts[best] {
            best = class;
        }
    }
    best
}
