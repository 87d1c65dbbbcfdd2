//! Hyper-parameter grid search with internal stratified cross-validation,
//! optimizing macro-averaged F1.

use ndarray::{ArrayView2, Axis};
use rayon::prelude::*;

use super::multiclass::ovo_train;
use super::{KernelParams, SvmError};
use crate::eval::{metrics, stratified_kfold};

/// The conventional log grid: C in 2^-5..2^15 and gamma in 2^-15..2^3,
/// both stepped by 4x, for linear and RBF kernels (121 candidates).
pub fn default_grid() -> Vec<KernelParams> {
    let cs: Vec<f64> = (-5..=15).step_by(2).map(|e| 2f64.powi(e)).collect();
    let gammas: Vec<f64> = (-15..=3).step_by(2).map(|e| 2f64.powi(e)).collect();
    let mut grid: Vec<KernelParams> = cs.iter().map(|&c| KernelParams::linear(c)).collect();
    for &c in &cs {
        for &g in &gammas {
            grid.push(KernelParams::rbf(c, g));
        }
    }
    grid
}

/// Scores every candidate by mean macro-F1 over a stratified `k_inner`-fold
/// cross-validation of `(x, y)` and returns the best, with ties broken by
/// grid order. Standardization is fit inside each inner training fold (the
/// one-vs-one trainer owns it).
pub fn grid_search(
    x: ArrayView2<'_, f64>,
    y: &[usize],
    grid: &[KernelParams],
    k_inner: usize,
    seed: u64,
) -> Result<(KernelParams, f64), SvmError> {
    if grid.is_empty() {
        return Err(SvmError::EmptyGrid);
    }
    let k_classes = y.iter().max().map_or(0, |m| m + 1);
    let folds = stratified_kfold(y, k_inner, seed);

    let splits: Vec<(Vec<usize>, &Vec<usize>)> = folds
        .iter()
        .map(|test| {
            let train: Vec<usize> = (0..y.len()).filter(|i| !test.contains(i)).collect();
            (train, test)
        })
        .collect();

    let scores: Vec<f64> = grid
        .par_iter()
        .map(|params| -> Result<f64, SvmError> {
            let mut total = 0.0;
            let mut used = 0usize;
            for (train, test) in &splits {
                if test.is_empty() {
                    continue;
                }
                let x_train = x.select(Axis(0), train);
                let y_train: Vec<usize> = train.iter().map(|&i| y[i]).collect();
                let model = ovo_train(x_train.view(), &y_train, params)?;
                let y_true: Vec<usize> = test.iter().map(|&i| y[i]).collect();
                let y_pred: Vec<usize> = test
                    .iter()
                    .map(|&i| model.predict(&x.row(i).to_vec()))
                    .collect();
                total += metrics(&y_true, &y_pred, k_classes).macro_f1;
                used += 1;
            }
            Ok(total / used.max(1) as f64)
        })
        .collect::<Result<Vec<f64>, SvmError>>()?;

    let mut best = 0usize;
    for (i, score) in scores.iter().enumerate() {
        if *score > scores[best] {
            best = i;
        }
    }
    Ok((grid[best], scores[best]))
}
