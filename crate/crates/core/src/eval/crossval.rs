//! Outer cross-validation with nested grid search, and the per-run report.

use ndarray::{ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use super::folds::{fold_digest, stratified_kfold};
use super::metrics::{confusion_matrix, majority_class, metrics, MetricQuad};
use super::{EvalError, Task};
use crate::corpus::map_bias_7_to_3;
use crate::features::{FamilySelector, FeatureManifest};
use crate::svm::{default_grid, grid_search, ovo_train, KernelParams};

/// Cross-validation protocol configuration. Defaults follow the evaluation
/// protocol: 5 outer folds, 3 inner folds, the full log grid, macro-F1
/// optimized.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvConfig {
    pub k_outer: usize,
    pub k_inner: usize,
    pub grid: Vec<KernelParams>,
    pub seed: u64,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            k_outer: 5,
            k_inner: 3,
            grid: default_grid(),
            seed: 42,
        }
    }
}

/// Raw cross-validation output before report assembly.
#[derive(Debug, Clone)]
pub struct CvOutcome {
    /// Out-of-fold prediction for every row.
    pub predictions: Vec<usize>,
    /// Outer fold id of every row.
    pub fold_of: Vec<usize>,
    pub per_fold: Vec<MetricQuad>,
    pub chosen_params: Vec<KernelParams>,
    pub fold_digest: String,
}

/// One evaluated run: pooled and per-fold metrics, confusion matrix, and
/// provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub task: Task,
    pub families: Vec<String>,
    pub dims: usize,
    pub seed: u64,
    pub fold_digest: String,
    /// Metrics over the pooled out-of-fold predictions.
    pub pooled: MetricQuad,
    /// Mean of the per-fold metrics (the other common aggregation).
    pub fold_mean: MetricQuad,
    pub per_fold: Vec<MetricQuad>,
    pub confusion: Vec<Vec<u64>>,
    pub chosen_params: Vec<KernelParams>,
    /// Majority-class baseline on the same gold labels.
    pub majority_baseline: MetricQuad,
    /// For the 7-way bias task: metrics of the pooled predictions after
    /// mapping both gold and predicted labels onto the 3-way scale.
    pub mapped_bias3: Option<MetricQuad>,
}

fn derived_seed(seed: u64, fold: usize) -> u64 {
    seed.wrapping_add((fold as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs the outer protocol: per fold, grid-search on the training split,
/// retrain on the full split with the winning parameters, predict the test
/// split. Pooled metrics are computed over the union of out-of-fold
/// predictions.
pub fn cross_validate(
    x: ArrayView2<'_, f64>,
    y: &[usize],
    k_classes: usize,
    cfg: &CvConfig,
) -> Result<CvOutcome, EvalError> {
    assert_eq!(x.nrows(), y.len(), "features must be row-aligned with labels");
    let folds = stratified_kfold(y, cfg.k_outer, cfg.seed);
    let digest = fold_digest(&folds);

    let mut predictions = vec![0usize; y.len()];
    let mut fold_of = vec![0usize; y.len()];
    let mut per_fold = Vec::with_capacity(folds.len());
    let mut chosen_params = Vec::with_capacity(folds.len());

    for (f, test) in folds.iter().enumerate() {
        let train: Vec<usize> = (0..y.len()).filter(|i| !test.contains(i)).collect();
        let x_train = x.select(Axis(0), &train);
        let y_train: Vec<usize> = train.iter().map(|&i| y[i]).collect();

        let map_err = |source| EvalError::Fold { fold: f, source };
        let (best, _) = grid_search(
            x_train.view(),
            &y_train,
            &cfg.grid,
            cfg.k_inner,
            derived_seed(cfg.seed, f),
        )
        .map_err(map_err)?;
        let model = ovo_train(x_train.view(), &y_train, &best).map_err(map_err)?;

        let mut y_true_fold = Vec::with_capacity(test.len());
        let mut y_pred_fold = Vec::with_capacity(test.len());
        for &i in test {
            let pred = model.predict(&x.row(i).to_vec());
            predictions[i] = pred;
            fold_of[i] = f;
            y_true_fold.push(y[i]);
            y_pred_fold.push(pred);
        }
        per_fold.push(metrics(&y_true_fold, &y_pred_fold, k_classes));
        chosen_params.push(best);
    }

    Ok(CvOutcome {
        predictions,
        fold_of,
        per_fold,
        chosen_params,
        fold_digest: digest,
    })
}

fn mean_quad(quads: &[MetricQuad]) -> MetricQuad {
    let n = quads.len().max(1) as f64;
    MetricQuad {
        accuracy: quads.iter().map(|q| q.accuracy).sum::<f64>() / n,
        macro_f1: quads.iter().map(|q| q.macro_f1).sum::<f64>() / n,
        mae: quads.iter().map(|q| q.mae).sum::<f64>() / n,
        mae_macro: quads.iter().map(|q| q.mae_macro).sum::<f64>() / n,
    }
}

/// Task labels from the full per-medium gold labels.
pub fn task_labels(task: Task, factuality: &[usize], bias7: &[usize]) -> Vec<usize> {
    match task {
        Task::Factuality => factuality.to_vec(),
        Task::Bias7 => bias7.to_vec(),
        Task::Bias3 => bias7.iter().map(|b| map_bias_7_to_3(*b)).collect(),
    }
}

/// Cross-validates the columns selected by `selectors` and assembles the
/// report.
pub fn evaluate_subset(
    x_full: ArrayView2<'_, f64>,
    manifest: &FeatureManifest,
    y: &[usize],
    task: Task,
    selectors: &[FamilySelector],
    cfg: &CvConfig,
) -> Result<EvalReport, EvalError> {
    if selectors.is_empty() {
        return Err(EvalError::EmptySelection);
    }
    let cols = manifest.columns_for(selectors)?;
    let x = x_full.select(Axis(1), &cols);
    let k = task.class_count();
    let outcome = cross_validate(x.view(), y, k, cfg)?;

    let pooled = metrics(y, &outcome.predictions, k);
    let confusion = confusion_matrix(y, &outcome.predictions, k);
    let majority = vec![majority_class(y, k); y.len()];
    let mapped_bias3 = (task == Task::Bias7).then(|| {
        let gold: Vec<usize> = y.iter().map(|b| map_bias_7_to_3(*b)).collect();
        let pred: Vec<usize> = outcome.predictions.iter().map(|b| map_bias_7_to_3(*b)).collect();
        metrics(&gold, &pred, 3)
    });

    Ok(EvalReport {
        task,
        families: selectors.iter().map(FamilySelector::to_string_form).collect(),
        dims: cols.len(),
        seed: cfg.seed,
        fold_digest: outcome.fold_digest,
        pooled,
        fold_mean: mean_quad(&outcome.per_fold),
        per_fold: outcome.per_fold,
        confusion,
        chosen_params: outcome.chosen_params,
        majority_baseline: metrics(y, &majority, k),
        mapped_bias3,
    })
}
