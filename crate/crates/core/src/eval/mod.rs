//! Ordinal evaluation metrics, stratified k-fold cross-validation, the
//! per-family results protocol, and the ablation harness.

mod ablation;
mod crossval;
mod folds;
mod metrics;
mod report;

pub use ablation::{ablate, run_family_table, AblationRow, AblationTable, ABLATION_FAMILY_ORDER};
pub use crossval::{cross_validate, evaluate_subset, task_labels, CvConfig, CvOutcome, EvalReport};
pub use folds::{fold_digest, stratified_kfold};
pub use metrics::{confusion_matrix, majority_class, metrics, MetricQuad};
pub use report::{render_ablation_markdown, render_eval_markdown, render_family_table_markdown};

use thiserror::Error;

use crate::features::ManifestError;
use crate::svm::SvmError;

/// Prediction task. The 3-way bias task trains on gold labels mapped by
/// [`crate::corpus::map_bias_7_to_3`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Factuality,
    Bias7,
    Bias3,
}

impl Task {
    pub fn class_count(&self) -> usize {
        match self {
            Task::Factuality | Task::Bias3 => 3,
            Task::Bias7 => 7,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Task::Factuality => "factuality",
            Task::Bias7 => "bias7",
            Task::Bias3 => "bias3",
        }
    }

    pub fn class_labels(&self) -> &'static [&'static str] {
        match self {
            Task::Factuality => &crate::corpus::FACTUALITY_LABELS,
            Task::Bias7 => &crate::corpus::BIAS7_LABELS,
            Task::Bias3 => &crate::corpus::BIAS3_LABELS,
        }
    }
}

impl std::str::FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "factuality" => Ok(Task::Factuality),
            "bias7" => Ok(Task::Bias7),
            "bias3" => Ok(Task::Bias3),
            other => Err(format!(
                "unknown task `{other}`; expected factuality, bias7, or bias3"
            )),
        }
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("fold {fold}: {source}")]
    Fold {
        fold: usize,
        #[source]
        source: SvmError,
    },
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error(transparent)]
    Svm(#[from] SvmError),
    #[error("empty feature-family selection")]
    EmptySelection,
}
