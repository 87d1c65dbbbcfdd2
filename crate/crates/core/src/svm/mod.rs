//! Feature standardization, kernels, a binary SVM trained by sequential
//! minimal optimization, a one-vs-one multi-class wrapper, and grid search
//! with internal cross-validation.

mod grid;
mod kernel;
mod model_io;
mod multiclass;
mod smo;
mod standardize;

pub use grid::{default_grid, grid_search};
pub use kernel::{kernel_eval, kernel_matrix, KernelKind, KernelParams};
pub use model_io::{load_model, save_model, ModelIoError, MODEL_FILE_VERSION};
pub use multiclass::{ovo_train, rows_to_matrix, MultiModel, PairModel};
pub use smo::{smo_solve, smo_train, BinaryModel, SmoOutcome, DEFAULT_TOL};
pub use standardize::{standardize_apply, standardize_fit, standardize_row, StandardizerStats};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SvmError {
    #[error("training requires at least two samples, got {0}")]
    TooFewSamples(usize),
    #[error("training requires both classes; got a single class")]
    SingleClass,
    #[error("labels must be -1 or +1")]
    BadBinaryLabel,
    #[error("{rows} rows but {labels} labels")]
    LabelMismatch { rows: usize, labels: usize },
    #[error("non-finite feature at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("pair ({class_a} vs {class_b}): {source}")]
    Pair {
        class_a: usize,
        class_b: usize,
        #[source]
        source: Box<SvmError>,
    },
    #[error("hyper-parameter grid is empty")]
    EmptyGrid,
}
