//! Trained-model serialization: one JSON document per model with a
//! mandatory version field and the hash of the feature manifest it was
//! trained against.

use std::fs;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::multiclass::{MultiModel, PairModel};
use super::smo::BinaryModel;
use super::standardize::StandardizerStats;
use super::KernelParams;

pub const MODEL_FILE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModelIoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: unsupported model version {found} (expected {MODEL_FILE_VERSION})")]
    Version { path: String, found: u32 },
}

#[derive(Serialize, Deserialize)]
struct PairModelFile {
    class_a: usize,
    class_b: usize,
    support_vectors: Vec<Vec<f64>>,
    coefficients: Vec<f64>,
    intercept: f64,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    version: u32,
    manifest_hash: String,
    classes: Vec<usize>,
    stats: StandardizerStats,
    params: KernelParams,
    pairs: Vec<PairModelFile>,
}

/// Writes a trained model as JSON.
pub fn save_model(
    model: &MultiModel,
    manifest_hash: &str,
    path: &Path,
) -> Result<(), ModelIoError> {
    let file = ModelFile {
        version: MODEL_FILE_VERSION,
        manifest_hash: manifest_hash.to_string(),
        classes: model.classes.clone(),
        stats: model.stats.clone(),
        params: model.params,
        pairs: model
            .pairs
            .iter()
            .map(|p| PairModelFile {
                class_a: p.class_a,
                class_b: p.class_b,
                support_vectors: p
                    .model
                    .support_vectors
                    .rows()
                    .into_iter()
                    .map(|r| r.to_vec())
                    .collect(),
                coefficients: p.model.coefficients.clone(),
                intercept: p.model.intercept,
            })
            .collect(),
    };
    let json = serde_json::to_string_pretty(&file).map_err(|source| ModelIoError::Json {
        path: path.display().to_string(),
        source,
    })?;
    fs::write(path, json).map_err(|source| ModelIoError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loads a model, returning it with the manifest hash it was trained
/// against.
pub fn load_model(path: &Path) -> Result<(MultiModel, String), ModelIoError> {
    let text = fs::read_to_string(path).map_err(|source| ModelIoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: ModelFile = serde_json::from_str(&text).map_err(|source| ModelIoError::Json {
        path: path.display().to_string(),
        source,
    })?;
    if file.version != MODEL_FILE_VERSION {
        return Err(ModelIoError::Version {
            path: path.display().to_string(),
            found: file.version,
        });
    }
    let dim = file.stats.mean.len();
    let pairs = file
        .pairs
        .into_iter()
        .map(|p| {
            let rows = p.support_vectors.len();
            let mut sv = Array2::zeros((rows, dim));
            for (i, row) in p.support_vectors.iter().enumerate() {
                sv.row_mut(i).assign(&ndarray::ArrayView1::from(&row[..]));
            }
            PairModel {
                class_a: p.class_a,
                class_b: p.class_b,
                model: BinaryModel {
                    support_vectors: sv,
                    coefficients: p.coefficients,
                    intercept: p.intercept,
                    params: file.params,
                },
            }
        })
        .collect();
    Ok((
        MultiModel {
            classes: file.classes,
            stats: file.stats,
            params: file.params,
            pairs,
        },
        file.manifest_hash,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::svm::{ovo_train, rows_to_matrix};

    #[test]
    fn round_trip_preserves_predictions() {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (center, label) in [(0.0, 0usize), (6.0, 1), (12.0, 2)] {
            for off in [-0.4, 0.0, 0.4] {
                rows.push(vec![center + off, off]);
                labels.push(label);
            }
        }
        let x = rows_to_matrix(&rows);
        let model = ovo_train(x.view(), &labels, &KernelParams::rbf(10.0, 0.5)).unwrap();

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        save_model(&model, "manifest-hash-123", &path).unwrap();
        let (loaded, hash) = load_model(&path).unwrap();
        assert_eq!(hash, "manifest-hash-123");
        assert_eq!(loaded.classes, model.classes);
        for row in &rows {
            assert_eq!(loaded.predict(row), model.predict(row));
        }
    }

    #[test]
    fn version_is_checked() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let json = r#"{"version": 99, "manifest_hash": "h", "classes": [0, 1],
                       "stats": {"mean": [0.0], "stddev": [1.0]},
                       "params": {"kind": "linear", "c": 1.0, "gamma": 0.0},
                       "pairs": []}"#;
        fs::write(&path, json).unwrap();
        let err = load_model(&path).unwrap_err();
        assert!(matches!(err, ModelIoError::Version { found: 99, .. }));
    }
}
