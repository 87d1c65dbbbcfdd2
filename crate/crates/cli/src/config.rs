//! Pipeline configuration: TOML file plus command-line overrides.

use std::fs;
use std::path::PathBuf;

use mediaprof::eval::Task;
use mediaprof::svm::{default_grid, KernelParams};
use serde::Deserialize;

use crate::CliError;

/// Everything a pipeline run needs. Defaults reproduce the standard
/// protocol: 5 outer folds, 3 inner folds optimizing macro-F1 over the full
/// log grid, all five feature families, seed 42.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub corpus: Option<PathBuf>,
    pub bundles: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    /// Lexicon/URL resource directory; defaults to the bundled resources.
    pub resources: Option<PathBuf>,
    pub cache_dir: PathBuf,
    pub output_dir: PathBuf,
    pub families: Vec<String>,
    /// `factuality`, `bias7`, `bias3`, `bias` (7-way and 3-way), or `all`.
    pub task: String,
    /// Evaluate each family selector separately instead of their union.
    pub per_family: bool,
    pub k_outer: usize,
    pub k_inner: usize,
    pub seed: u64,
    pub enable_url_ngrams: bool,
    pub grid: GridSpec,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            corpus: None,
            bundles: None,
            embeddings: None,
            resources: None,
            cache_dir: PathBuf::from("cache"),
            output_dir: PathBuf::from("out"),
            families: mediaprof::features::FAMILY_ORDER
                .iter()
                .map(|f| f.to_string())
                .collect(),
            task: "all".to_string(),
            per_family: false,
            k_outer: 5,
            k_inner: 3,
            seed: 42,
            enable_url_ngrams: false,
            grid: GridSpec::default(),
        }
    }
}

/// Grid specification; empty lists fall back to the default log grid.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub kernels: Vec<String>,
    pub c: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl GridSpec {
    pub fn to_grid(&self) -> Result<Vec<KernelParams>, CliError> {
        if self.kernels.is_empty() && self.c.is_empty() && self.gamma.is_empty() {
            return Ok(default_grid());
        }
        let kernels = if self.kernels.is_empty() {
            vec!["linear".to_string(), "rbf".to_string()]
        } else {
            self.kernels.clone()
        };
        let cs = if self.c.is_empty() { vec![1.0] } else { self.c.clone() };
        let gammas = if self.gamma.is_empty() {
            vec![1.0]
        } else {
            self.gamma.clone()
        };
        if cs.iter().any(|c| *c <= 0.0) || gammas.iter().any(|g| *g <= 0.0) {
            return Err(CliError::Usage(
                "grid C and gamma values must be positive".to_string(),
            ));
        }
        let mut grid = Vec::new();
        for kernel in &kernels {
            match kernel.as_str() {
                "linear" => grid.extend(cs.iter().map(|&c| KernelParams::linear(c))),
                "rbf" => {
                    for &c in &cs {
                        for &g in &gammas {
                            grid.push(KernelParams::rbf(c, g));
                        }
                    }
                }
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown kernel `{other}`; expected linear or rbf"
                    )))
                }
            }
        }
        Ok(grid)
    }
}

impl PipelineConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    pub fn apply_overrides(
        &mut self,
        seed: Option<u64>,
        families: Option<Vec<String>>,
        task: Option<String>,
        enable_url_ngrams: bool,
    ) {
        if let Some(seed) = seed {
            self.seed = seed;
        }
        if let Some(families) = families {
            self.families = families;
        }
        if let Some(task) = task {
            self.task = task;
        }
        if enable_url_ngrams {
            self.enable_url_ngrams = true;
        }
    }

    pub fn corpus_path(&self) -> Result<&PathBuf, CliError> {
        self.corpus
            .as_ref()
            .ok_or_else(|| CliError::Usage("config is missing `corpus`".to_string()))
    }

    pub fn bundles_path(&self) -> Result<&PathBuf, CliError> {
        self.bundles
            .as_ref()
            .ok_or_else(|| CliError::Usage("config is missing `bundles`".to_string()))
    }

    pub fn embeddings_path(&self) -> Result<&PathBuf, CliError> {
        self.embeddings
            .as_ref()
            .ok_or_else(|| CliError::Usage("config is missing `embeddings`".to_string()))
    }

    pub fn resources_dir(&self) -> PathBuf {
        self.resources
            .clone()
            .unwrap_or_else(mediaprof::resources::bundled_resource_dir)
    }

    /// Tasks selected by the `task` field, in report order.
    pub fn tasks(&self) -> Result<Vec<Task>, CliError> {
        match self.task.as_str() {
            "all" => Ok(vec![Task::Factuality, Task::Bias7, Task::Bias3]),
            "bias" => Ok(vec![Task::Bias7, Task::Bias3]),
            single => single
                .parse::<Task>()
                .map(|t| vec![t])
                .map_err(CliError::Usage),
        }
    }

    pub fn cv_config(&self) -> Result<mediaprof::eval::CvConfig, CliError> {
        if self.k_outer < 2 || self.k_inner < 2 {
            return Err(CliError::Usage(
                "k_outer and k_inner must be at least 2".to_string(),
            ));
        }
        Ok(mediaprof::eval::CvConfig {
            k_outer: self.k_outer,
            k_inner: self.k_inner,
            grid: self.grid.to_grid()?,
            seed: self.seed,
        })
    }
}
