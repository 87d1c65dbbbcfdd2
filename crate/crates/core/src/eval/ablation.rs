//! Per-family result rows and the leave-one-family-out ablation harness.

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use super::crossval::{evaluate_subset, CvConfig, EvalReport};
use super::{EvalError, Task};
use crate::features::{FamilySelector, FeatureManifest, FAMILY_ORDER};

/// Ablation removal order: FULL first, then FULL minus each family.
pub const ABLATION_FAMILY_ORDER: [&str; 5] = ["traffic", "twitter", "url", "articles", "wikipedia"];

/// One ablation table row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AblationRow {
    pub label: String,
    pub report: EvalReport,
}

/// The six-row ablation table for one task.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AblationTable {
    pub task: Task,
    pub rows: Vec<AblationRow>,
}

/// Runs one cross-validated report per requested feature subset, in the
/// given order. Each subset string is a `family[:part]` selector.
pub fn run_family_table(
    x_full: ArrayView2<'_, f64>,
    manifest: &FeatureManifest,
    y: &[usize],
    task: Task,
    subsets: &[String],
    cfg: &CvConfig,
) -> Result<Vec<(String, EvalReport)>, EvalError> {
    if subsets.is_empty() {
        return Err(EvalError::EmptySelection);
    }
    let mut rows = Vec::with_capacity(subsets.len());
    for subset in subsets {
        let selector = FamilySelector::parse(subset);
        // Fail fast on unknown names before spending time training.
        manifest.columns_for(std::slice::from_ref(&selector))?;
        let report = evaluate_subset(x_full, manifest, y, task, &[selector], cfg)?;
        rows.push((subset.clone(), report));
    }
    Ok(rows)
}

fn title_case(family: &str) -> String {
    match family {
        "url" => "URL".to_string(),
        other => {
            let mut chars = other.chars();
            match chars.next() {
                Some(first) => first.to_uppercase().collect::<String>() + chars.as_str(),
                None => String::new(),
            }
        }
    }
}

/// Produces the FULL row plus one FULL-minus-family row per family, six
/// rows in total.
pub fn ablate(
    x_full: ArrayView2<'_, f64>,
    manifest: &FeatureManifest,
    y: &[usize],
    task: Task,
    cfg: &CvConfig,
) -> Result<AblationTable, EvalError> {
    let all: Vec<FamilySelector> = FAMILY_ORDER
        .iter()
        .map(|f| FamilySelector::parse(f))
        .collect();
    let mut rows = Vec::with_capacity(1 + ABLATION_FAMILY_ORDER.len());
    rows.push(AblationRow {
        label: "Full".to_string(),
        report: evaluate_subset(x_full, manifest, y, task, &all, cfg)?,
    });
    for removed in ABLATION_FAMILY_ORDER {
        let subset: Vec<FamilySelector> = all
            .iter()
            .filter(|s| s.family != removed)
            .cloned()
            .collect();
        rows.push(AblationRow {
            label: format!("Full w/o {}", title_case(removed)),
            report: evaluate_subset(x_full, manifest, y, task, &subset, cfg)?,
        });
    }
    Ok(AblationTable { task, rows })
}
