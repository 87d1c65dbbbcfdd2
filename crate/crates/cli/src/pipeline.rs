//! The train / evaluate / ablate / report commands over a populated
//! feature cache.

use std::fs;
use std::path::Path;

use mediaprof::artfeat::article_manifest;
use mediaprof::eval::{
    ablate, evaluate_subset, render_ablation_markdown, render_eval_markdown,
    render_family_table_markdown, run_family_table, task_labels, AblationTable, EvalError,
    EvalReport, Task,
};
use mediaprof::features::FamilySelector;
use mediaprof::features::ManifestError;
use mediaprof::svm::{grid_search, ovo_train, save_model};
use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::extract::{load_cache_checked, FeatureCache};
use crate::CliError;

#[derive(Serialize, Deserialize)]
struct EvalFile {
    manifest_hash: String,
    report: EvalReport,
}

#[derive(Serialize, Deserialize)]
struct FamilyTableFile {
    manifest_hash: String,
    task: Task,
    rows: Vec<(String, EvalReport)>,
}

#[derive(Serialize, Deserialize)]
struct AblationFile {
    manifest_hash: String,
    table: AblationTable,
}

fn matrix_of(cache: &FeatureCache) -> Array2<f64> {
    let n = cache.rows.len();
    let d = cache.manifest.dim();
    let mut x = Array2::zeros((n, d));
    for (i, row) in cache.rows.iter().enumerate() {
        x.row_mut(i).assign(&ndarray::ArrayView1::from(&row.vector[..]));
    }
    x
}

fn gold_labels(cache: &FeatureCache) -> (Vec<usize>, Vec<usize>) {
    (
        cache.rows.iter().map(|r| r.factuality).collect(),
        cache.rows.iter().map(|r| r.bias7).collect(),
    )
}

fn eval_error(err: EvalError) -> CliError {
    match err {
        EvalError::Manifest(e) => CliError::Usage(e.to_string()),
        EvalError::EmptySelection => CliError::Usage("no feature families selected".to_string()),
        other => CliError::Internal(other.to_string()),
    }
}

fn write_outputs(
    output_dir: &Path,
    stem: &str,
    json: &impl Serialize,
    markdown: &str,
) -> Result<(), CliError> {
    fs::create_dir_all(output_dir)
        .map_err(|e| CliError::Data(format!("cannot create output dir: {e}")))?;
    let json_text = serde_json::to_string_pretty(json)
        .map_err(|e| CliError::Internal(format!("report serialization failed: {e}")))?;
    fs::write(output_dir.join(format!("{stem}.json")), json_text)
        .map_err(|e| CliError::Data(format!("cannot write {stem}.json: {e}")))?;
    fs::write(output_dir.join(format!("{stem}.md")), markdown)
        .map_err(|e| CliError::Data(format!("cannot write {stem}.md: {e}")))?;
    Ok(())
}

pub fn cmd_evaluate(cfg: &PipelineConfig) -> Result<(), CliError> {
    let tasks = cfg.tasks()?;
    let cv = cfg.cv_config()?;
    let cache = load_cache_checked(cfg)?;
    let x = matrix_of(&cache);
    let (fact, bias7) = gold_labels(&cache);

    for task in tasks {
        let y = task_labels(task, &fact, &bias7);
        if cfg.per_family {
            let rows = run_family_table(x.view(), &cache.manifest, &y, task, &cfg.families, &cv)
                .map_err(eval_error)?;
            let md = render_family_table_markdown(task.as_str(), &rows);
            let file = FamilyTableFile {
                manifest_hash: cache.manifest_hash.clone(),
                task,
                rows,
            };
            write_outputs(&cfg.output_dir, &format!("families_{}", task.as_str()), &file, &md)?;
            log::info!("wrote per-family table for {}", task.as_str());
        } else {
            let selectors: Vec<FamilySelector> =
                cfg.families.iter().map(|f| FamilySelector::parse(f)).collect();
            let report = evaluate_subset(x.view(), &cache.manifest, &y, task, &selectors, &cv)
                .map_err(eval_error)?;
            let md = render_eval_markdown(&report);
            log::info!(
                "{}: macro-F1 {:.2}, acc {:.2}, MAE {:.2}, MAE^M {:.2}",
                task.as_str(),
                report.pooled.macro_f1 * 100.0,
                report.pooled.accuracy * 100.0,
                report.pooled.mae,
                report.pooled.mae_macro
            );
            let file = EvalFile {
                manifest_hash: cache.manifest_hash.clone(),
                report,
            };
            write_outputs(&cfg.output_dir, &format!("eval_{}", task.as_str()), &file, &md)?;
        }
    }
    Ok(())
}

pub fn cmd_ablate(cfg: &PipelineConfig) -> Result<(), CliError> {
    let tasks = cfg.tasks()?;
    let cv = cfg.cv_config()?;
    let cache = load_cache_checked(cfg)?;
    let x = matrix_of(&cache);
    let (fact, bias7) = gold_labels(&cache);

    for task in tasks {
        let y = task_labels(task, &fact, &bias7);
        let table = ablate(x.view(), &cache.manifest, &y, task, &cv).map_err(eval_error)?;
        let md = render_ablation_markdown(&table);
        let file = AblationFile {
            manifest_hash: cache.manifest_hash.clone(),
            table,
        };
        write_outputs(&cfg.output_dir, &format!("ablation_{}", task.as_str()), &file, &md)?;
        log::info!("wrote ablation table for {}", task.as_str());
    }
    Ok(())
}

pub fn cmd_train(cfg: &PipelineConfig) -> Result<(), CliError> {
    let tasks = cfg.tasks()?;
    let cv = cfg.cv_config()?;
    let cache = load_cache_checked(cfg)?;
    let x = matrix_of(&cache);
    let (fact, bias7) = gold_labels(&cache);
    let selectors: Vec<FamilySelector> =
        cfg.families.iter().map(|f| FamilySelector::parse(f)).collect();
    let cols = cache
        .manifest
        .columns_for(&selectors)
        .map_err(|e: ManifestError| CliError::Usage(e.to_string()))?;
    let x_sel = x.select(ndarray::Axis(1), &cols);

    fs::create_dir_all(&cfg.output_dir)
        .map_err(|e| CliError::Data(format!("cannot create output dir: {e}")))?;
    for task in tasks {
        let y = task_labels(task, &fact, &bias7);
        let (best, score) = grid_search(x_sel.view(), &y, &cv.grid, cv.k_inner, cv.seed)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        log::info!(
            "{}: selected {best} (inner macro-F1 {:.4})",
            task.as_str(),
            score
        );
        let model = ovo_train(x_sel.view(), &y, &best)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        let path = cfg.output_dir.join(format!("model_{}.json", task.as_str()));
        save_model(&model, &cache.manifest_hash, &path)
            .map_err(|e| CliError::Data(e.to_string()))?;
        log::info!("wrote {}", path.display());
    }

    let manifest_json = serde_json::to_string_pretty(&cache.manifest)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    fs::write(cfg.output_dir.join("manifest.json"), manifest_json)
        .map_err(|e| CliError::Data(format!("cannot write manifest.json: {e}")))?;
    let article_json = serde_json::to_string_pretty(&article_manifest())
        .map_err(|e| CliError::Internal(e.to_string()))?;
    fs::write(cfg.output_dir.join("article_manifest.json"), article_json)
        .map_err(|e| CliError::Data(format!("cannot write article_manifest.json: {e}")))?;
    Ok(())
}

fn task_order(task: &Task) -> usize {
    match task {
        Task::Factuality => 0,
        Task::Bias7 => 1,
        Task::Bias3 => 2,
    }
}

/// Consolidates every report JSON in the output directory into one
/// markdown document, ordered factuality, bias7, bias3.
pub fn cmd_report(output_dir: &Path) -> Result<(), CliError> {
    let entries = fs::read_dir(output_dir)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", output_dir.display())))?;

    let mut evals: Vec<(Task, EvalFile)> = Vec::new();
    let mut families: Vec<(Task, FamilyTableFile)> = Vec::new();
    let mut ablations: Vec<(Task, AblationFile)> = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|e| CliError::Data(format!("cannot list {}: {e}", output_dir.display())))?
            .path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if !name.ends_with(".json") {
            continue;
        }
        let read = || {
            fs::read_to_string(&path)
                .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))
        };
        let bad_json =
            |e: serde_json::Error| CliError::Data(format!("corrupt report {}: {e}", path.display()));
        if name.starts_with("eval_") {
            let file: EvalFile = serde_json::from_str(&read()?).map_err(bad_json)?;
            evals.push((file.report.task, file));
        } else if name.starts_with("families_") {
            let file: FamilyTableFile = serde_json::from_str(&read()?).map_err(bad_json)?;
            families.push((file.task, file));
        } else if name.starts_with("ablation_") {
            let file: AblationFile = serde_json::from_str(&read()?).map_err(bad_json)?;
            ablations.push((file.table.task, file));
        }
    }
    if evals.is_empty() && families.is_empty() && ablations.is_empty() {
        return Err(CliError::Usage(format!(
            "no report JSON files found in {}",
            output_dir.display()
        )));
    }
    evals.sort_by_key(|(t, _)| task_order(t));
    families.sort_by_key(|(t, _)| task_order(t));
    ablations.sort_by_key(|(t, _)| task_order(t));

    let mut out = String::from("# Media profiling results\n\n");
    let mut hashes: Vec<&str> = evals
        .iter()
        .map(|(_, f)| f.manifest_hash.as_str())
        .chain(families.iter().map(|(_, f)| f.manifest_hash.as_str()))
        .chain(ablations.iter().map(|(_, f)| f.manifest_hash.as_str()))
        .collect();
    hashes.sort_unstable();
    hashes.dedup();
    out.push_str(&format!("Feature manifest hash(es): {}\n\n", hashes.join(", ")));
    if let Some((_, f)) = evals.first() {
        out.push_str(&format!(
            "Protocol: seed {}, {} outer folds, families {}.\n\n",
            f.report.seed,
            f.report.per_fold.len(),
            f.report.families.join(", ")
        ));
    }
    for (_, file) in &evals {
        out.push_str(&render_eval_markdown(&file.report));
        out.push('\n');
    }
    for (_, file) in &families {
        out.push_str(&render_family_table_markdown(file.task.as_str(), &file.rows));
        out.push('\n');
    }
    for (_, file) in &ablations {
        out.push_str(&render_ablation_markdown(&file.table));
        out.push('\n');
    }
    fs::write(output_dir.join("report.md"), &out)
        .map_err(|e| CliError::Data(format!("cannot write report.md: {e}")))?;
    log::info!("wrote {}", output_dir.join("report.md").display());
    Ok(())
}
