//! Markdown rendering of evaluation and ablation tables, mirroring the
//! Macro-F1 / Acc. / MAE / MAE^M column order.

use super::ablation::AblationTable;
use super::crossval::EvalReport;
use super::metrics::MetricQuad;

fn quad_cells(q: &MetricQuad) -> String {
    format!(
        "{:.2} | {:.2} | {:.2} | {:.2}",
        q.macro_f1 * 100.0,
        q.accuracy * 100.0,
        q.mae,
        q.mae_macro
    )
}

const TABLE_HEADER: &str = "| Features | Macro-F1 | Acc. | MAE | MAE^M |\n|---|---|---|---|---|\n";

/// One full-system report as a small markdown table with its baseline row.
pub fn render_eval_markdown(report: &EvalReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "## Task: {} ({} features: {})\n\n",
        report.task.as_str(),
        report.dims,
        report.families.join(", ")
    ));
    out.push_str(TABLE_HEADER);
    out.push_str(&format!(
        "| Majority Baseline | {} |\n",
        quad_cells(&report.majority_baseline)
    ));
    out.push_str(&format!("| Full | {} |\n", quad_cells(&report.pooled)));
    if let Some(mapped) = &report.mapped_bias3 {
        out.push_str(&format!("| Full (mapped to 3-way) | {} |\n", quad_cells(mapped)));
    }
    out.push_str(&format!(
        "\nSeed {}, folds {}, fold digest `{}`.\n",
        report.seed,
        report.per_fold.len(),
        report.fold_digest
    ));
    out.push_str(&format!(
        "Fold-mean metrics: {}.\n",
        quad_cells(&report.fold_mean).replace(" | ", " / ")
    ));
    out
}

/// The per-family table: one row per evaluated feature subset.
pub fn render_family_table_markdown(task: &str, rows: &[(String, EvalReport)]) -> String {
    let mut out = String::new();
    out.push_str(&format!("## Per-family results: {task}\n\n"));
    out.push_str(TABLE_HEADER);
    if let Some((_, first)) = rows.first() {
        out.push_str(&format!(
            "| Majority Baseline | {} |\n",
            quad_cells(&first.majority_baseline)
        ));
    }
    for (name, report) in rows {
        out.push_str(&format!("| {name} | {} |\n", quad_cells(&report.pooled)));
    }
    out
}

/// The six-row ablation table for one task.
pub fn render_ablation_markdown(table: &AblationTable) -> String {
    let mut out = String::new();
    out.push_str(&format!("## Ablation: {}\n\n", table.task.as_str()));
    out.push_str(TABLE_HEADER);
    if let Some(first) = table.rows.first() {
        out.push_str(&format!(
            "| Majority Baseline | {} |\n",
            quad_cells(&first.report.majority_baseline)
        ));
    }
    for row in &table.rows {
        out.push_str(&format!("| {} | {} |\n", row.label, quad_cells(&row.report.pooled)));
    }
    out
}
