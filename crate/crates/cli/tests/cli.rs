//! End-to-end tests of the `mediaprof` binary: exit codes, cache behavior,
//! and report determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mediaprof"))
}

fn core_resources() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/resources")
}

fn planted() -> PathBuf {
    core_resources().join("fixtures/planted")
}

struct Workspace {
    #[allow(dead_code)]
    dir: tempfile::TempDir,
    config: PathBuf,
    cache: PathBuf,
    out: PathBuf,
}

/// Writes a config pointing at the planted fixture corpus with a
/// one-candidate grid so runs stay fast.
fn workspace() -> Workspace {
    workspace_with(&planted().join("corpus.csv"), &planted().join("bundles"))
}

fn workspace_with(corpus: &Path, bundles: &Path) -> Workspace {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = dir.path().join("out");
    let config = dir.path().join("config.toml");
    fs::write(
        &config,
        format!(
            r#"
corpus = {corpus:?}
bundles = {bundles:?}
embeddings = {embeddings:?}
cache_dir = {cache:?}
output_dir = {out:?}
task = "factuality"

[grid]
kernels = ["linear"]
c = [10.0]
"#,
            corpus = corpus,
            bundles = bundles,
            embeddings = core_resources().join("embeddings/mini25.txt"),
            cache = cache,
            out = out,
        ),
    )
    .unwrap();
    Workspace {
        dir,
        config,
        cache,
        out,
    }
}

fn run(ws: &Workspace, args: &[&str]) -> Output {
    bin()
        .arg("--config")
        .arg(&ws.config)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).to_string()
}

#[test]
fn extract_is_idempotent_and_logs_dims() {
    let ws = workspace();
    let first = run(&ws, &["extract"]);
    assert!(first.status.success(), "{}", stderr_of(&first));
    let log = stderr_of(&first);
    assert!(log.contains("total feature dims: 277"), "{log}");
    assert!(log.contains("60 computed"), "{log}");
    let bytes_first = fs::read(ws.cache.join("features.json")).unwrap();

    let second = run(&ws, &["extract"]);
    assert!(second.status.success());
    let log = stderr_of(&second);
    assert!(log.contains("60 reused, 0 computed"), "{log}");
    let bytes_second = fs::read(ws.cache.join("features.json")).unwrap();
    assert_eq!(bytes_first, bytes_second, "cache rewrite must be byte-identical");
}

#[test]
fn extract_skips_media_without_bundles() {
    // Three media in the corpus, one of them without a bundle directory.
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.csv");
    fs::write(
        &corpus,
        "medium_id,url,factuality,bias7\n\
         planted00.example,http://planted00.example/,Low,Extreme-Left\n\
         planted01.example,http://planted01.example/,Mixed,Left\n\
         ghost.example,http://ghost.example/,High,Center\n",
    )
    .unwrap();
    let ws = workspace_with(&corpus, &planted().join("bundles"));
    let output = run(&ws, &["extract"]);
    assert!(output.status.success());
    let log = stderr_of(&output);
    assert!(log.contains("2 media (0 reused, 2 computed, 1 skipped)"), "{log}");
    let skipped = fs::read_to_string(ws.cache.join("skipped.txt")).unwrap();
    assert_eq!(skipped.trim(), "ghost.example");
}

#[test]
fn identical_seeds_give_byte_identical_reports() {
    let ws = workspace();
    assert!(run(&ws, &["extract"]).status.success());
    assert!(run(&ws, &["--seed", "9", "evaluate"]).status.success());
    let first = fs::read(ws.out.join("eval_factuality.json")).unwrap();
    assert!(run(&ws, &["--seed", "9", "evaluate"]).status.success());
    let second = fs::read(ws.out.join("eval_factuality.json")).unwrap();
    assert_eq!(first, second);
}

#[test]
fn train_writes_loadable_model() {
    let ws = workspace();
    assert!(run(&ws, &["extract"]).status.success());
    let output = run(&ws, &["train"]);
    assert!(output.status.success(), "{}", stderr_of(&output));
    let (model, hash) = mediaprof::svm::load_model(&ws.out.join("model_factuality.json")).unwrap();
    assert_eq!(model.classes, vec![0, 1, 2]);
    assert_eq!(hash.len(), 64);
    assert!(ws.out.join("manifest.json").exists());
    assert!(ws.out.join("article_manifest.json").exists());
}

#[test]
fn unknown_task_is_usage_error() {
    let ws = workspace();
    let output = run(&ws, &["--task", "sarcasm", "evaluate"]);
    assert_eq!(output.status.code(), Some(1), "{}", stderr_of(&output));
}

#[test]
fn unknown_family_is_usage_error() {
    let ws = workspace();
    assert!(run(&ws, &["extract"]).status.success());
    let output = run(&ws, &["--families", "facebook", "evaluate"]);
    assert_eq!(output.status.code(), Some(1), "{}", stderr_of(&output));
    assert!(stderr_of(&output).contains("valid families"));
}

#[test]
fn missing_corpus_is_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let ws = workspace_with(&dir.path().join("nope.csv"), &planted().join("bundles"));
    let output = run(&ws, &["extract"]);
    assert_eq!(output.status.code(), Some(2), "{}", stderr_of(&output));
}

#[test]
fn evaluate_without_cache_is_data_error() {
    let ws = workspace();
    let output = run(&ws, &["evaluate"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("extract"));
}

#[test]
fn stale_cache_is_detected_with_hint() {
    // Copy the resource lists so one can be edited after extraction.
    let dir = tempfile::tempdir().unwrap();
    let res = dir.path().join("resources");
    for sub in ["lexicons", "url"] {
        fs::create_dir_all(res.join(sub)).unwrap();
        for entry in fs::read_dir(core_resources().join(sub)).unwrap() {
            let entry = entry.unwrap();
            fs::copy(entry.path(), res.join(sub).join(entry.file_name())).unwrap();
        }
    }
    let ws = workspace();
    let config = fs::read_to_string(&ws.config).unwrap();
    // Top-level key; must precede the [grid] table.
    fs::write(
        &ws.config,
        format!("resources = {:?}\n{config}", res),
    )
    .unwrap();

    assert!(run(&ws, &["extract"]).status.success());
    let positive = res.join("lexicons/positive.txt");
    let mut text = fs::read_to_string(&positive).unwrap();
    text.push_str("sparkling\n");
    fs::write(&positive, text).unwrap();

    let output = run(&ws, &["evaluate"]);
    assert_eq!(output.status.code(), Some(2), "{}", stderr_of(&output));
    let log = stderr_of(&output);
    assert!(log.contains("stale"), "{log}");
    assert!(log.contains("extract"), "{log}");
}

#[test]
fn report_requires_reports() {
    let ws = workspace();
    fs::create_dir_all(&ws.out).unwrap();
    let output = run(&ws, &["report"]);
    assert_eq!(output.status.code(), Some(1), "{}", stderr_of(&output));
}

#[test]
fn report_names_corrupt_files() {
    let ws = workspace();
    fs::create_dir_all(&ws.out).unwrap();
    fs::write(ws.out.join("eval_factuality.json"), "{ not json").unwrap();
    let output = run(&ws, &["report"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("eval_factuality.json"));
}

#[test]
fn report_consolidates_in_task_order() {
    let ws = workspace();
    assert!(run(&ws, &["extract"]).status.success());
    assert!(run(&ws, &["--task", "bias3", "evaluate"]).status.success());
    assert!(run(&ws, &["--task", "factuality", "evaluate"]).status.success());
    assert!(run(&ws, &["report"]).status.success());
    let report = fs::read_to_string(ws.out.join("report.md")).unwrap();
    let fact_pos = report.find("Task: factuality").unwrap();
    let bias3_pos = report.find("Task: bias3").unwrap();
    assert!(fact_pos < bias3_pos, "factuality section must precede bias3");
}

#[test]
fn full_vector_is_1927_dims_at_embedding_dim_300() {
    // A tiny 300-dim table is enough to pin the full-width layout:
    // 1 + 12 + (11 + 300) + (1 + 5*300) + 102.
    let dir = tempfile::tempdir().unwrap();
    let embeddings = dir.path().join("wide.txt");
    let mut lines = vec!["2 300".to_string()];
    for token in ["news", "daily"] {
        let values: Vec<String> = (0..300).map(|k| format!("{}", (k % 7) as f64 * 0.1)).collect();
        lines.push(format!("{token} {}", values.join(" ")));
    }
    fs::write(&embeddings, lines.join("\n")).unwrap();

    let corpus = dir.path().join("corpus.csv");
    fs::write(
        &corpus,
        "medium_id,url,factuality,bias7\n\
         planted00.example,http://planted00.example/,Low,Extreme-Left\n",
    )
    .unwrap();
    let ws = workspace_with(&corpus, &planted().join("bundles"));
    let config = fs::read_to_string(&ws.config).unwrap();
    let config = config.replace(
        &format!("embeddings = {:?}", core_resources().join("embeddings/mini25.txt")),
        &format!("embeddings = {embeddings:?}"),
    );
    fs::write(&ws.config, config).unwrap();

    let output = run(&ws, &["extract"]);
    assert!(output.status.success(), "{}", stderr_of(&output));
    assert!(
        stderr_of(&output).contains("total feature dims: 1927"),
        "{}",
        stderr_of(&output)
    );
}

#[test]
fn per_family_mode_writes_one_row_per_selector() {
    let ws = workspace();
    let config = fs::read_to_string(&ws.config).unwrap();
    fs::write(
        &ws.config,
        format!("per_family = true\nfamilies = [\"traffic\", \"wikipedia:summary\"]\n{config}"),
    )
    .unwrap();
    assert!(run(&ws, &["extract"]).status.success());
    let output = run(&ws, &["evaluate"]);
    assert!(output.status.success(), "{}", stderr_of(&output));
    let text = fs::read_to_string(ws.out.join("families_factuality.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = parsed["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "traffic");
    assert_eq!(rows[0][1]["dims"], 1);
    assert_eq!(rows[1][0], "wikipedia:summary");
    assert_eq!(rows[1][1]["dims"], 25);
    let md = fs::read_to_string(ws.out.join("families_factuality.md")).unwrap();
    assert!(md.contains("| traffic |"));
    assert!(md.contains("| wikipedia:summary |"));
}

#[test]
fn ngram_flag_extends_url_family() {
    let ws = workspace();
    let output = run(&ws, &["--enable-url-ngrams", "extract"]);
    assert!(output.status.success());
    let log = stderr_of(&output);
    // 12 structure features plus the frozen n-gram vocabulary.
    let dims: usize = log
        .lines()
        .find(|l| l.contains("family url:"))
        .and_then(|l| l.split("family url:").nth(1))
        .and_then(|l| l.trim().split(' ').next())
        .and_then(|n| n.parse().ok())
        .unwrap();
    assert!(dims > 12, "url family should gain n-gram dims, got {dims}");

    // A cache built with n-grams is stale for a run without them.
    let output = run(&ws, &["evaluate"]);
    assert_eq!(output.status.code(), Some(2), "{}", stderr_of(&output));
}
