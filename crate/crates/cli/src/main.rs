//! Command-line pipeline: extract features, train, evaluate, ablate, and
//! render reports.

mod config;
mod extract;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::PipelineConfig;

/// Exit codes: 0 success, 1 usage, 2 data error, 3 internal.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "mediaprof",
    version,
    about = "Predict the factuality of reporting and political bias of news media"
)]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Comma-separated feature family selectors (family or family:part).
    #[arg(long, global = true, value_delimiter = ',')]
    families: Option<Vec<String>>,
    /// Task: factuality, bias7, bias3, bias, or all.
    #[arg(long, global = true)]
    task: Option<String>,
    /// Adds URL character n-grams to the url family (off by default).
    #[arg(long, global = true)]
    enable_url_ngrams: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Featurize every medium into the cache.
    Extract,
    /// Grid-search and train final models on all cached rows.
    Train,
    /// Cross-validated evaluation (full system or per family).
    Evaluate,
    /// Leave-one-family-out ablation tables.
    Ablate,
    /// Consolidate report JSONs into one markdown document.
    Report,
}

fn load_config(cli: &Cli) -> Result<PipelineConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    cfg.apply_overrides(
        cli.seed,
        cli.families.clone(),
        cli.task.clone(),
        cli.enable_url_ngrams,
    );
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = load_config(&cli)?;
    match cli.command {
        Command::Extract => extract::cmd_extract(&cfg).map(|_| ()),
        Command::Train => pipeline::cmd_train(&cfg),
        Command::Evaluate => pipeline::cmd_evaluate(&cfg),
        Command::Ablate => pipeline::cmd_ablate(&cfg),
        Command::Report => pipeline::cmd_report(&cfg.output_dir),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if benign { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}
