//! Batch pipeline over post archives: entity tagging, readability,
//! topics, label scoring, and spatio-temporal aggregation, driven by one
//! config file with deterministic, seed-reproducible outputs.

mod commands;
mod config;
mod outfmt;
mod pipeline;

use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Parser, Subcommand};

use config::PipelineConfig;

/// Pipeline error with its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or usage (exit 2).
    Config(String),
    /// Failure while running (exit 1).
    Runtime(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        CliError::Runtime(msg.into())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "chattermine", version, about = "Corpus analytics batch pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Pipeline config file.
    #[arg(long, global = true, default_value = "chattermine.toml")]
    config: PathBuf,

    /// Override the config's root seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the config's output directory.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Comma-separated region filter for aggregation and summaries.
    #[arg(long, global = true, value_delimiter = ',')]
    regions: Vec<String>,

    /// Keep only posts on or after this date (YYYY-MM-DD).
    #[arg(long, global = true)]
    from_date: Option<NaiveDate>,

    /// Keep only posts on or before this date (YYYY-MM-DD).
    #[arg(long, global = true)]
    to_date: Option<NaiveDate>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tag entity spans and emit symptom frequency tables.
    Tag,
    /// Score per-post readability and the monthly summary.
    Readability,
    /// Sweep topic counts, fit the best model, emit term tables.
    Topics,
    /// Score posts (train the baseline or import scores) and evaluate.
    Classify,
    /// Build per-region trajectories, event windows, and change points.
    Aggregate,
    /// Run every stage into one output tree.
    RunAll,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let mut config = PipelineConfig::load(&cli.config)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(dir) = &cli.out_dir {
        config.output.dir = dir.clone();
    }
    let ctx = pipeline::Context::prepare(
        config,
        &cli.regions,
        cli.from_date,
        cli.to_date,
    )?;
    match cli.command {
        Command::Tag => commands::tag::run(&ctx),
        Command::Readability => commands::readability::run(&ctx),
        Command::Topics => commands::topics::run(&ctx),
        Command::Classify => commands::classify::run(&ctx),
        Command::Aggregate => commands::aggregate::run(&ctx),
        Command::RunAll => {
            commands::tag::run(&ctx)?;
            commands::readability::run(&ctx)?;
            commands::topics::run(&ctx)?;
            commands::classify::run(&ctx)?;
            commands::aggregate::run(&ctx)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(e @ CliError::Runtime(_)) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}
