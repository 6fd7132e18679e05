//! Subcommand implementations.

mod generate;
mod oracle;
mod pipeline;
mod run;
mod score;
mod stats;

use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Subcommand;
use normbench_core::world::{FloorPlan, Vocabulary};

pub use generate::GenerateArgs;
pub use oracle::OracleArgs;
pub use pipeline::PipelineArgs;
pub use run::RunArgs;
pub use score::ScoreArgs;
pub use stats::StatsArgs;

#[derive(Subcommand)]
pub enum Command {
    /// Generate a story corpus from a master seed
    Generate(GenerateArgs),
    /// Judge a corpus with the symbolic norm oracle
    Oracle(OracleArgs),
    /// Query a model over a corpus and parse its verdicts
    Run(RunArgs),
    /// Score model verdicts against ground truth
    Score(ScoreArgs),
    /// Corpus event statistics
    Stats(StatsArgs),
    /// Full offline pipeline: generate, oracle, run, score, stats
    Pipeline(PipelineArgs),
}

pub fn dispatch(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Generate(args) => generate::run(&args),
        Command::Oracle(args) => oracle::run(&args),
        Command::Run(args) => run::run(&args),
        Command::Score(args) => score::run(&args),
        Command::Stats(args) => stats::run(&args),
        Command::Pipeline(args) => pipeline::run(&args),
    }
}

/// Loads the vocabulary from `path`, or the built-in default.
pub fn load_vocabulary(path: &Option<PathBuf>) -> anyhow::Result<Vocabulary> {
    match path {
        Some(path) => Vocabulary::load(path)
            .with_context(|| format!("loading vocabulary {}", path.display())),
        None => Ok(Vocabulary::default_vocabulary().clone()),
    }
}

pub fn load_floor_plan(path: &Option<PathBuf>, vocab: &Vocabulary) -> anyhow::Result<FloorPlan> {
    let plan = match path {
        Some(path) => FloorPlan::load(path)
            .with_context(|| format!("loading floor plan {}", path.display()))?,
        None => FloorPlan::default_floor_plan().clone(),
    };
    plan.validate(vocab)?;
    Ok(plan)
}

pub fn ensure_parent_dir(path: &Path) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    Ok(())
}
