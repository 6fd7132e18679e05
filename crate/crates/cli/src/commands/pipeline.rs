use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use normbench_core::story::{DEFAULT_NOISE_RATE, REFERENCE_SEED};

use crate::commands::{generate, oracle, run, score, stats};
use crate::manifest::ManifestBuilder;

#[derive(Args)]
pub struct PipelineArgs {
    #[arg(long, default_value_t = REFERENCE_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub stories_per_task_count: usize,
    #[arg(long, default_value_t = DEFAULT_NOISE_RATE)]
    pub noise_rate: f64,
    /// Use the live transport instead of replaying canned responses
    #[arg(long)]
    pub live: bool,
    /// Canned responses for the replay transport
    #[arg(long, default_value = "fixtures/responses")]
    pub responses: PathBuf,
    #[arg(long, default_value = "chatgpt-4")]
    pub model: String,
    #[arg(long)]
    pub template: Option<PathBuf>,
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    #[arg(long)]
    pub floor_plan: Option<PathBuf>,
    #[arg(long, default_value = "pipeline-out")]
    pub out_dir: PathBuf,
    /// Exchange cache directory (defaults to <out-dir>/cache)
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub concurrency: usize,
    #[arg(long, default_value = "markdown")]
    pub format: String,
}

/// Chains all stages through files in the output directory, using the
/// oracle as ground truth.
pub fn run(args: &PipelineArgs) -> anyhow::Result<()> {
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let corpus_path = args.out_dir.join("corpus.jsonl");
    let judgements_path = args.out_dir.join("judgements.jsonl");
    let verdicts_path = args.out_dir.join("verdicts.jsonl");
    let report_dir = args.out_dir.join("report");
    let stats_dir = args.out_dir.join("stats");
    let cache_dir = args
        .cache
        .clone()
        .unwrap_or_else(|| args.out_dir.join("cache"));

    let mut manifest = ManifestBuilder::new(
        "pipeline",
        serde_json::json!({
            "seed": args.seed,
            "stories_per_task_count": args.stories_per_task_count,
            "noise_rate": args.noise_rate,
            "transport": if args.live { "live" } else { "replay" },
            "model": args.model,
            "out_dir": args.out_dir.display().to_string(),
        }),
    );

    generate::run(&generate::GenerateArgs {
        seed: args.seed,
        stories_per_task_count: args.stories_per_task_count,
        noise_rate: args.noise_rate,
        extension_events: false,
        vocab: args.vocab.clone(),
        floor_plan: args.floor_plan.clone(),
        out: corpus_path.clone(),
    })?;

    oracle::run(&oracle::OracleArgs {
        corpus: corpus_path.clone(),
        out: judgements_path.clone(),
        vocab: args.vocab.clone(),
        floor_plan: args.floor_plan.clone(),
        extension_events: false,
    })?;

    run::run(&run::RunArgs {
        corpus: corpus_path.clone(),
        model: args.model.clone(),
        model_config: None,
        template: args.template.clone(),
        transport: if args.live {
            run::TransportKind::Live
        } else {
            run::TransportKind::Replay
        },
        responses: Some(args.responses.clone()),
        cache: cache_dir,
        concurrency: args.concurrency,
        out: verdicts_path.clone(),
    })?;

    score::run(&score::ScoreArgs {
        ground_truth: judgements_path.clone(),
        model_records: verdicts_path.clone(),
        out_dir: report_dir.clone(),
        format: args.format.clone(),
    })?;

    stats::run(&stats::StatsArgs {
        corpus: corpus_path.clone(),
        out_dir: stats_dir.clone(),
    })?;

    for output in [&corpus_path, &judgements_path, &verdicts_path] {
        manifest.output_file(output)?;
    }
    manifest.write(&args.out_dir.join("pipeline.manifest.json"))?;
    println!("pipeline complete -> {}", args.out_dir.display());
    Ok(())
}
