use std::path::PathBuf;

use clap::Args;
use normbench_core::story::{
    generate_corpus, write_corpus, GenConfig, DEFAULT_NOISE_RATE, REFERENCE_SEED,
};
use normbench_core::world::{DEFAULT_FLOOR_PLAN_TOML, DEFAULT_VOCABULARY_TOML};

use crate::commands::{ensure_parent_dir, load_floor_plan, load_vocabulary};
use crate::manifest::{manifest_path_for, ManifestBuilder};

#[derive(Args)]
pub struct GenerateArgs {
    /// Master seed; the corpus is a pure function of it
    #[arg(long, default_value_t = REFERENCE_SEED)]
    pub seed: u64,
    /// Stories per task count (four task counts, so 4x this many stories)
    #[arg(long, default_value_t = 20)]
    pub stories_per_task_count: usize,
    /// Per-slot probability of inserting a noise event
    #[arg(long, default_value_t = DEFAULT_NOISE_RATE)]
    pub noise_rate: f64,
    /// Allow knock and phone-pickup events in generated stories
    #[arg(long)]
    pub extension_events: bool,
    /// Vocabulary config file (defaults to the built-in household)
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    /// Floor plan config file (defaults to the built-in plan)
    #[arg(long)]
    pub floor_plan: Option<PathBuf>,
    /// Output path for the line-delimited corpus
    #[arg(long, default_value = "corpus.jsonl")]
    pub out: PathBuf,
}

pub fn run(args: &GenerateArgs) -> anyhow::Result<()> {
    let vocab = load_vocabulary(&args.vocab)?;
    let plan = load_floor_plan(&args.floor_plan, &vocab)?;
    let config = GenConfig {
        seed: args.seed,
        stories_per_task_count: args.stories_per_task_count,
        noise_rate: args.noise_rate,
        enable_extension_events: args.extension_events,
        ..GenConfig::default()
    };

    let mut manifest = ManifestBuilder::new("generate", serde_json::to_value(&config)?);
    match &args.vocab {
        Some(path) => {
            manifest.input_file(path)?;
        }
        None => {
            manifest.input_embedded("<built-in vocabulary>", DEFAULT_VOCABULARY_TOML);
        }
    }
    match &args.floor_plan {
        Some(path) => {
            manifest.input_file(path)?;
        }
        None => {
            manifest.input_embedded("<built-in floor plan>", DEFAULT_FLOOR_PLAN_TOML);
        }
    }

    let corpus = generate_corpus(&config, &vocab, &plan)?;
    ensure_parent_dir(&args.out)?;
    write_corpus(&args.out, &corpus)?;
    manifest.output_file(&args.out)?;
    manifest.write(&manifest_path_for(&args.out))?;

    let total_events: usize = corpus.iter().map(|s| s.events.len()).sum();
    println!(
        "generated {} stories ({total_events} events) -> {}",
        corpus.len(),
        args.out.display()
    );
    Ok(())
}
