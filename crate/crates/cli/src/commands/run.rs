use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use normbench_core::harness::{
    run_model, CountingTransport, ExchangeCache, LiveTransport, ModelConfig, PromptTemplate,
    ReplayTransport, Transport, DEFAULT_TEMPLATE_TEXT,
};
use normbench_core::norms::default_norms;
use normbench_core::records::write_jsonl;
use normbench_core::story::read_corpus;

use crate::commands::ensure_parent_dir;
use crate::manifest::{manifest_path_for, ManifestBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TransportKind {
    Live,
    Replay,
}

#[derive(Args)]
pub struct RunArgs {
    /// Corpus file to evaluate
    #[arg(long)]
    pub corpus: PathBuf,
    /// Built-in model preset: chatgpt-4, llama-2, or mixtral
    #[arg(long, default_value = "chatgpt-4")]
    pub model: String,
    /// JSON file with a full model configuration, overriding the preset
    #[arg(long)]
    pub model_config: Option<PathBuf>,
    /// Prompt template file (defaults to the built-in template)
    #[arg(long)]
    pub template: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TransportKind::Live)]
    pub transport: TransportKind,
    /// Directory of canned {story_id}.txt responses (replay transport)
    #[arg(long)]
    pub responses: Option<PathBuf>,
    /// Exchange cache directory
    #[arg(long, default_value = "normbench-cache")]
    pub cache: PathBuf,
    /// Maximum in-flight stories
    #[arg(long, default_value_t = 4)]
    pub concurrency: usize,
    /// Output path for line-delimited verdict records
    #[arg(long, default_value = "verdicts.jsonl")]
    pub out: PathBuf,
}

pub fn load_model_config(args: &RunArgs) -> anyhow::Result<ModelConfig> {
    let config = match &args.model_config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing model config {}", path.display()))?
        }
        None => match ModelConfig::preset(&args.model) {
            Some(config) => config,
            None => bail!(
                "unknown model preset `{}`; built-ins are {}",
                args.model,
                ModelConfig::preset_names().join(", ")
            ),
        },
    };
    config.validate()?;
    Ok(config)
}

pub fn run(args: &RunArgs) -> anyhow::Result<()> {
    let config = load_model_config(args)?;
    let template = match &args.template {
        Some(path) => PromptTemplate::load(path, config.dialect.clone())?,
        None => PromptTemplate::new(DEFAULT_TEMPLATE_TEXT, config.dialect.clone())?,
    };
    let corpus = read_corpus(&args.corpus)?;
    let norms = default_norms();

    let transport: Box<dyn Transport> = match args.transport {
        TransportKind::Live => Box::new(LiveTransport::new()),
        TransportKind::Replay => {
            let Some(dir) = &args.responses else {
                bail!("--transport replay requires --responses <dir>");
            };
            Box::new(ReplayTransport::new(dir))
        }
    };
    let counting = CountingTransport::new(transport.as_ref());
    let cache = ExchangeCache::open(&args.cache)?;

    let mut manifest = ManifestBuilder::new(
        "run",
        serde_json::json!({
            "model_config": serde_json::to_value(&config)?,
            "template_digest": template.digest(),
            "transport": match args.transport {
                TransportKind::Live => "live",
                TransportKind::Replay => "replay",
            },
            "concurrency": args.concurrency,
            "cache": args.cache.display().to_string(),
        }),
    );
    manifest.input_file(&args.corpus)?;
    if let Some(path) = &args.template {
        manifest.input_file(path)?;
    } else {
        manifest.input_embedded("<built-in template>", DEFAULT_TEMPLATE_TEXT);
    }

    let outcome = run_model(
        &corpus,
        &config,
        &template,
        &norms,
        &cache,
        &counting,
        args.concurrency,
    )?;
    ensure_parent_dir(&args.out)?;
    write_jsonl(&args.out, &outcome.records)?;
    manifest.output_file(&args.out)?;
    manifest.transport_calls(counting.calls());
    manifest.write(&manifest_path_for(&args.out))?;

    println!(
        "ran {} stories -> {} records ({} transport calls) -> {}",
        corpus.len(),
        outcome.records.len(),
        counting.calls(),
        args.out.display()
    );
    if !outcome.failed_stories.is_empty() {
        println!("{} stories degraded or failed:", outcome.failed_stories.len());
        for (story_id, reason) in &outcome.failed_stories {
            println!("  {story_id}: {reason}");
        }
    }
    Ok(())
}
