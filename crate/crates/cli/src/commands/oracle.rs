use std::path::PathBuf;

use clap::Args;
use normbench_core::norms::{evaluate_all, norm_set, JudgementRecord};
use normbench_core::records::write_jsonl;
use normbench_core::story::read_corpus;

use crate::commands::{ensure_parent_dir, load_floor_plan, load_vocabulary};
use crate::manifest::{manifest_path_for, ManifestBuilder};

#[derive(Args)]
pub struct OracleArgs {
    /// Corpus file to judge
    #[arg(long)]
    pub corpus: PathBuf,
    /// Output path for line-delimited judgement records
    #[arg(long, default_value = "judgements.jsonl")]
    pub out: PathBuf,
    #[arg(long)]
    pub vocab: Option<PathBuf>,
    #[arg(long)]
    pub floor_plan: Option<PathBuf>,
    /// Judge under the assumption that stories may contain phone pickups
    #[arg(long)]
    pub extension_events: bool,
}

pub fn run(args: &OracleArgs) -> anyhow::Result<()> {
    let vocab = load_vocabulary(&args.vocab)?;
    let plan = load_floor_plan(&args.floor_plan, &vocab)?;
    let corpus = read_corpus(&args.corpus)?;
    let norms = norm_set(args.extension_events);

    let mut manifest = ManifestBuilder::new(
        "oracle",
        serde_json::json!({
            "corpus": args.corpus.display().to_string(),
            "extension_events": args.extension_events,
        }),
    );
    manifest.input_file(&args.corpus)?;

    let mut records = Vec::with_capacity(corpus.len() * norms.len());
    for story in &corpus {
        let judgements = evaluate_all(story, &vocab, &plan, &norms)?;
        for judgement in &judgements {
            records.push(JudgementRecord::from_judgement(&story.id, judgement));
        }
    }
    ensure_parent_dir(&args.out)?;
    write_jsonl(&args.out, &records)?;
    manifest.output_file(&args.out)?;
    manifest.write(&manifest_path_for(&args.out))?;

    println!(
        "judged {} stories x {} norms -> {}",
        corpus.len(),
        norms.len(),
        args.out.display()
    );
    Ok(())
}
