use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use normbench_core::eval::corpus_stats;
use normbench_core::records::SCHEMA_VERSION;
use normbench_core::story::read_corpus;

use crate::manifest::ManifestBuilder;

#[derive(Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, default_value = "stats")]
    pub out_dir: PathBuf,
}

pub fn run(args: &StatsArgs) -> anyhow::Result<()> {
    let corpus = read_corpus(&args.corpus)?;
    if corpus.is_empty() {
        bail!("corpus {} is empty", args.corpus.display());
    }
    let stats = corpus_stats(&corpus);

    let mut manifest = ManifestBuilder::new(
        "stats",
        serde_json::json!({ "corpus": args.corpus.display().to_string() }),
    );
    manifest.input_file(&args.corpus)?;

    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;

    let stats_path = args.out_dir.join("stats.json");
    let summary = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "stories": corpus.len(),
        "total_events": stats.total_events,
        "unique_events": stats.unique_events,
        "duplicated_events": stats.duplicated_events,
    });
    std::fs::write(&stats_path, serde_json::to_string_pretty(&summary)?)
        .with_context(|| format!("writing {}", stats_path.display()))?;

    // Frequency table, most frequent first, ties broken by text.
    let mut rows: Vec<(&String, &usize)> = stats.frequency.iter().collect();
    rows.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
    let mut csv = String::from("event_text,count\n");
    for (text, count) in rows {
        csv.push_str(&format!("\"{}\",{count}\n", text.replace('"', "\"\"")));
    }
    let freq_path = args.out_dir.join("event_frequency.csv");
    std::fs::write(&freq_path, csv)
        .with_context(|| format!("writing {}", freq_path.display()))?;

    manifest.output_file(&stats_path)?;
    manifest.output_file(&freq_path)?;
    manifest.write(&args.out_dir.join("stats.manifest.json"))?;

    println!(
        "{} stories, {} events total, {} unique, {} duplicated -> {}",
        corpus.len(),
        stats.total_events,
        stats.unique_events,
        stats.duplicated_events,
        args.out_dir.display()
    );
    Ok(())
}
