use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::bail;
use clap::Args;
use normbench_core::eval::{
    confusion_rates, emit_report, majority_vote, score, AnnotationSet, ReportFormat, ScoredLabel,
};
use normbench_core::norms::Binary;
use normbench_core::records::read_jsonl;
use serde::Deserialize;

use crate::manifest::ManifestBuilder;

#[derive(Args)]
pub struct ScoreArgs {
    /// Ground truth: oracle judgements or imported annotations (multiple
    /// lines per (story, norm) are treated as annotator votes)
    #[arg(long)]
    pub ground_truth: PathBuf,
    /// Model verdict records
    #[arg(long)]
    pub model_records: PathBuf,
    #[arg(long, default_value = "report")]
    pub out_dir: PathBuf,
    /// markdown or csv
    #[arg(long, default_value = "markdown")]
    pub format: String,
}

/// Verdict-record view with the optional model name.
#[derive(Deserialize)]
struct ModelRecordView {
    story_id: String,
    norm_id: u8,
    binary: Binary,
    #[serde(default)]
    model: Option<String>,
}

pub fn run(args: &ScoreArgs) -> anyhow::Result<()> {
    let format: ReportFormat = args.format.parse()?;

    let truth_records: Vec<ScoredLabel> = read_jsonl(&args.ground_truth)?;
    let mut annotations = AnnotationSet::default();
    for record in &truth_records {
        annotations.insert(record.story_id.clone(), record.norm_id, record.binary);
    }
    let truth = majority_vote(&annotations)?;

    let model_views: Vec<ModelRecordView> = read_jsonl(&args.model_records)?;
    let model_names: BTreeSet<String> = model_views
        .iter()
        .filter_map(|r| r.model.clone())
        .collect();
    let model_name = match model_names.len() {
        0 => "model".to_string(),
        1 => model_names.into_iter().next().unwrap(),
        _ => bail!(
            "model records mix several models: {}",
            model_names.into_iter().collect::<Vec<_>>().join(", ")
        ),
    };
    let model_records: Vec<ScoredLabel> = model_views
        .into_iter()
        .map(|r| ScoredLabel {
            story_id: r.story_id,
            norm_id: r.norm_id,
            binary: r.binary,
        })
        .collect();

    let mut manifest = ManifestBuilder::new(
        "score",
        serde_json::json!({
            "ground_truth": args.ground_truth.display().to_string(),
            "model_records": args.model_records.display().to_string(),
            "format": args.format,
            "model": model_name,
        }),
    );
    manifest.input_file(&args.ground_truth)?;
    manifest.input_file(&args.model_records)?;

    let report = score(&truth, &model_records, &model_name)?;
    let paths = emit_report(&report, format, &args.out_dir)?;
    for path in &paths {
        manifest.output_file(path)?;
    }
    manifest.write(&args.out_dir.join("report.manifest.json"))?;

    let rates = confusion_rates(&report);
    println!(
        "scored {} stories x 10 norms for {}: overall {:.1}%",
        report.n_stories, report.model_name, report.overall_average
    );
    println!(
        "miss rate: {}, false-alarm rate: {}",
        rates
            .miss_rate
            .map(|r| format!("{r:.1}%"))
            .unwrap_or_else(|| "undefined".into()),
        rates
            .false_alarm_rate
            .map(|r| format!("{r:.1}%"))
            .unwrap_or_else(|| "undefined".into()),
    );
    for path in &paths {
        println!("wrote {}", path.display());
    }
    Ok(())
}
