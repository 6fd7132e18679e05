//! Report emission: accuracy tables, category/kind breakdowns, confusion
//! matrix. Deterministic bytes for a fixed report.

use std::path::{Path, PathBuf};

use crate::error::CoreError;
use crate::eval::{confusion_rates, ScoreReport};
use crate::norms::{NormCategory, NormKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(CoreError::InvalidConfig(format!(
                "unknown report format `{other}` (expected markdown or csv)"
            ))),
        }
    }
}

/// Half-up percentage formatting: 2 decimals in per-norm cells, 1 in
/// averages, matching the printed précision of the result tables.
pub fn format_pct(value: f64, decimals: u32) -> String {
    let factor = 10f64.powi(decimals as i32);
    let rounded = (value * factor + 0.5).floor() / factor;
    format!("{rounded:.prec$}", prec = decimals as usize)
}

fn rate_cell(rate: Option<f64>) -> String {
    match rate {
        Some(value) => format_pct(value, 1),
        None => "undefined".to_string(),
    }
}

fn accuracy_markdown(report: &ScoreReport) -> String {
    let mut header = String::from("| Model |");
    let mut rule = String::from("|---|");
    let mut row = format!("| {} |", report.model_name);
    for norm_id in 1..=10u8 {
        header.push_str(&format!(" N{norm_id} |"));
        rule.push_str("---|");
        row.push_str(&format!(" {} |", format_pct(report.per_norm_accuracy[&norm_id], 2)));
    }
    header.push_str(" Average |");
    rule.push_str("---|");
    row.push_str(&format!(" {} |", format_pct(report.overall_average, 1)));
    format!("{header}\n{rule}\n{row}\n")
}

fn category_markdown(report: &ScoreReport) -> String {
    format!(
        "| Norm category | {} |\n|---|---|\n| Role-based norm | {} |\n| Generic norm | {} |\n",
        report.model_name,
        format_pct(report.category_accuracy[&NormCategory::RoleBased], 2),
        format_pct(report.category_accuracy[&NormCategory::Generic], 2),
    )
}

fn kind_markdown(report: &ScoreReport) -> String {
    format!(
        "| Norm type | {} |\n|---|---|\n| Prohibition Norm (PN) | {} |\n| Obligation Norm (ON) | {} |\n",
        report.model_name,
        format_pct(report.kind_accuracy[&NormKind::Prohibition], 2),
        format_pct(report.kind_accuracy[&NormKind::Obligation], 2),
    )
}

fn confusion_csv(report: &ScoreReport) -> String {
    let c = &report.confusion;
    let rates = confusion_rates(report);
    let truth_yes = c.truth_yes_model_yes + c.truth_yes_model_no;
    let truth_no = c.truth_no_model_yes + c.truth_no_model_no;
    let row_pct = |count: u64, total: u64| {
        if total == 0 {
            "undefined".to_string()
        } else {
            format_pct(100.0 * count as f64 / total as f64, 1)
        }
    };
    let mut out = String::from("truth\\model,yes,no,yes_pct,no_pct\n");
    out.push_str(&format!(
        "yes,{},{},{},{}\n",
        c.truth_yes_model_yes,
        c.truth_yes_model_no,
        row_pct(c.truth_yes_model_yes, truth_yes),
        row_pct(c.truth_yes_model_no, truth_yes),
    ));
    out.push_str(&format!(
        "no,{},{},{},{}\n",
        c.truth_no_model_yes,
        c.truth_no_model_no,
        row_pct(c.truth_no_model_yes, truth_no),
        row_pct(c.truth_no_model_no, truth_no),
    ));
    out.push_str(&format!("miss_rate,{}\n", rate_cell(rates.miss_rate)));
    out.push_str(&format!(
        "false_alarm_rate,{}\n",
        rate_cell(rates.false_alarm_rate)
    ));
    out
}

fn write(path: &Path, contents: &str) -> Result<(), CoreError> {
    std::fs::write(path, contents).map_err(|e| CoreError::io(path.display().to_string(), e))
}

/// Writes the report files into `out_dir` and returns their paths.
pub fn emit_report(
    report: &ScoreReport,
    format: ReportFormat,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, CoreError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CoreError::io(out_dir.display().to_string(), e))?;
    let rates = confusion_rates(report);
    match format {
        ReportFormat::Markdown => {
            let mut text = String::new();
            text.push_str(&format!(
                "# Scoring report: {} ({} stories)\n\n",
                report.model_name, report.n_stories
            ));
            text.push_str("## Accuracy per norm\n\n");
            text.push_str(&accuracy_markdown(report));
            text.push_str("\n## Accuracy by norm category\n\n");
            text.push_str(&category_markdown(report));
            text.push_str("\n## Accuracy by norm type\n\n");
            text.push_str(&kind_markdown(report));
            text.push_str("\n## Confusion matrix (ground truth × model)\n\n");
            let c = &report.confusion;
            text.push_str("| truth \\ model | yes | no |\n|---|---|---|\n");
            text.push_str(&format!(
                "| yes | {} | {} |\n| no | {} | {} |\n",
                c.truth_yes_model_yes, c.truth_yes_model_no, c.truth_no_model_yes, c.truth_no_model_no
            ));
            text.push_str(&format!(
                "\nMiss rate: {}. False-alarm rate: {}.\n",
                rate_cell(rates.miss_rate),
                rate_cell(rates.false_alarm_rate)
            ));
            let path = out_dir.join("report.md");
            write(&path, &text)?;
            Ok(vec![path])
        }
        ReportFormat::Csv => {
            let mut paths = Vec::new();

            let mut accuracy = String::from("model");
            for norm_id in 1..=10u8 {
                accuracy.push_str(&format!(",N{norm_id}"));
            }
            accuracy.push_str(",average\n");
            accuracy.push_str(&report.model_name);
            for norm_id in 1..=10u8 {
                accuracy.push_str(&format!(
                    ",{}",
                    format_pct(report.per_norm_accuracy[&norm_id], 2)
                ));
            }
            accuracy.push_str(&format!(",{}\n", format_pct(report.overall_average, 1)));
            let path = out_dir.join("accuracy.csv");
            write(&path, &accuracy)?;
            paths.push(path);

            let category = format!(
                "norm_category,{}\nRole-based norm,{}\nGeneric norm,{}\n",
                report.model_name,
                format_pct(report.category_accuracy[&NormCategory::RoleBased], 2),
                format_pct(report.category_accuracy[&NormCategory::Generic], 2),
            );
            let path = out_dir.join("category.csv");
            write(&path, &category)?;
            paths.push(path);

            let kind = format!(
                "norm_type,{}\nProhibition Norm (PN),{}\nObligation Norm (ON),{}\n",
                report.model_name,
                format_pct(report.kind_accuracy[&NormKind::Prohibition], 2),
                format_pct(report.kind_accuracy[&NormKind::Obligation], 2),
            );
            let path = out_dir.join("kind.csv");
            write(&path, &kind)?;
            paths.push(path);

            let path = out_dir.join("confusion.csv");
            write(&path, &confusion_csv(report))?;
            paths.push(path);

            Ok(paths)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{score, ScoredLabel};
    use crate::norms::Binary;
    use std::collections::BTreeMap;

    fn perfect_report() -> ScoreReport {
        let mut truth = BTreeMap::new();
        let mut records = Vec::new();
        for s in 0..4 {
            for n in 1..=10u8 {
                truth.insert((format!("s{s}"), n), Binary::No);
                records.push(ScoredLabel {
                    story_id: format!("s{s}"),
                    norm_id: n,
                    binary: Binary::No,
                });
            }
        }
        score(&truth, &records, "test-model").unwrap()
    }

    #[test]
    fn half_up_rounding() {
        assert_eq!(format_pct(58.125, 1), "58.1");
        assert_eq!(format_pct(58.15, 1), "58.2");
        assert_eq!(format_pct(43.75, 2), "43.75");
        assert_eq!(format_pct(92.5, 2), "92.50");
        assert_eq!(format_pct(100.0, 2), "100.00");
        assert_eq!(format_pct(0.005, 2), "0.01");
    }

    #[test]
    fn markdown_report_has_table_shapes() {
        let dir = tempfile::tempdir().unwrap();
        let paths = emit_report(&perfect_report(), ReportFormat::Markdown, dir.path()).unwrap();
        let text = std::fs::read_to_string(&paths[0]).unwrap();
        assert!(text.contains("| Model | N1 | N2 | N3 | N4 | N5 | N6 | N7 | N8 | N9 | N10 | Average |"));
        assert!(text.contains("Role-based norm"));
        assert!(text.contains("Generic norm"));
        assert!(text.contains("Prohibition Norm (PN)"));
        assert!(text.contains("100.00"));
    }

    #[test]
    fn emission_is_deterministic() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let report = perfect_report();
        let a = emit_report(&report, ReportFormat::Markdown, dir_a.path()).unwrap();
        let b = emit_report(&report, ReportFormat::Markdown, dir_b.path()).unwrap();
        assert_eq!(
            std::fs::read(&a[0]).unwrap(),
            std::fs::read(&b[0]).unwrap()
        );
    }

    #[test]
    fn csv_report_writes_four_files() {
        let dir = tempfile::tempdir().unwrap();
        let paths = emit_report(&perfect_report(), ReportFormat::Csv, dir.path()).unwrap();
        assert_eq!(paths.len(), 4);
        let confusion = std::fs::read_to_string(dir.path().join("confusion.csv")).unwrap();
        assert!(confusion.contains("miss_rate,undefined"));
        assert!(confusion.contains("false_alarm_rate,0.0"));
    }
}
