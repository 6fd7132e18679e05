//! Robust parsing of model responses into per-norm verdicts.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use regex::Regex;

use crate::error::CoreError;
use crate::norms::Verdict;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormAnswer {
    pub verdict: Verdict,
    pub reasoning: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    /// Norm the warning is about, or None for response-level warnings.
    pub norm_id: Option<u8>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedVerdicts {
    /// Always complete on success: one entry per norm id 1–10.
    pub verdicts: BTreeMap<u8, NormAnswer>,
    pub parse_warnings: Vec<ParseWarning>,
}

fn header_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?mi)^[\s>*#\-]*(?:\d+[.)])?[\s>*#\-]*(?:\*\*)?\s*norm\s*#?\s*(\d{1,2})\b")
            .expect("header regex compiles")
    })
}

fn violation_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)violation\s*[:\-]\s*(.+)").expect("violation regex compiles"))
}

fn reasoning_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?is)reasoning\s*[:\-]\s*(.+)").expect("reasoning regex compiles"))
}

/// Strips markdown decoration and leading punctuation from an answer string.
fn clean_answer(raw: &str) -> String {
    raw.trim()
        .trim_start_matches(|c: char| "*_`[>-".contains(c) || c.is_whitespace())
        .replace(['*', '_', '`'], "")
        .trim()
        .to_ascii_lowercase()
}

/// Maps an answer string to a verdict. `None` when unmappable.
fn map_answer(raw: &str) -> Option<Verdict> {
    let cleaned = clean_answer(raw);
    let word_boundary_after = |prefix: &str| {
        cleaned[prefix.len()..]
            .chars()
            .next()
            .map_or(true, |c| !c.is_alphanumeric())
    };
    if cleaned.starts_with("cannot be determined") || cleaned.starts_with("can not be determined") {
        Some(Verdict::CannotBeDetermined)
    } else if cleaned.starts_with("not applicable") || cleaned.starts_with("n/a") {
        Some(Verdict::NotApplicable)
    } else if cleaned.starts_with("yes") && word_boundary_after("yes") {
        Some(Verdict::Violated)
    } else if cleaned.starts_with("no") && word_boundary_after("no") {
        Some(Verdict::NotViolated)
    } else {
        None
    }
}

/// Scans for per-norm blocks and maps each block's answer. Tolerates
/// markdown bullets, bolding, and reordered norms. Missing or unmappable
/// norms degrade to `CannotBeDetermined` with a warning; only a response
/// with no recognizable norm block at all is an error.
pub fn parse_response(raw: &str) -> Result<ParsedVerdicts, CoreError> {
    let mut verdicts: BTreeMap<u8, NormAnswer> = BTreeMap::new();
    let mut warnings: Vec<ParseWarning> = Vec::new();

    let headers: Vec<(usize, usize, u8)> = header_regex()
        .captures_iter(raw)
        .filter_map(|cap| {
            let whole = cap.get(0)?;
            let id: u8 = cap.get(1)?.as_str().parse().ok()?;
            Some((whole.start(), whole.end(), id))
        })
        .collect();

    if headers.is_empty() {
        let preview: String = raw.chars().take(80).collect();
        return Err(CoreError::UnparseableResponse { preview });
    }

    for (position, &(_, block_start, id)) in headers.iter().enumerate() {
        let block_end = headers
            .get(position + 1)
            .map(|next| next.0)
            .unwrap_or(raw.len());
        let block = &raw[block_start..block_end];

        if !(1..=10).contains(&id) {
            warnings.push(ParseWarning {
                norm_id: None,
                message: format!("ignoring block for out-of-range norm {id}"),
            });
            continue;
        }
        if verdicts.contains_key(&id) {
            warnings.push(ParseWarning {
                norm_id: Some(id),
                message: format!("duplicate block for norm {id} ignored"),
            });
            continue;
        }

        let answer = violation_regex()
            .captures(block)
            .and_then(|cap| cap.get(1))
            .map(|m| m.as_str());
        let verdict = match answer {
            Some(text) => match map_answer(text) {
                Some(v) => v,
                None => {
                    warnings.push(ParseWarning {
                        norm_id: Some(id),
                        message: format!(
                            "norm {id}: unmappable answer {:?}",
                            text.trim().chars().take(40).collect::<String>()
                        ),
                    });
                    Verdict::CannotBeDetermined
                }
            },
            None => {
                warnings.push(ParseWarning {
                    norm_id: Some(id),
                    message: format!("norm {id}: no violation line found"),
                });
                Verdict::CannotBeDetermined
            }
        };
        let reasoning = reasoning_regex()
            .captures(block)
            .and_then(|cap| cap.get(1))
            .map(|m| m.as_str().trim().to_string())
            .unwrap_or_default();
        verdicts.insert(id, NormAnswer { verdict, reasoning });
    }

    for id in 1..=10u8 {
        if !verdicts.contains_key(&id) {
            warnings.push(ParseWarning {
                norm_id: Some(id),
                message: format!("norm {id}: no block found in response"),
            });
            verdicts.insert(
                id,
                NormAnswer {
                    verdict: Verdict::CannotBeDetermined,
                    reasoning: String::new(),
                },
            );
        }
    }

    Ok(ParsedVerdicts {
        verdicts,
        parse_warnings: warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A clean response in the requested format, all ten norms.
    pub(crate) fn well_formed(answer: &str) -> String {
        (1..=10)
            .map(|id| {
                format!("- Norm {id}\n- Violation: {answer}\n- Reasoning: nothing happened.\n")
            })
            .collect()
    }

    #[test]
    fn well_formed_response_parses_completely() {
        let parsed = parse_response(&well_formed("No")).unwrap();
        assert_eq!(parsed.verdicts.len(), 10);
        assert!(parsed.parse_warnings.is_empty());
        for answer in parsed.verdicts.values() {
            assert_eq!(answer.verdict, Verdict::NotViolated);
            assert_eq!(answer.reasoning, "nothing happened.");
        }
    }

    #[test]
    fn fig_style_block_parses() {
        let raw = "- Norm 3\n- Violation: Yes\n- Reasoning: two people on the staircase";
        let parsed = parse_response(raw).unwrap();
        assert_eq!(parsed.verdicts[&3].verdict, Verdict::Violated);
        assert_eq!(parsed.verdicts[&3].reasoning, "two people on the staircase");
        // The other nine degrade to cannot-be-determined with warnings.
        assert_eq!(parsed.verdicts[&1].verdict, Verdict::CannotBeDetermined);
        assert_eq!(parsed.parse_warnings.len(), 9);
    }

    #[test]
    fn not_applicable_answer_maps() {
        let raw = "- Norm 3\n- Violation: Not applicable\n- Reasoning: no staircase mentioned";
        let parsed = parse_response(raw).unwrap();
        assert_eq!(parsed.verdicts[&3].verdict, Verdict::NotApplicable);
        assert_eq!(
            crate::norms::normalize(parsed.verdicts[&3].verdict),
            crate::norms::Binary::No
        );
    }

    #[test]
    fn n_slash_a_answer_maps() {
        let raw = "Norm 7\nViolation: N/A";
        let parsed = parse_response(raw).unwrap();
        assert_eq!(parsed.verdicts[&7].verdict, Verdict::NotApplicable);
    }

    #[test]
    fn bolded_and_bulleted_variants_parse() {
        let raw = "**Norm 4**\n**Violation:** **Yes**\n**Reasoning:** sharp knife left out\n\n\
                   * Norm 5 \n * Violation: Cannot be determined\n * Reasoning: unclear";
        let parsed = parse_response(raw).unwrap();
        assert_eq!(parsed.verdicts[&4].verdict, Verdict::Violated);
        assert_eq!(parsed.verdicts[&5].verdict, Verdict::CannotBeDetermined);
    }

    #[test]
    fn heading_variants_parse() {
        let raw = "#### Norm 2:\nViolation: no\n\n1. Norm 9\nViolation: Yes";
        let parsed = parse_response(raw).unwrap();
        assert_eq!(parsed.verdicts[&2].verdict, Verdict::NotViolated);
        assert_eq!(parsed.verdicts[&9].verdict, Verdict::Violated);
    }

    #[test]
    fn reordered_norms_parse() {
        let raw: String = (1..=10)
            .rev()
            .map(|id| format!("- Norm {id}\n- Violation: Yes\n"))
            .collect();
        let parsed = parse_response(&raw).unwrap();
        assert!(parsed.parse_warnings.is_empty());
        for answer in parsed.verdicts.values() {
            assert_eq!(answer.verdict, Verdict::Violated);
        }
    }

    #[test]
    fn answer_with_trailing_explanation_maps() {
        let raw = "- Norm 1\n- Violation: No: The norm was not violated or its irrelevance was given.";
        let parsed = parse_response(raw).unwrap();
        assert_eq!(parsed.verdicts[&1].verdict, Verdict::NotViolated);
    }

    #[test]
    fn yes_with_period_maps_but_none_does_not() {
        let raw = "- Norm 1\n- Violation: Yes.\n- Norm 2\n- Violation: None of the above";
        let parsed = parse_response(raw).unwrap();
        assert_eq!(parsed.verdicts[&1].verdict, Verdict::Violated);
        assert_eq!(parsed.verdicts[&2].verdict, Verdict::CannotBeDetermined);
        assert!(parsed
            .parse_warnings
            .iter()
            .any(|w| w.norm_id == Some(2) && w.message.contains("unmappable")));
    }

    #[test]
    fn missing_norms_degrade_with_warnings() {
        let raw: String = (1..=8)
            .map(|id| format!("- Norm {id}\n- Violation: No\n"))
            .collect();
        let parsed = parse_response(&raw).unwrap();
        assert_eq!(parsed.verdicts[&9].verdict, Verdict::CannotBeDetermined);
        assert_eq!(parsed.verdicts[&10].verdict, Verdict::CannotBeDetermined);
        assert_eq!(parsed.parse_warnings.len(), 2);
    }

    #[test]
    fn truncated_final_block_degrades() {
        let mut raw: String = (1..=9)
            .map(|id| format!("- Norm {id}\n- Violation: No\n- Reasoning: fine\n"))
            .collect();
        raw.push_str("- Norm 10\n- Violati");
        let parsed = parse_response(&raw).unwrap();
        assert_eq!(parsed.verdicts[&10].verdict, Verdict::CannotBeDetermined);
        assert_eq!(parsed.parse_warnings.len(), 1);
    }

    #[test]
    fn garbage_fails_with_preview() {
        let err = parse_response("the quick brown fox jumps over the lazy dog").unwrap_err();
        match err {
            CoreError::UnparseableResponse { preview } => {
                assert!(preview.starts_with("the quick brown fox"));
                assert!(preview.len() <= 80);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn duplicate_blocks_keep_first() {
        let raw = "- Norm 1\n- Violation: Yes\n- Norm 1\n- Violation: No";
        let parsed = parse_response(raw).unwrap();
        assert_eq!(parsed.verdicts[&1].verdict, Verdict::Violated);
        assert!(parsed
            .parse_warnings
            .iter()
            .any(|w| w.message.contains("duplicate")));
    }

    #[test]
    fn out_of_range_norm_ignored() {
        let raw = "- Norm 11\n- Violation: Yes\n- Norm 2\n- Violation: Yes";
        let parsed = parse_response(raw).unwrap();
        assert_eq!(parsed.verdicts[&2].verdict, Verdict::Violated);
        assert!(!parsed.verdicts.contains_key(&11));
    }
}
