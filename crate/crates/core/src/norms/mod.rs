//! The ten household norms, four-valued verdicts, and judgements.

mod monitor;
mod rules;

pub use monitor::{evaluate_all, evaluate_norm};

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Violated,
    NotViolated,
    CannotBeDetermined,
    NotApplicable,
}

/// Binary label used for scoring: `yes` means violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Binary {
    Yes,
    No,
}

/// Collapses the four-valued verdict to the binary label: only `Violated`
/// maps to `yes`; `cannot be determined` and `not applicable` both read as
/// non-violations.
pub fn normalize(verdict: Verdict) -> Binary {
    match verdict {
        Verdict::Violated => Binary::Yes,
        Verdict::NotViolated | Verdict::CannotBeDetermined | Verdict::NotApplicable => Binary::No,
    }
}

impl Verdict {
    pub fn normalize(self) -> Binary {
        normalize(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormCategory {
    Generic,
    RoleBased,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Obligation,
    Prohibition,
}

/// Rule-specific knobs. Only norm 5 has one today: whether stories can
/// contain phone pickups at all (extension events enabled).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormParams {
    #[serde(default)]
    pub pickups_possible: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormSpec {
    pub id: u8,
    pub text: String,
    pub category: NormCategory,
    pub kind: NormKind,
    #[serde(default)]
    pub params: NormParams,
}

const NORM_TEXTS: [&str; 10] = [
    "You should not enter an occupied bathroom.",
    "Vegetables and fruits (except bananas) should be kept in the refrigerator.",
    "Before using the staircase, you should wait until it is free.",
    "If sharp objects are present in the household, they should be kept out of reach of children.",
    "If the phone rings, the person closest to the phone must pick it up.",
    "There should be no fruits and vegetables containing citric acid inside the house.",
    "Kids should not enter crawl spaces.",
    "You should not enter a couple's bedroom without knocking.",
    "Kids should be supervised inside the workshop all the time.",
    "Father should not be disturbed while he is in his study room.",
];

const PROHIBITION_IDS: [u8; 5] = [1, 6, 7, 8, 10];

/// The ten norms. Ids 1–6 are generic, 7–10 role-based; prohibition norms
/// are 1, 6, 7, 8 and 10, the rest are obligations.
pub fn norm_set(pickups_possible: bool) -> Vec<NormSpec> {
    (1..=10u8)
        .map(|id| NormSpec {
            id,
            text: NORM_TEXTS[id as usize - 1].to_string(),
            category: if id <= 6 {
                NormCategory::Generic
            } else {
                NormCategory::RoleBased
            },
            kind: if PROHIBITION_IDS.contains(&id) {
                NormKind::Prohibition
            } else {
                NormKind::Obligation
            },
            params: NormParams { pickups_possible },
        })
        .collect()
}

/// Paper-faithful norms: stories contain no pickups, so every unanswered
/// phone ring counts as a violation.
pub fn default_norms() -> Vec<NormSpec> {
    norm_set(false)
}

/// One norm's judgement over a story.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Judgement {
    pub norm_id: u8,
    pub verdict: Verdict,
    /// Indices of the events that triggered the verdict. Non-empty for
    /// `Violated`, empty for `NotApplicable`.
    pub evidence: Vec<usize>,
    pub rationale: String,
}

/// One (story, norm) ground-truth line as written by the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JudgementRecord {
    pub schema_version: u32,
    pub story_id: String,
    pub norm_id: u8,
    pub verdict: Verdict,
    pub binary: Binary,
    pub evidence: Vec<usize>,
    pub rationale: String,
}

impl JudgementRecord {
    pub fn from_judgement(story_id: &str, judgement: &Judgement) -> Self {
        JudgementRecord {
            schema_version: crate::records::SCHEMA_VERSION,
            story_id: story_id.to_string(),
            norm_id: judgement.norm_id,
            verdict: judgement.verdict,
            binary: normalize(judgement.verdict),
            evidence: judgement.evidence.clone(),
            rationale: judgement.rationale.clone(),
        }
    }
}

impl Judgement {
    pub fn check_invariants(&self) -> Result<(), CoreError> {
        match self.verdict {
            Verdict::Violated if self.evidence.is_empty() => Err(CoreError::InvalidConfig(
                format!("norm {} violated without evidence", self.norm_id),
            )),
            Verdict::NotApplicable if !self.evidence.is_empty() => Err(CoreError::InvalidConfig(
                format!("norm {} not applicable but cites evidence", self.norm_id),
            )),
            _ => Ok(()),
        }
    }
}
