//! Full model runs: render, query, parse, normalize, emit.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::harness::cache::{query, ExchangeCache, ExchangeKey};
use crate::harness::parse::parse_response;
use crate::harness::template::PromptTemplate;
use crate::harness::transport::{ModelConfig, Transport};
use crate::norms::{normalize, Binary, NormSpec, Verdict};
use crate::records::SCHEMA_VERSION;
use crate::story::Story;

/// One (story, norm) verdict as reported by a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub schema_version: u32,
    pub story_id: String,
    pub model: String,
    pub norm_id: u8,
    pub verdict: Verdict,
    pub binary: Binary,
    pub reasoning: String,
    pub warnings: Vec<String>,
}

#[derive(Debug, Default)]
pub struct RunOutcome {
    /// Sorted by (story_id, norm_id).
    pub records: Vec<VerdictRecord>,
    /// Stories whose response failed to arrive or to parse, with the reason.
    pub failed_stories: Vec<(String, String)>,
}

/// Runs every story through render → query → parse → normalize. Stories
/// with unparseable responses contribute ten `CannotBeDetermined` records
/// and are listed in `failed_stories`; transport failures contribute no
/// records. Only a run where every story fails is an error.
pub fn run_model(
    corpus: &[Story],
    config: &ModelConfig,
    template: &PromptTemplate,
    norms: &[NormSpec],
    cache: &ExchangeCache,
    transport: &dyn Transport,
    concurrency: usize,
) -> Result<RunOutcome, CoreError> {
    config.validate()?;
    let template_digest = template.digest();
    let threads = concurrency.max(1).min(corpus.len().max(1));

    enum StoryResult {
        Records(Vec<VerdictRecord>),
        ParseFailed(Vec<VerdictRecord>, String),
        TransportFailed(String),
    }

    let next_index = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, StoryResult)>> = Mutex::new(Vec::with_capacity(corpus.len()));

    let process = |story: &Story| -> StoryResult {
        let prompt = match template.render(norms, story) {
            Ok(p) => p,
            Err(e) => return StoryResult::TransportFailed(e.to_string()),
        };
        let key = ExchangeKey {
            story_id: story.id.clone(),
            model_name: config.model_name.clone(),
            template_digest: template_digest.clone(),
        };
        let exchange = match query(config, &key, &prompt, cache, transport) {
            Ok(e) => e,
            Err(e) => return StoryResult::TransportFailed(e.to_string()),
        };
        match parse_response(&exchange.raw_response) {
            Ok(parsed) => {
                let records = (1..=10u8)
                    .map(|norm_id| {
                        let answer = &parsed.verdicts[&norm_id];
                        let warnings: Vec<String> = parsed
                            .parse_warnings
                            .iter()
                            .filter(|w| w.norm_id.is_none() || w.norm_id == Some(norm_id))
                            .map(|w| w.message.clone())
                            .collect();
                        VerdictRecord {
                            schema_version: SCHEMA_VERSION,
                            story_id: story.id.clone(),
                            model: config.model_name.clone(),
                            norm_id,
                            verdict: answer.verdict,
                            binary: normalize(answer.verdict),
                            reasoning: answer.reasoning.clone(),
                            warnings,
                        }
                    })
                    .collect();
                StoryResult::Records(records)
            }
            Err(e) => {
                let reason = e.to_string();
                let records = (1..=10u8)
                    .map(|norm_id| VerdictRecord {
                        schema_version: SCHEMA_VERSION,
                        story_id: story.id.clone(),
                        model: config.model_name.clone(),
                        norm_id,
                        verdict: Verdict::CannotBeDetermined,
                        binary: Binary::No,
                        reasoning: String::new(),
                        warnings: vec![reason.clone()],
                    })
                    .collect();
                StoryResult::ParseFailed(records, reason)
            }
        }
    };

    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let index = next_index.fetch_add(1, Ordering::SeqCst);
                if index >= corpus.len() {
                    break;
                }
                let result = process(&corpus[index]);
                results.lock().expect("results mutex").push((index, result));
            });
        }
    });

    let mut results = results.into_inner().expect("results mutex");
    results.sort_by_key(|(index, _)| *index);

    let mut outcome = RunOutcome::default();
    for (index, result) in results {
        let story_id = corpus[index].id.clone();
        match result {
            StoryResult::Records(records) => outcome.records.extend(records),
            StoryResult::ParseFailed(records, reason) => {
                outcome.records.extend(records);
                outcome.failed_stories.push((story_id, reason));
            }
            StoryResult::TransportFailed(reason) => {
                outcome.failed_stories.push((story_id, reason));
            }
        }
    }
    outcome
        .records
        .sort_by(|a, b| (&a.story_id, a.norm_id).cmp(&(&b.story_id, b.norm_id)));

    if !corpus.is_empty() && outcome.failed_stories.len() == corpus.len() {
        let all_transport_failures = outcome.records.is_empty();
        if all_transport_failures {
            return Err(CoreError::AllStoriesFailed {
                first: outcome.failed_stories[0].1.clone(),
            });
        }
    }
    Ok(outcome)
}
