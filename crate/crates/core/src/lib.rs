//! Benchmark engine for norm-violation detection over simulated household
//! event traces: generates stories from grammar templates, computes ground
//! truth with a deterministic symbolic monitor, queries chat-completion
//! endpoints, and scores model verdicts against the ground truth.

pub mod error;
pub mod eval;
pub mod harness;
pub mod norms;
pub mod records;
pub mod story;
pub mod world;

pub use error::{CoreError, TransportError};
pub use eval::{
    confusion_rates, corpus_stats, emit_report, majority_vote, score, AnnotationSet, Confusion,
    ConfusionRates, CorpusStats, LabelKey, ReportFormat, ScoreReport, ScoredLabel,
};
pub use harness::{
    parse_response, render_prompt, run_model, DialectSpec, Exchange, ExchangeCache, ExchangeKey,
    LiveTransport, ModelConfig, PromptTemplate, ReplayTransport, RetryPolicy, RunOutcome,
    Transport, VerdictRecord,
};
pub use norms::{
    default_norms, evaluate_all, evaluate_norm, norm_set, normalize, Binary, Judgement,
    JudgementRecord, NormCategory, NormKind, NormParams, NormSpec, Verdict,
};
pub use story::{
    generate_corpus, generate_story, generate_task, interleave, read_corpus, write_corpus,
    GenConfig, GeneratedStory, Story, TaskScript, REFERENCE_SEED,
};
pub use world::{
    replay, AgentRole, Event, EventKind, FloorPlan, Location, NoiseKind, Trace, Vocabulary,
    WorldState,
};
