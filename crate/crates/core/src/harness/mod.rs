//! LLM harness: prompt rendering, pluggable transports, response parsing,
//! and cached exchanges for exact replay.

mod cache;
mod parse;
mod runner;
mod template;
mod transport;

pub use cache::{query, Exchange, ExchangeCache, ExchangeKey};
pub use parse::{parse_response, NormAnswer, ParseWarning, ParsedVerdicts};
pub use runner::{run_model, RunOutcome, VerdictRecord};
pub use template::{render_prompt, DialectSpec, PromptTemplate, DEFAULT_TEMPLATE_TEXT};
pub use transport::{
    AttemptFailure, CountingTransport, LiveTransport, ModelConfig, ReplayTransport, RetryPolicy,
    Transport,
};
