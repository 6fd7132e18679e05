//! Crate-wide error type.

use thiserror::Error;

/// Final failure of a transport request, after the retry policy ran out.
#[derive(Debug, Error)]
#[error("transport failure after {attempts} attempt(s): {message}")]
pub struct TransportError {
    pub attempts: u32,
    pub message: String,
    pub status: Option<u16>,
}

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("unknown {kind} `{name}` referenced by event {event_index}")]
    UnknownIdentifier {
        kind: &'static str,
        name: String,
        event_index: usize,
    },

    #[error("unknown room `{0}`")]
    UnknownRoom(String),

    #[error("unknown norm id {0}")]
    UnknownNorm(u8),

    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),

    #[error("invalid floor plan: {0}")]
    InvalidFloorPlan(String),

    #[error("invalid generation config: {0}")]
    InvalidConfig(String),

    #[error(
        "story generation stayed outside the {min}..={max} event bound after {attempts} attempts (last sub-seed {sub_seed})"
    )]
    StoryBudgetExhausted {
        attempts: u32,
        sub_seed: u64,
        min: usize,
        max: usize,
    },

    #[error("dependency cycle while interleaving: scheduled {emitted} of {total} events")]
    InterleaveCycle { emitted: usize, total: usize },

    #[error("generated story {story_id} replays with inconsistency flags: {detail}")]
    InconsistentStory { story_id: String, detail: String },

    #[error("invalid prompt template: {0}")]
    InvalidTemplate(String),

    #[error("no norm blocks recognized in response starting {preview:?}")]
    UnparseableResponse { preview: String },

    #[error("missing credential: environment variable `{0}` is not set")]
    MissingCredential(String),

    #[error(transparent)]
    Transport(#[from] TransportError),

    #[error("every story in the run failed; first error: {first}")]
    AllStoriesFailed { first: String },

    #[error("invalid annotations: {0}")]
    InvalidAnnotations(String),

    #[error("tied vote for story `{story_id}` norm {norm_id} with an even annotator count")]
    TiedVote { story_id: String, norm_id: u8 },

    #[error("ground truth and model records disagree on keys: {0}")]
    KeyMismatch(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record at {path} line {line}: {source}")]
    MalformedRecord {
        path: String,
        line: usize,
        #[source]
        source: serde_json::Error,
    },

    #[error("malformed config {path}: {message}")]
    MalformedConfig { path: String, message: String },
}

impl CoreError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CoreError::Io {
            path: path.into(),
            source,
        }
    }
}
