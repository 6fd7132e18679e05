//! Story generation: task chains from the grammar templates, randomized
//! topological-sort interleaving, injected noise and observations.

mod corpus;
mod interleave;
mod noise;
mod task;

pub use corpus::{
    derive_sub_seed, generate_corpus, generate_corpus_detailed, generate_story, read_corpus,
    write_corpus, GenConfig, GeneratedStory, Story, DEFAULT_NOISE_RATE, MAX_ATTEMPTS, MAX_EVENTS,
    MIN_EVENTS, REFERENCE_SEED,
};
pub use interleave::interleave;
pub use noise::inject_noise;
pub use task::{generate_task, AgentChain, ObservationPool, TaskScript};
