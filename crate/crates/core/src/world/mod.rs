//! Typed world model: agents, places, objects, events, and replayable state.

mod event;
mod floor_plan;
mod state;
mod vocab;

pub use event::{display_name, Event, EventKind, NoiseKind};
pub use floor_plan::{FloorPlan, DEFAULT_FLOOR_PLAN_TOML};
pub use state::{replay, Inconsistency, Location, Trace, WorldState};
pub use vocab::{
    AgentRole, AgentSpec, ContainerSpec, ItemCategory, ItemSpec, RoomSpec, Vocabulary,
    DEFAULT_VOCABULARY_TOML,
};
