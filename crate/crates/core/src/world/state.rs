//! Replayable world state.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::CoreError;
use crate::world::event::{Event, EventKind};
use crate::world::floor_plan::FloorPlan;
use crate::world::vocab::Vocabulary;

/// Where an agent is. Agents who exited a room are in the corridor, the
/// distinguished between-rooms location.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Corridor,
    Room(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inconsistency {
    pub event_index: usize,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorldState {
    pub agent_room: BTreeMap<String, Location>,
    /// Partial: only items mentioned so far.
    pub item_container: BTreeMap<String, String>,
    pub phone_room: String,
    pub inconsistency_flags: Vec<Inconsistency>,
}

impl WorldState {
    /// The canonical start: the whole family in the living room, the phone
    /// in its configured room, no items tracked.
    pub fn initial(vocab: &Vocabulary, plan: &FloorPlan) -> WorldState {
        let living = vocab.living_room().name.clone();
        WorldState {
            agent_room: vocab
                .agents
                .iter()
                .map(|a| (a.name.clone(), Location::Room(living.clone())))
                .collect(),
            item_container: BTreeMap::new(),
            phone_room: plan.phone_initial_room.clone(),
            inconsistency_flags: Vec::new(),
        }
    }

    /// Applies one event, returning the successor state. `index` is the
    /// event's position in the story, used in errors and flags.
    pub fn apply_event(
        &self,
        event: &Event,
        index: usize,
        vocab: &Vocabulary,
    ) -> Result<WorldState, CoreError> {
        let unknown = |kind: &'static str, name: &str| CoreError::UnknownIdentifier {
            kind,
            name: name.to_string(),
            event_index: index,
        };
        let mut next = self.clone();
        match &event.kind {
            EventKind::Enter { agent, room } => {
                vocab.agent(agent).ok_or_else(|| unknown("agent", agent))?;
                vocab.room(room).ok_or_else(|| unknown("room", room))?;
                next.agent_room
                    .insert(agent.clone(), Location::Room(room.clone()));
            }
            EventKind::Exit { agent, room } => {
                vocab.agent(agent).ok_or_else(|| unknown("agent", agent))?;
                vocab.room(room).ok_or_else(|| unknown("room", room))?;
                next.agent_room.insert(agent.clone(), Location::Corridor);
            }
            EventKind::Move { agent, item, container } => {
                vocab.agent(agent).ok_or_else(|| unknown("agent", agent))?;
                vocab.item(item).ok_or_else(|| unknown("item", item))?;
                let spec = vocab
                    .container(container)
                    .ok_or_else(|| unknown("container", container))?;
                next.item_container.insert(item.clone(), container.clone());
                // Moving an item implies being in the container's room.
                let here = Location::Room(spec.room.clone());
                if self.agent_room.get(agent) != Some(&here) {
                    next.inconsistency_flags.push(Inconsistency {
                        event_index: index,
                        description: format!(
                            "{agent} moved {item} in {} while tracked elsewhere; adopting {}",
                            spec.room, spec.room
                        ),
                    });
                    next.agent_room.insert(agent.clone(), here);
                }
            }
            EventKind::Observe { item, container } => {
                vocab.item(item).ok_or_else(|| unknown("item", item))?;
                vocab
                    .container(container)
                    .ok_or_else(|| unknown("container", container))?;
                if let Some(tracked) = self.item_container.get(item) {
                    if tracked != container {
                        next.inconsistency_flags.push(Inconsistency {
                            event_index: index,
                            description: format!(
                                "observation places {item} in {container} but it was tracked in {tracked}"
                            ),
                        });
                    }
                }
                // Observation wins.
                next.item_container.insert(item.clone(), container.clone());
            }
            EventKind::Noise { .. } => {}
            EventKind::Knock { agent, room } => {
                vocab.agent(agent).ok_or_else(|| unknown("agent", agent))?;
                vocab.room(room).ok_or_else(|| unknown("room", room))?;
            }
            EventKind::PickUpPhone { agent } => {
                vocab.agent(agent).ok_or_else(|| unknown("agent", agent))?;
            }
        }
        Ok(next)
    }

    /// The agents currently in `room`.
    pub fn occupants<'a>(
        &'a self,
        room: &str,
        vocab: &Vocabulary,
    ) -> Result<BTreeSet<&'a str>, CoreError> {
        if vocab.room(room).is_none() {
            return Err(CoreError::UnknownRoom(room.to_string()));
        }
        Ok(self
            .agent_room
            .iter()
            .filter(|(_, loc)| matches!(loc, Location::Room(r) if r == room))
            .map(|(agent, _)| agent.as_str())
            .collect())
    }

    pub fn agents_in_corridor(&self) -> usize {
        self.agent_room
            .values()
            .filter(|loc| **loc == Location::Corridor)
            .count()
    }
}

/// One state per event, plus the initial state at position 0.
#[derive(Debug, Clone)]
pub struct Trace {
    pub states: Vec<WorldState>,
}

impl Trace {
    pub fn initial(&self) -> &WorldState {
        &self.states[0]
    }

    pub fn final_state(&self) -> &WorldState {
        self.states.last().expect("trace is never empty")
    }

    /// State before event `index` was applied.
    pub fn pre(&self, index: usize) -> &WorldState {
        &self.states[index]
    }

    /// State after event `index` was applied.
    pub fn post(&self, index: usize) -> &WorldState {
        &self.states[index + 1]
    }
}

/// Replays events from `initial`; `trace.states[k]` is the state after the
/// first `k` events.
pub fn replay(
    events: &[Event],
    initial: WorldState,
    vocab: &Vocabulary,
) -> Result<Trace, CoreError> {
    let mut states = Vec::with_capacity(events.len() + 1);
    states.push(initial);
    for (index, event) in events.iter().enumerate() {
        let next = states[index].apply_event(event, index, vocab)?;
        states.push(next);
    }
    Ok(Trace { states })
}
