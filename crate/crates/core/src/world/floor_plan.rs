//! Room adjacency and hop distances.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::world::vocab::Vocabulary;

/// Embedded copy of `config/floor_plan.toml`.
pub const DEFAULT_FLOOR_PLAN_TOML: &str = include_str!("../../../../config/floor_plan.toml");

#[derive(Debug, Clone, Serialize)]
pub struct FloorPlan {
    pub schema_version: u32,
    /// Symmetric: `b in adjacency[a]` iff `a in adjacency[b]`.
    pub adjacency: BTreeMap<String, BTreeSet<String>>,
    pub phone_initial_room: String,
}

#[derive(Deserialize)]
struct FloorPlanFile {
    schema_version: u32,
    phone_initial_room: String,
    adjacency: BTreeMap<String, Vec<String>>,
}

impl FloorPlan {
    pub fn from_toml_str(text: &str, origin: &str) -> Result<Self, CoreError> {
        let file: FloorPlanFile = toml::from_str(text).map_err(|e| CoreError::MalformedConfig {
            path: origin.to_string(),
            message: e.to_string(),
        })?;
        let mut adjacency: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (room, neighbours) in &file.adjacency {
            adjacency.entry(room.clone()).or_default();
            for n in neighbours {
                adjacency.entry(room.clone()).or_default().insert(n.clone());
                adjacency.entry(n.clone()).or_default().insert(room.clone());
            }
        }
        Ok(FloorPlan {
            schema_version: file.schema_version,
            adjacency,
            phone_initial_room: file.phone_initial_room,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CoreError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CoreError::io(path.display().to_string(), e))?;
        Self::from_toml_str(&text, &path.display().to_string())
    }

    pub fn default_floor_plan() -> &'static FloorPlan {
        static DEFAULT: OnceLock<FloorPlan> = OnceLock::new();
        DEFAULT.get_or_init(|| {
            let plan =
                FloorPlan::from_toml_str(DEFAULT_FLOOR_PLAN_TOML, "<built-in floor plan>")
                    .expect("built-in floor plan parses");
            plan.validate(Vocabulary::default_vocabulary())
                .expect("built-in floor plan is valid");
            plan
        })
    }

    pub fn validate(&self, vocab: &Vocabulary) -> Result<(), CoreError> {
        let bad = |msg: String| Err(CoreError::InvalidFloorPlan(msg));
        for (room, neighbours) in &self.adjacency {
            if vocab.room(room).is_none() {
                return bad(format!("adjacency mentions unknown room `{room}`"));
            }
            for n in neighbours {
                if vocab.room(n).is_none() {
                    return bad(format!("adjacency mentions unknown room `{n}`"));
                }
            }
        }
        if vocab.room(&self.phone_initial_room).is_none() {
            return bad(format!(
                "phone_initial_room `{}` is not a room",
                self.phone_initial_room
            ));
        }
        let living = &vocab.living_room().name;
        let reach = self.hops_from(living);
        for room in &vocab.rooms {
            if !reach.contains_key(&room.name) {
                return bad(format!(
                    "room `{}` is not reachable from `{living}`",
                    room.name
                ));
            }
        }
        Ok(())
    }

    /// BFS hop counts from `start` over the adjacency graph. Includes `start → 0`.
    pub fn hops_from(&self, start: &str) -> BTreeMap<String, usize> {
        let mut dist = BTreeMap::new();
        dist.insert(start.to_string(), 0usize);
        let mut queue = VecDeque::from([start.to_string()]);
        while let Some(room) = queue.pop_front() {
            let d = dist[&room];
            if let Some(neighbours) = self.adjacency.get(&room) {
                for n in neighbours {
                    if !dist.contains_key(n) {
                        dist.insert(n.clone(), d + 1);
                        queue.push_back(n.clone());
                    }
                }
            }
        }
        dist
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_plan_is_symmetric_and_connected() {
        let plan = FloorPlan::default_floor_plan();
        for (room, neighbours) in &plan.adjacency {
            for n in neighbours {
                assert!(
                    plan.adjacency[n].contains(room),
                    "{room} -> {n} not mirrored"
                );
            }
        }
        let hops = plan.hops_from("living_room");
        assert_eq!(hops.len(), 10);
        assert_eq!(hops["living_room"], 0);
        assert_eq!(hops["kitchen"], 1);
        assert_eq!(hops["basement"], 2);
        assert_eq!(hops["workshop"], 3);
    }

    #[test]
    fn unreachable_room_rejected() {
        let vocab = Vocabulary::default_vocabulary();
        let mut plan = FloorPlan::default_floor_plan().clone();
        // Disconnect the workshop.
        plan.adjacency.get_mut("basement").unwrap().remove("workshop");
        plan.adjacency.get_mut("workshop").unwrap().remove("basement");
        assert!(matches!(
            plan.validate(vocab),
            Err(CoreError::InvalidFloorPlan(_))
        ));
    }

    #[test]
    fn phone_room_must_exist() {
        let vocab = Vocabulary::default_vocabulary();
        let mut plan = FloorPlan::default_floor_plan().clone();
        plan.phone_initial_room = "garage".into();
        assert!(plan.validate(vocab).is_err());
    }
}
