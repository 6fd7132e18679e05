//! Agents, rooms, items, and containers, loaded from an editable config file.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Embedded copy of `config/vocabulary.toml`; the shipped default world.
pub const DEFAULT_VOCABULARY_TOML: &str = include_str!("../../../../config/vocabulary.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentRole {
    Mother,
    Father,
    Child,
}

impl AgentRole {
    pub fn is_adult(self) -> bool {
        matches!(self, AgentRole::Mother | AgentRole::Father)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgentSpec {
    pub name: String,
    pub role: AgentRole,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub age_years: Option<u8>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoomSpec {
    pub name: String,
    #[serde(default)]
    pub is_bathroom: bool,
    #[serde(default)]
    pub is_staircase: bool,
    #[serde(default)]
    pub is_crawl_space: bool,
    #[serde(default)]
    pub is_workshop: bool,
    #[serde(default)]
    pub is_study: bool,
    #[serde(default)]
    pub is_couple_bedroom: bool,
    #[serde(default)]
    pub is_living_room: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemCategory {
    Fruit,
    Vegetable,
    Sharp,
    Other,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ItemSpec {
    pub name: String,
    pub category: ItemCategory,
    #[serde(default)]
    pub citric_acid: bool,
    #[serde(default)]
    pub refrigeration_exempt: bool,
}

impl ItemSpec {
    /// Fruit or vegetable, the classes norm rules about food apply to.
    pub fn is_produce(&self) -> bool {
        matches!(self.category, ItemCategory::Fruit | ItemCategory::Vegetable)
    }

    pub fn is_sharp(&self) -> bool {
        self.category == ItemCategory::Sharp
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContainerSpec {
    pub name: String,
    pub room: String,
    #[serde(default)]
    pub is_refrigerator: bool,
    #[serde(default)]
    pub child_reachable: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Vocabulary {
    pub schema_version: u32,
    pub agents: Vec<AgentSpec>,
    pub rooms: Vec<RoomSpec>,
    pub items: Vec<ItemSpec>,
    pub containers: Vec<ContainerSpec>,
}

impl Vocabulary {
    pub fn from_toml_str(text: &str, origin: &str) -> Result<Self, CoreError> {
        let vocab: Vocabulary =
            toml::from_str(text).map_err(|e| CoreError::MalformedConfig {
                path: origin.to_string(),
                message: e.to_string(),
            })?;
        vocab.validate()?;
        Ok(vocab)
    }

    pub fn load(path: &Path) -> Result<Self, CoreError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CoreError::io(path.display().to_string(), e))?;
        Self::from_toml_str(&text, &path.display().to_string())
    }

    /// The shipped default household.
    pub fn default_vocabulary() -> &'static Vocabulary {
        static DEFAULT: OnceLock<Vocabulary> = OnceLock::new();
        DEFAULT.get_or_init(|| {
            Vocabulary::from_toml_str(DEFAULT_VOCABULARY_TOML, "<built-in vocabulary>")
                .expect("built-in vocabulary is valid")
        })
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        let bad = |msg: String| Err(CoreError::InvalidVocabulary(msg));
        if self.agents.is_empty() {
            return bad("no agents defined".into());
        }
        if self.rooms.is_empty() {
            return bad("no rooms defined".into());
        }
        check_unique("agent", self.agents.iter().map(|a| a.name.as_str()))?;
        check_unique("room", self.rooms.iter().map(|r| r.name.as_str()))?;
        check_unique("item", self.items.iter().map(|i| i.name.as_str()))?;
        check_unique("container", self.containers.iter().map(|c| c.name.as_str()))?;

        let mothers = self.agents.iter().filter(|a| a.role == AgentRole::Mother).count();
        let fathers = self.agents.iter().filter(|a| a.role == AgentRole::Father).count();
        if mothers != 1 || fathers != 1 {
            return bad(format!(
                "expected exactly one mother and one father, found {mothers} and {fathers}"
            ));
        }
        for agent in &self.agents {
            if agent.role == AgentRole::Child && agent.age_years.is_none() {
                return bad(format!("child `{}` has no age_years", agent.name));
            }
        }
        let living_rooms = self.rooms.iter().filter(|r| r.is_living_room).count();
        if living_rooms != 1 {
            return bad(format!("expected exactly one living room, found {living_rooms}"));
        }
        for container in &self.containers {
            if self.room(&container.room).is_none() {
                return bad(format!(
                    "container `{}` sits in unknown room `{}`",
                    container.name, container.room
                ));
            }
        }
        Ok(())
    }

    pub fn agent(&self, name: &str) -> Option<&AgentSpec> {
        self.agents.iter().find(|a| a.name == name)
    }

    pub fn room(&self, name: &str) -> Option<&RoomSpec> {
        self.rooms.iter().find(|r| r.name == name)
    }

    pub fn item(&self, name: &str) -> Option<&ItemSpec> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn container(&self, name: &str) -> Option<&ContainerSpec> {
        self.containers.iter().find(|c| c.name == name)
    }

    pub fn living_room(&self) -> &RoomSpec {
        self.rooms
            .iter()
            .find(|r| r.is_living_room)
            .expect("validated vocabulary has a living room")
    }

    pub fn father(&self) -> &AgentSpec {
        self.agents
            .iter()
            .find(|a| a.role == AgentRole::Father)
            .expect("validated vocabulary has a father")
    }

    pub fn children(&self) -> impl Iterator<Item = &AgentSpec> {
        self.agents.iter().filter(|a| a.role == AgentRole::Child)
    }

    pub fn containers_in(&self, room: &str) -> Vec<&ContainerSpec> {
        self.containers.iter().filter(|c| c.room == room).collect()
    }

    /// Rooms that hold at least one container, in declaration order.
    pub fn rooms_with_containers(&self) -> Vec<&RoomSpec> {
        self.rooms
            .iter()
            .filter(|r| self.containers.iter().any(|c| c.room == r.name))
            .collect()
    }
}

fn check_unique<'a>(
    kind: &str,
    names: impl Iterator<Item = &'a str>,
) -> Result<(), CoreError> {
    let mut seen = BTreeSet::new();
    for name in names {
        if !seen.insert(name) {
            return Err(CoreError::InvalidVocabulary(format!(
                "duplicate {kind} name `{name}`"
            )));
        }
    }
    Ok(())
}
