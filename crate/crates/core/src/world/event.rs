//! Events and their English surface forms.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    PhoneRang,
    KettleWhistled,
    CatMeowed,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 3] = [
        NoiseKind::PhoneRang,
        NoiseKind::KettleWhistled,
        NoiseKind::CatMeowed,
    ];

    pub fn text(self) -> &'static str {
        match self {
            NoiseKind::PhoneRang => "Phone rang.",
            NoiseKind::KettleWhistled => "Kettle whistled.",
            NoiseKind::CatMeowed => "Cat meowed.",
        }
    }
}

/// One perceivable happening. `Knock` and `PickUpPhone` are extension
/// events: generation only emits them when extension events are enabled,
/// but replay and the oracle always accept them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "args", rename_all = "snake_case")]
pub enum EventKind {
    Enter { agent: String, room: String },
    Exit { agent: String, room: String },
    Move { agent: String, item: String, container: String },
    Noise { noise_kind: NoiseKind },
    Observe { item: String, container: String },
    Knock { agent: String, room: String },
    PickUpPhone { agent: String },
}

/// Identifier to prose: `living_room` → `living room`.
pub fn display_name(ident: &str) -> String {
    ident.replace('_', " ")
}

impl EventKind {
    pub fn agent(&self) -> Option<&str> {
        match self {
            EventKind::Enter { agent, .. }
            | EventKind::Exit { agent, .. }
            | EventKind::Move { agent, .. }
            | EventKind::Knock { agent, .. }
            | EventKind::PickUpPhone { agent } => Some(agent),
            EventKind::Noise { .. } | EventKind::Observe { .. } => None,
        }
    }

    pub fn surface_text(&self) -> String {
        match self {
            EventKind::Enter { agent, room } => {
                format!("{agent} entered the {}.", display_name(room))
            }
            EventKind::Exit { agent, room } => {
                format!("{agent} exited the {}.", display_name(room))
            }
            EventKind::Move { agent, item, container } => format!(
                "{agent} moved the {} to the {}.",
                display_name(item),
                display_name(container)
            ),
            EventKind::Noise { noise_kind } => noise_kind.text().to_string(),
            EventKind::Observe { item, container } => format!(
                "The {} is in the {}.",
                display_name(item),
                display_name(container)
            ),
            EventKind::Knock { agent, room } => {
                format!("{agent} knocked on the {} door.", display_name(room))
            }
            EventKind::PickUpPhone { agent } => format!("{agent} picked up the phone."),
        }
    }
}

/// An event with its exact prompt-facing sentence. The position in the
/// story's event list is the event's index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    #[serde(flatten)]
    pub kind: EventKind,
    pub text: String,
}

impl Event {
    pub fn new(kind: EventKind) -> Self {
        let text = kind.surface_text();
        Event { kind, text }
    }
}

impl From<EventKind> for Event {
    fn from(kind: EventKind) -> Self {
        Event::new(kind)
    }
}
