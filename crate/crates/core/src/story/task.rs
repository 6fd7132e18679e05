//! Task scripts: per-agent action chains plus observation statements.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::CoreError;
use crate::world::{EventKind, Vocabulary};

/// One agent's ordered actions within a task.
#[derive(Debug, Clone, Serialize)]
pub struct AgentChain {
    pub agent: String,
    pub actions: Vec<EventKind>,
}

/// A task: a few agents acting (usually two), plus observation statements
/// tied to the task. The first action of the first chain anchors the
/// observations during interleaving.
#[derive(Debug, Clone, Serialize)]
pub struct TaskScript {
    pub task_id: usize,
    pub chains: Vec<AgentChain>,
    pub observations: Vec<EventKind>,
}

impl TaskScript {
    pub fn chain_for(&self, agent: &str) -> Option<&AgentChain> {
        self.chains.iter().find(|c| c.agent == agent)
    }

    pub fn action_count(&self) -> usize {
        self.chains.iter().map(|c| c.actions.len()).sum()
    }
}

/// Items an observation may still claim without ever contradicting the
/// replayed state: never moved anywhere in the story, observed at most once.
#[derive(Debug, Default)]
pub struct ObservationPool {
    pub moved: BTreeSet<String>,
    pub observed: BTreeSet<String>,
}

impl ObservationPool {
    pub fn note_chains(&mut self, chains: &[AgentChain]) {
        for chain in chains {
            for action in &chain.actions {
                if let EventKind::Move { item, .. } = action {
                    self.moved.insert(item.clone());
                }
            }
        }
    }
}

/// Weighted small-count draw: P(lo)=0.4, P(lo+1)=0.4, P(lo+2)=0.2.
fn draw_count<R: Rng>(rng: &mut R, lo: usize) -> usize {
    match rng.gen_range(0..10) {
        0..=3 => lo,
        4..=7 => lo + 1,
        _ => lo + 2,
    }
}

/// Enter a room with containers, move 0–2 items around in it, exit.
fn worker_chain<R: Rng>(rng: &mut R, vocab: &Vocabulary, agent: &str) -> AgentChain {
    let rooms = vocab.rooms_with_containers();
    let room = rooms.choose(rng).expect("caller checked containers exist");
    let containers = vocab.containers_in(&room.name);
    let moves = rng.gen_range(0..=2usize);
    let mut actions = vec![EventKind::Enter {
        agent: agent.to_string(),
        room: room.name.clone(),
    }];
    for _ in 0..moves {
        let item = vocab.items.choose(rng).expect("caller checked items exist");
        let container = containers.choose(rng).expect("room has containers");
        actions.push(EventKind::Move {
            agent: agent.to_string(),
            item: item.name.clone(),
            container: container.name.clone(),
        });
    }
    actions.push(EventKind::Exit {
        agent: agent.to_string(),
        room: room.name.clone(),
    });
    AgentChain {
        agent: agent.to_string(),
        actions,
    }
}

/// Wander through 1–3 rooms, entering and exiting each. With extension
/// events enabled the agent sometimes knocks before entering.
fn wanderer_chain<R: Rng>(
    rng: &mut R,
    vocab: &Vocabulary,
    agent: &str,
    extensions: bool,
) -> AgentChain {
    let hops = draw_count(rng, 1);
    let mut actions = Vec::new();
    let mut previous: Option<String> = None;
    for _ in 0..hops {
        let room = loop {
            let candidate = vocab.rooms.choose(rng).expect("rooms non-empty");
            if vocab.rooms.len() == 1 || previous.as_deref() != Some(candidate.name.as_str()) {
                break candidate.name.clone();
            }
        };
        if extensions && rng.gen_bool(0.3) {
            actions.push(EventKind::Knock {
                agent: agent.to_string(),
                room: room.clone(),
            });
        }
        actions.push(EventKind::Enter {
            agent: agent.to_string(),
            room: room.clone(),
        });
        actions.push(EventKind::Exit {
            agent: agent.to_string(),
            room: room.clone(),
        });
        previous = Some(room);
    }
    AgentChain {
        agent: agent.to_string(),
        actions,
    }
}

/// Chains for one task. Usually two agents: one works a room, one wanders.
/// Falls back to wandering when the vocabulary has no items or containers.
pub(crate) fn task_chains<R: Rng>(
    rng: &mut R,
    vocab: &Vocabulary,
    extensions: bool,
) -> Result<Vec<AgentChain>, CoreError> {
    if vocab.agents.is_empty() || vocab.rooms.is_empty() {
        return Err(CoreError::InvalidVocabulary(
            "task generation needs at least one agent and one room".into(),
        ));
    }
    let workable = !vocab.items.is_empty() && !vocab.rooms_with_containers().is_empty();
    let two_agents = vocab.agents.len() >= 2 && rng.gen_bool(0.8);

    let mut order: Vec<&str> = vocab.agents.iter().map(|a| a.name.as_str()).collect();
    order.shuffle(rng);

    let first = if workable {
        worker_chain(rng, vocab, order[0])
    } else {
        wanderer_chain(rng, vocab, order[0], extensions)
    };
    let mut chains = vec![first];
    if two_agents {
        chains.push(wanderer_chain(rng, vocab, order[1], extensions));
    }
    Ok(chains)
}

/// 0–2 observation statements drawn from the pool of safe items.
pub(crate) fn task_observations<R: Rng>(
    rng: &mut R,
    vocab: &Vocabulary,
    pool: &mut ObservationPool,
) -> Vec<EventKind> {
    if vocab.containers.is_empty() {
        return Vec::new();
    }
    let wanted = draw_count(rng, 0);
    let mut observations = Vec::new();
    for _ in 0..wanted {
        let candidates: Vec<&str> = vocab
            .items
            .iter()
            .map(|i| i.name.as_str())
            .filter(|name| !pool.moved.contains(*name) && !pool.observed.contains(*name))
            .collect();
        let Some(item) = candidates.choose(rng) else {
            break;
        };
        let container = vocab.containers.choose(rng).expect("containers non-empty");
        pool.observed.insert(item.to_string());
        observations.push(EventKind::Observe {
            item: item.to_string(),
            container: container.name.clone(),
        });
    }
    observations
}

/// Generates a standalone task: chains plus observations that are safe
/// against the task's own moves.
pub fn generate_task<R: Rng>(
    rng: &mut R,
    vocab: &Vocabulary,
    task_id: usize,
    extensions: bool,
) -> Result<TaskScript, CoreError> {
    let chains = task_chains(rng, vocab, extensions)?;
    let mut pool = ObservationPool::default();
    pool.note_chains(&chains);
    let observations = task_observations(rng, vocab, &mut pool);
    Ok(TaskScript {
        task_id,
        chains,
        observations,
    })
}
