//! Shared test support: story builders, the independent naive norm
//! checker, the chain-consistency validator, and a brute-force linear
//! extension enumerator. Deliberately straight-line code with no state
//! shared with the incremental monitor.

#![allow(dead_code)]

use normbench_core::norms::Verdict;
use normbench_core::story::{Story, TaskScript};
use normbench_core::world::{
    replay, AgentRole, Event, EventKind, FloorPlan, Location, NoiseKind, Trace, Vocabulary,
    WorldState,
};

pub fn enter(agent: &str, room: &str) -> EventKind {
    EventKind::Enter {
        agent: agent.into(),
        room: room.into(),
    }
}

pub fn exit(agent: &str, room: &str) -> EventKind {
    EventKind::Exit {
        agent: agent.into(),
        room: room.into(),
    }
}

pub fn mv(agent: &str, item: &str, container: &str) -> EventKind {
    EventKind::Move {
        agent: agent.into(),
        item: item.into(),
        container: container.into(),
    }
}

pub fn observe(item: &str, container: &str) -> EventKind {
    EventKind::Observe {
        item: item.into(),
        container: container.into(),
    }
}

pub fn noise(kind: NoiseKind) -> EventKind {
    EventKind::Noise { noise_kind: kind }
}

pub fn knock(agent: &str, room: &str) -> EventKind {
    EventKind::Knock {
        agent: agent.into(),
        room: room.into(),
    }
}

pub fn story(id: &str, kinds: Vec<EventKind>) -> Story {
    Story::from_events(id, kinds.into_iter().map(Event::new).collect())
}

/// The 26-event four-task sample story used throughout the tests.
pub fn sample_story() -> Story {
    story(
        "fig-sample",
        vec![
            enter("Alexander", "sunroom"),              // 0
            mv("Alexander", "clock", "black_suitcase"), // 1
            enter("Peter", "sunroom"),                  // 2
            exit("Peter", "sunroom"),                   // 3
            enter("Peter", "study"),                    // 4
            exit("Peter", "study"),                     // 5
            enter("Emily", "sunroom"),                  // 6
            mv("Emily", "fork", "blue_bucket"),         // 7
            exit("Emily", "sunroom"),                   // 8
            noise(NoiseKind::PhoneRang),                // 9
            exit("Alexander", "sunroom"),               // 10
            enter("Emily", "study"),                    // 11
            mv("Emily", "tomato", "white_crate"),       // 12
            exit("Emily", "study"),                     // 13
            enter("Peter", "basement"),                 // 14
            observe("hat", "black_bottle"),             // 15
            observe("fork", "black_suitcase"),          // 16
            noise(NoiseKind::PhoneRang),                // 17
            observe("clock", "blue_bucket"),            // 18
            mv("Peter", "hat", "red_carpet"),           // 19
            exit("Peter", "basement"),                  // 20
            enter("Emily", "sunroom"),                  // 21
            exit("Emily", "sunroom"),                   // 22
            enter("Emily", "basement"),                 // 23
            observe("tomato", "green_refrigerator"),    // 24
            exit("Emily", "basement"),                  // 25
        ],
    )
}

fn is_child(vocab: &Vocabulary, agent: &str) -> bool {
    vocab.agent(agent).is_some_and(|a| a.role == AgentRole::Child)
}

fn is_adult(vocab: &Vocabulary, agent: &str) -> bool {
    vocab.agent(agent).is_some_and(|a| a.role.is_adult())
}

fn room_of_event<'a>(event: &'a EventKind, vocab: &'a Vocabulary) -> Option<&'a str> {
    match event {
        EventKind::Enter { room, .. }
        | EventKind::Exit { room, .. }
        | EventKind::Knock { room, .. } => Some(room.as_str()),
        EventKind::Move { container, .. } | EventKind::Observe { container, .. } => {
            vocab.container(container).map(|c| c.room.as_str())
        }
        _ => None,
    }
}

fn mentions_room(story: &Story, vocab: &Vocabulary, pred: impl Fn(&str) -> bool) -> bool {
    story
        .events
        .iter()
        .filter_map(|e| room_of_event(&e.kind, vocab))
        .any(pred)
}

/// Independent naive checker: materializes the full trace and scans it per
/// norm with standalone straight-line code.
pub fn naive_verdicts(
    story: &Story,
    vocab: &Vocabulary,
    plan: &FloorPlan,
    pickups_possible: bool,
) -> Vec<Verdict> {
    let trace = replay(&story.events, WorldState::initial(vocab, plan), vocab)
        .expect("story replays");
    (1..=10u8)
        .map(|id| naive_norm(id, story, &trace, vocab, plan, pickups_possible))
        .collect()
}

fn naive_norm(
    id: u8,
    story: &Story,
    trace: &Trace,
    vocab: &Vocabulary,
    plan: &FloorPlan,
    pickups_possible: bool,
) -> Verdict {
    let is_bathroom = |r: &str| vocab.room(r).is_some_and(|s| s.is_bathroom);
    let is_staircase = |r: &str| vocab.room(r).is_some_and(|s| s.is_staircase);
    let is_crawl = |r: &str| vocab.room(r).is_some_and(|s| s.is_crawl_space);
    let is_bedroom = |r: &str| vocab.room(r).is_some_and(|s| s.is_couple_bedroom);
    let is_workshop = |r: &str| vocab.room(r).is_some_and(|s| s.is_workshop);
    let is_study = |r: &str| vocab.room(r).is_some_and(|s| s.is_study);

    match id {
        1 => {
            let mut violated = false;
            for (i, event) in story.events.iter().enumerate() {
                if let EventKind::Enter { agent, room } = &event.kind {
                    if is_bathroom(room) {
                        let mut occupants = trace.pre(i).occupants(room, vocab).unwrap();
                        occupants.remove(agent.as_str());
                        if !occupants.is_empty() {
                            violated = true;
                        }
                    }
                }
            }
            if violated {
                Verdict::Violated
            } else if mentions_room(story, vocab, is_bathroom) {
                Verdict::NotViolated
            } else {
                Verdict::NotApplicable
            }
        }
        2 => {
            // Literal state-based reading: any reached state with a
            // non-exempt fruit/vegetable outside a refrigerator.
            let violated = trace.states.iter().any(|state| {
                state.item_container.iter().any(|(item, container)| {
                    let item = vocab.item(item).unwrap();
                    let container = vocab.container(container).unwrap();
                    item.is_produce() && !item.refrigeration_exempt && !container.is_refrigerator
                })
            });
            let applicable = story.events.iter().any(|e| match &e.kind {
                EventKind::Move { item, .. } | EventKind::Observe { item, .. } => {
                    let item = vocab.item(item).unwrap();
                    item.is_produce() && !item.refrigeration_exempt
                }
                _ => false,
            });
            if violated {
                Verdict::Violated
            } else if applicable {
                Verdict::NotViolated
            } else {
                Verdict::NotApplicable
            }
        }
        3 => {
            let mut violated = false;
            for (i, event) in story.events.iter().enumerate() {
                if let EventKind::Enter { room, .. } = &event.kind {
                    if is_staircase(room) && !trace.pre(i).occupants(room, vocab).unwrap().is_empty()
                    {
                        violated = true;
                    }
                }
            }
            if violated {
                Verdict::Violated
            } else if mentions_room(story, vocab, is_staircase) {
                Verdict::NotViolated
            } else {
                Verdict::NotApplicable
            }
        }
        4 => {
            let violated = trace.states.iter().any(|state| {
                state.item_container.iter().any(|(item, container)| {
                    vocab.item(item).unwrap().is_sharp()
                        && vocab.container(container).unwrap().child_reachable
                })
            });
            let applicable = story.events.iter().any(|e| match &e.kind {
                EventKind::Move { item, .. } | EventKind::Observe { item, .. } => {
                    vocab.item(item).unwrap().is_sharp()
                }
                _ => false,
            });
            if violated {
                Verdict::Violated
            } else if applicable {
                Verdict::NotViolated
            } else {
                Verdict::NotApplicable
            }
        }
        5 => {
            let rings: Vec<usize> = story
                .events
                .iter()
                .enumerate()
                .filter(|(_, e)| {
                    matches!(
                        e.kind,
                        EventKind::Noise {
                            noise_kind: NoiseKind::PhoneRang
                        }
                    )
                })
                .map(|(i, _)| i)
                .collect();
            if rings.is_empty() {
                return Verdict::NotApplicable;
            }
            let mut any_violated = false;
            let mut any_undetermined = false;
            for (ring_pos, &ring) in rings.iter().enumerate() {
                let window_end = rings.get(ring_pos + 1).copied().unwrap_or(story.events.len());
                let answered = (ring + 1..window_end).any(|i| {
                    matches!(story.events[i].kind, EventKind::PickUpPhone { .. })
                });
                if answered {
                    continue;
                }
                let state = trace.pre(ring);
                let hops = plan.hops_from(&state.phone_room);
                let corridor_distance = 1 + hops.values().min().copied().unwrap_or(0);
                let mut distances: Vec<usize> = Vec::new();
                for location in state.agent_room.values() {
                    distances.push(match location {
                        Location::Room(r) => hops.get(r).copied().unwrap_or(usize::MAX),
                        Location::Corridor => corridor_distance,
                    });
                }
                let best = *distances.iter().min().unwrap();
                let tied = distances.iter().filter(|&&d| d == best).count() > 1;
                if !tied || !pickups_possible {
                    any_violated = true;
                } else {
                    any_undetermined = true;
                }
            }
            if any_violated {
                Verdict::Violated
            } else if any_undetermined {
                Verdict::CannotBeDetermined
            } else {
                Verdict::NotViolated
            }
        }
        6 => {
            let mut produce = false;
            let mut citric = false;
            for event in &story.events {
                if let EventKind::Move { item, .. } | EventKind::Observe { item, .. } = &event.kind
                {
                    let item = vocab.item(item).unwrap();
                    if item.is_produce() {
                        produce = true;
                        if item.citric_acid {
                            citric = true;
                        }
                    }
                }
            }
            if citric {
                Verdict::Violated
            } else if produce {
                Verdict::NotViolated
            } else {
                Verdict::NotApplicable
            }
        }
        7 => {
            let violated = story.events.iter().any(|e| {
                matches!(&e.kind, EventKind::Enter { agent, room }
                    if is_crawl(room) && is_child(vocab, agent))
            });
            if violated {
                Verdict::Violated
            } else if mentions_room(story, vocab, is_crawl) {
                Verdict::NotViolated
            } else {
                Verdict::NotApplicable
            }
        }
        8 => {
            let mut violated = false;
            for (i, event) in story.events.iter().enumerate() {
                if let EventKind::Enter { agent, room } = &event.kind {
                    if is_bedroom(room) && !is_adult(vocab, agent) {
                        let excused = i > 0
                            && matches!(&story.events[i - 1].kind,
                                EventKind::Knock { agent: ka, room: kr }
                                    if ka == agent && kr == room);
                        if !excused {
                            violated = true;
                        }
                    }
                }
            }
            if violated {
                Verdict::Violated
            } else if mentions_room(story, vocab, is_bedroom) {
                Verdict::NotViolated
            } else {
                Verdict::NotApplicable
            }
        }
        9 => {
            let workshop_rooms: Vec<&str> = vocab
                .rooms
                .iter()
                .filter(|r| r.is_workshop)
                .map(|r| r.name.as_str())
                .collect();
            let violated = trace.states.iter().any(|state| {
                workshop_rooms.iter().any(|room| {
                    let occupants = state.occupants(room, vocab).unwrap();
                    let has_child = occupants.iter().any(|a| is_child(vocab, a));
                    let has_adult = occupants.iter().any(|a| is_adult(vocab, a));
                    has_child && !has_adult
                })
            });
            let applicable = story.events.iter().any(|e| {
                matches!(&e.kind, EventKind::Enter { agent, room }
                    if is_workshop(room) && is_child(vocab, agent))
            });
            if violated {
                Verdict::Violated
            } else if applicable {
                Verdict::NotViolated
            } else {
                Verdict::NotApplicable
            }
        }
        10 => {
            let father = vocab.father().name.as_str();
            let mut violated = false;
            let mut father_entered = false;
            for (i, event) in story.events.iter().enumerate() {
                if let EventKind::Enter { agent, room } = &event.kind {
                    if !is_study(room) {
                        continue;
                    }
                    if agent == father {
                        father_entered = true;
                    } else if trace.pre(i).occupants(room, vocab).unwrap().contains(father) {
                        violated = true;
                    }
                }
            }
            if violated {
                Verdict::Violated
            } else if father_entered {
                Verdict::NotViolated
            } else {
                Verdict::NotApplicable
            }
        }
        other => panic!("no naive rule for norm {other}"),
    }
}

/// Validates that a task's chains are internally consistent: an agent only
/// moves items in a room it has entered and not yet exited.
pub fn check_chain_consistency(task: &TaskScript, vocab: &Vocabulary) -> Result<(), String> {
    for chain in &task.chains {
        let mut inside: Option<&str> = None;
        for action in &chain.actions {
            match action {
                EventKind::Enter { room, .. } => {
                    if inside.is_some() {
                        return Err(format!("{} entered {room} while inside a room", chain.agent));
                    }
                    inside = Some(room);
                }
                EventKind::Exit { room, .. } => {
                    if inside != Some(room.as_str()) {
                        return Err(format!("{} exited {room} without being inside", chain.agent));
                    }
                    inside = None;
                }
                EventKind::Move { container, .. } => {
                    let room = vocab
                        .container(container)
                        .ok_or_else(|| format!("unknown container {container}"))?
                        .room
                        .as_str();
                    if inside != Some(room) {
                        return Err(format!(
                            "{} moved an item into {container} in {room} while elsewhere",
                            chain.agent
                        ));
                    }
                }
                EventKind::Knock { .. } => {
                    if inside.is_some() {
                        return Err(format!("{} knocked while inside a room", chain.agent));
                    }
                }
                other => return Err(format!("chain contains non-action event {other:?}")),
            }
        }
    }
    Ok(())
}

/// All linear extensions of the given chains, by brute-force recursion.
pub fn enumerate_interleavings<T: Clone>(chains: &[Vec<T>]) -> Vec<Vec<T>> {
    fn recurse<T: Clone>(heads: &mut Vec<usize>, chains: &[Vec<T>], acc: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        let mut advanced = false;
        for chain_index in 0..chains.len() {
            if heads[chain_index] < chains[chain_index].len() {
                advanced = true;
                acc.push(chains[chain_index][heads[chain_index]].clone());
                heads[chain_index] += 1;
                recurse(heads, chains, acc, out);
                heads[chain_index] -= 1;
                acc.pop();
            }
        }
        if !advanced {
            out.push(acc.clone());
        }
    }
    let mut out = Vec::new();
    recurse(&mut vec![0; chains.len()], chains, &mut Vec::new(), &mut out);
    out
}
