//! Noise-event insertion.

use std::collections::BTreeSet;

use rand::Rng;

use crate::world::{Event, EventKind, NoiseKind};

/// Inserts noise independently at every inter-event slot (including both
/// ends) with probability `rate`. Original events keep their relative
/// order. When `cap` is set, insertions that would push the story past it
/// are dropped; original events never are.
pub fn inject_noise<R: Rng>(
    events: &[Event],
    rng: &mut R,
    kinds: &BTreeSet<NoiseKind>,
    rate: f64,
    cap: Option<usize>,
) -> Vec<Event> {
    if kinds.is_empty() || rate <= 0.0 {
        return events.to_vec();
    }
    let kinds: Vec<NoiseKind> = kinds.iter().copied().collect();
    let mut out: Vec<Event> = Vec::with_capacity(events.len() + 4);
    let emit_noise = |out: &mut Vec<Event>, rng: &mut R, remaining: usize| {
        if !rng.gen_bool(rate) {
            return;
        }
        if let Some(cap) = cap {
            if out.len() + remaining + 1 > cap {
                return;
            }
        }
        let kind = kinds[rng.gen_range(0..kinds.len())];
        out.push(Event::new(EventKind::Noise { noise_kind: kind }));
    };
    for (i, event) in events.iter().enumerate() {
        emit_noise(&mut out, rng, events.len() - i);
        out.push(event.clone());
    }
    emit_noise(&mut out, rng, 0);
    out
}
