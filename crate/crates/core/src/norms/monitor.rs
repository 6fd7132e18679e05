//! Single-pass driver feeding events to the rule monitors.

use crate::error::CoreError;
use crate::norms::rules::{build_rule, RuleCtx};
use crate::norms::{Judgement, NormSpec};
use crate::story::Story;
use crate::world::{FloorPlan, Vocabulary, WorldState};

/// Judges `norms` over the story in one left-to-right pass. Judgements come
/// back in the order the norms were given.
pub fn evaluate_all(
    story: &Story,
    vocab: &Vocabulary,
    plan: &FloorPlan,
    norms: &[NormSpec],
) -> Result<Vec<Judgement>, CoreError> {
    let mut rules = norms
        .iter()
        .map(build_rule)
        .collect::<Result<Vec<_>, _>>()?;
    let mut state = WorldState::initial(vocab, plan);
    for (index, event) in story.events.iter().enumerate() {
        let post = state.apply_event(event, index, vocab)?;
        let ctx = RuleCtx {
            index,
            event,
            pre: &state,
            post: &post,
            vocab,
            plan,
        };
        for rule in rules.iter_mut() {
            rule.observe(&ctx);
        }
        state = post;
    }
    let judgements: Vec<Judgement> = rules
        .into_iter()
        .zip(norms)
        .map(|(rule, spec)| rule.finish(spec))
        .collect();
    for j in &judgements {
        j.check_invariants()?;
    }
    Ok(judgements)
}

pub fn evaluate_norm(
    story: &Story,
    norm: &NormSpec,
    vocab: &Vocabulary,
    plan: &FloorPlan,
) -> Result<Judgement, CoreError> {
    let mut judgements = evaluate_all(story, vocab, plan, std::slice::from_ref(norm))?;
    Ok(judgements.pop().expect("one norm in, one judgement out"))
}
