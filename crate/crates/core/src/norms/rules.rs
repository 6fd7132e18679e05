//! Incremental rule monitors for the ten norms.
//!
//! Each rule consumes (pre-state, event, post-state) triples in story order
//! and produces one judgement at the end. Verdict precedence is
//! Violated > CannotBeDetermined > NotViolated/NotApplicable, so a found
//! violation never degrades when more events arrive.

use std::collections::BTreeSet;

use crate::error::CoreError;
use crate::norms::{Judgement, NormSpec, Verdict};
use crate::world::{display_name, Event, EventKind, FloorPlan, NoiseKind, Vocabulary, WorldState};
use crate::world::Location;

pub(crate) struct RuleCtx<'a> {
    pub index: usize,
    pub event: &'a Event,
    pub pre: &'a WorldState,
    pub post: &'a WorldState,
    pub vocab: &'a Vocabulary,
    pub plan: &'a FloorPlan,
}

pub(crate) trait RuleState {
    fn observe(&mut self, ctx: &RuleCtx<'_>);
    fn finish(self: Box<Self>, spec: &NormSpec) -> Judgement;
}

pub(crate) fn build_rule(spec: &NormSpec) -> Result<Box<dyn RuleState>, CoreError> {
    Ok(match spec.id {
        1 => Box::new(BathroomRule::default()),
        2 => Box::new(RefrigerationRule::default()),
        3 => Box::new(StaircaseRule::default()),
        4 => Box::new(SharpRule::default()),
        5 => Box::new(PhoneRule::new(spec.params.pickups_possible)),
        6 => Box::new(CitricRule::default()),
        7 => Box::new(CrawlSpaceRule::default()),
        8 => Box::new(KnockRule::default()),
        9 => Box::new(WorkshopRule::default()),
        10 => Box::new(StudyRule::default()),
        other => return Err(CoreError::UnknownNorm(other)),
    })
}

fn judgement(spec: &NormSpec, verdict: Verdict, evidence: Vec<usize>, rationale: String) -> Judgement {
    Judgement {
        norm_id: spec.id,
        verdict,
        evidence,
        rationale,
    }
}

/// Rooms an event talks about: the room argument of enter/exit/knock, or
/// the room holding the container of a move/observe.
fn referenced_rooms<'a>(event: &'a EventKind, vocab: &'a Vocabulary) -> Option<&'a str> {
    match event {
        EventKind::Enter { room, .. }
        | EventKind::Exit { room, .. }
        | EventKind::Knock { room, .. } => Some(room.as_str()),
        EventKind::Move { container, .. } | EventKind::Observe { container, .. } => {
            vocab.container(container).map(|c| c.room.as_str())
        }
        EventKind::Noise { .. } | EventKind::PickUpPhone { .. } => None,
    }
}

/// Item/container pair of a placement event.
fn placement(event: &EventKind) -> Option<(&str, &str)> {
    match event {
        EventKind::Move { item, container, .. } | EventKind::Observe { item, container } => {
            Some((item.as_str(), container.as_str()))
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Norm 1: You should not enter an occupied bathroom.
// ---------------------------------------------------------------------------

#[derive(Default)]
struct BathroomRule {
    applicable: bool,
    violations: Vec<usize>,
    details: Vec<String>,
}

impl RuleState for BathroomRule {
    fn observe(&mut self, ctx: &RuleCtx<'_>) {
        if let Some(room) = referenced_rooms(&ctx.event.kind, ctx.vocab) {
            if ctx.vocab.room(room).is_some_and(|r| r.is_bathroom) {
                self.applicable = true;
            }
        }
        if let EventKind::Enter { agent, room } = &ctx.event.kind {
            if ctx.vocab.room(room).is_some_and(|r| r.is_bathroom) {
                let mut others = ctx
                    .pre
                    .occupants(room, ctx.vocab)
                    .expect("room validated during replay");
                others.remove(agent.as_str());
                if !others.is_empty() {
                    self.violations.push(ctx.index);
                    self.details.push(format!(
                        "{agent} entered the {} at event {} while {} inside",
                        display_name(room),
                        ctx.index,
                        join(&others)
                    ));
                }
            }
        }
    }

    fn finish(self: Box<Self>, spec: &NormSpec) -> Judgement {
        if !self.violations.is_empty() {
            judgement(spec, Verdict::Violated, self.violations, self.details.join("; "))
        } else if self.applicable {
            judgement(
                spec,
                Verdict::NotViolated,
                vec![],
                "every bathroom entry happened while it was unoccupied".into(),
            )
        } else {
            judgement(spec, Verdict::NotApplicable, vec![], "no event involves a bathroom".into())
        }
    }
}

// ---------------------------------------------------------------------------
// Norm 2: Vegetables and fruits (except bananas) should be kept in the
// refrigerator.
// ---------------------------------------------------------------------------

#[derive(Default)]
struct RefrigerationRule {
    applicable: bool,
    violations: Vec<usize>,
    details: Vec<String>,
}

impl RuleState for RefrigerationRule {
    fn observe(&mut self, ctx: &RuleCtx<'_>) {
        let Some((item, container)) = placement(&ctx.event.kind) else {
            return;
        };
        let item_spec = ctx.vocab.item(item).expect("item validated during replay");
        if !item_spec.is_produce() || item_spec.refrigeration_exempt {
            return;
        }
        self.applicable = true;
        let container_spec = ctx
            .vocab
            .container(container)
            .expect("container validated during replay");
        if !container_spec.is_refrigerator {
            self.violations.push(ctx.index);
            self.details.push(format!(
                "the {} sits in the {}, which is not a refrigerator (event {})",
                display_name(item),
                display_name(container),
                ctx.index
            ));
        }
    }

    fn finish(self: Box<Self>, spec: &NormSpec) -> Judgement {
        if !self.violations.is_empty() {
            judgement(spec, Verdict::Violated, self.violations, self.details.join("; "))
        } else if self.applicable {
            judgement(
                spec,
                Verdict::NotViolated,
                vec![],
                "every refrigeration-required item stayed in a refrigerator".into(),
            )
        } else {
            judgement(
                spec,
                Verdict::NotApplicable,
                vec![],
                "no refrigeration-required fruit or vegetable is mentioned".into(),
            )
        }
    }
}

// ---------------------------------------------------------------------------
// Norm 3: Before using the staircase, you should wait until it is free.
// ---------------------------------------------------------------------------

#[derive(Default)]
struct StaircaseRule {
    applicable: bool,
    violations: Vec<usize>,
    details: Vec<String>,
}

impl RuleState for StaircaseRule {
    fn observe(&mut self, ctx: &RuleCtx<'_>) {
        if let Some(room) = referenced_rooms(&ctx.event.kind, ctx.vocab) {
            if ctx.vocab.room(room).is_some_and(|r| r.is_staircase) {
                self.applicable = true;
            }
        }
        if let EventKind::Enter { agent, room } = &ctx.event.kind {
            if ctx.vocab.room(room).is_some_and(|r| r.is_staircase) {
                let occupants = ctx
                    .pre
                    .occupants(room, ctx.vocab)
                    .expect("room validated during replay");
                if !occupants.is_empty() {
                    self.violations.push(ctx.index);
                    self.details.push(format!(
                        "{agent} stepped onto the {} at event {} while {} used it",
                        display_name(room),
                        ctx.index,
                        join(&occupants)
                    ));
                }
            }
        }
    }

    fn finish(self: Box<Self>, spec: &NormSpec) -> Judgement {
        if !self.violations.is_empty() {
            judgement(spec, Verdict::Violated, self.violations, self.details.join("; "))
        } else if self.applicable {
            judgement(
                spec,
                Verdict::NotViolated,
                vec![],
                "the staircase was only entered while free".into(),
            )
        } else {
            judgement(spec, Verdict::NotApplicable, vec![], "the staircase never appears".into())
        }
    }
}

// ---------------------------------------------------------------------------
// Norm 4: If sharp objects are present in the household, they should be
// kept out of reach of children.
// ---------------------------------------------------------------------------

#[derive(Default)]
struct SharpRule {
    applicable: bool,
    violations: Vec<usize>,
    details: Vec<String>,
}

impl RuleState for SharpRule {
    fn observe(&mut self, ctx: &RuleCtx<'_>) {
        let Some((item, container)) = placement(&ctx.event.kind) else {
            return;
        };
        let item_spec = ctx.vocab.item(item).expect("item validated during replay");
        if !item_spec.is_sharp() {
            return;
        }
        self.applicable = true;
        let container_spec = ctx
            .vocab
            .container(container)
            .expect("container validated during replay");
        if container_spec.child_reachable {
            self.violations.push(ctx.index);
            self.details.push(format!(
                "the {} ended up in the child-reachable {} (event {})",
                display_name(item),
                display_name(container),
                ctx.index
            ));
        }
    }

    fn finish(self: Box<Self>, spec: &NormSpec) -> Judgement {
        if !self.violations.is_empty() {
            judgement(spec, Verdict::Violated, self.violations, self.details.join("; "))
        } else if self.applicable {
            judgement(
                spec,
                Verdict::NotViolated,
                vec![],
                "sharp objects stayed out of children's reach".into(),
            )
        } else {
            judgement(spec, Verdict::NotApplicable, vec![], "no sharp object is mentioned".into())
        }
    }
}

// ---------------------------------------------------------------------------
// Norm 5: If the phone rings, the person closest to the phone must pick
// it up.
// ---------------------------------------------------------------------------

struct Ring {
    index: usize,
    closest: Vec<String>,
    answered: bool,
}

struct PhoneRule {
    pickups_possible: bool,
    rings: Vec<Ring>,
}

impl PhoneRule {
    fn new(pickups_possible: bool) -> Self {
        PhoneRule {
            pickups_possible,
            rings: Vec::new(),
        }
    }
}

impl RuleState for PhoneRule {
    fn observe(&mut self, ctx: &RuleCtx<'_>) {
        match &ctx.event.kind {
            EventKind::Noise {
                noise_kind: NoiseKind::PhoneRang,
            } => {
                let hops = ctx.plan.hops_from(&ctx.pre.phone_room);
                // Corridor agents count as one hop past the closest room.
                let corridor = 1 + hops.values().min().copied().unwrap_or(0);
                let mut best = usize::MAX;
                let mut closest = Vec::new();
                for (agent, location) in &ctx.pre.agent_room {
                    let d = match location {
                        Location::Room(r) => hops.get(r).copied().unwrap_or(usize::MAX),
                        Location::Corridor => corridor,
                    };
                    if d < best {
                        best = d;
                        closest = vec![agent.clone()];
                    } else if d == best {
                        closest.push(agent.clone());
                    }
                }
                self.rings.push(Ring {
                    index: ctx.index,
                    closest,
                    answered: false,
                });
            }
            EventKind::PickUpPhone { .. } => {
                // A pickup answers the most recent ring; pickups before any
                // ring are inert.
                if let Some(ring) = self.rings.last_mut() {
                    ring.answered = true;
                }
            }
            _ => {}
        }
    }

    fn finish(self: Box<Self>, spec: &NormSpec) -> Judgement {
        if self.rings.is_empty() {
            return judgement(spec, Verdict::NotApplicable, vec![], "the phone never rings".into());
        }
        let mut violated = Vec::new();
        let mut undetermined = Vec::new();
        let mut details = Vec::new();
        for ring in &self.rings {
            if ring.answered {
                continue;
            }
            // An unanswered ring is a violation whenever a unique closest
            // agent exists, and always in paper-faithful corpora, where no
            // pickup can occur at all. Only with pickups possible and a tie
            // for closest does the verdict degrade.
            if ring.closest.len() == 1 || !self.pickups_possible {
                violated.push(ring.index);
                details.push(format!(
                    "the phone rang at event {} and nobody picked it up (closest: {})",
                    ring.index,
                    ring.closest.join(", ")
                ));
            } else {
                undetermined.push(ring.index);
                details.push(format!(
                    "the ring at event {} went unanswered but {} tie for closest",
                    ring.index,
                    ring.closest.join(", ")
                ));
            }
        }
        if !violated.is_empty() {
            judgement(spec, Verdict::Violated, violated, details.join("; "))
        } else if !undetermined.is_empty() {
            judgement(spec, Verdict::CannotBeDetermined, undetermined, details.join("; "))
        } else {
            judgement(spec, Verdict::NotViolated, vec![], "every ring was picked up".into())
        }
    }
}

// ---------------------------------------------------------------------------
// Norm 6: There should be no fruits and vegetables containing citric acid
// inside the house.
// ---------------------------------------------------------------------------

#[derive(Default)]
struct CitricRule {
    produce_mentioned: bool,
    violations: Vec<usize>,
    details: Vec<String>,
}

impl RuleState for CitricRule {
    fn observe(&mut self, ctx: &RuleCtx<'_>) {
        let Some((item, _)) = placement(&ctx.event.kind) else {
            return;
        };
        let item_spec = ctx.vocab.item(item).expect("item validated during replay");
        if !item_spec.is_produce() {
            return;
        }
        self.produce_mentioned = true;
        // Any mention counts as presence in the house.
        if item_spec.citric_acid {
            self.violations.push(ctx.index);
            self.details.push(format!(
                "the {} contains citric acid and is present in the house (event {})",
                display_name(item),
                ctx.index
            ));
        }
    }

    fn finish(self: Box<Self>, spec: &NormSpec) -> Judgement {
        if !self.violations.is_empty() {
            judgement(spec, Verdict::Violated, self.violations, self.details.join("; "))
        } else if self.produce_mentioned {
            judgement(
                spec,
                Verdict::NotViolated,
                vec![],
                "no mentioned produce contains citric acid".into(),
            )
        } else {
            judgement(
                spec,
                Verdict::NotApplicable,
                vec![],
                "no fruit or vegetable is mentioned".into(),
            )
        }
    }
}

// ---------------------------------------------------------------------------
// Norm 7: Kids should not enter crawl spaces.
// ---------------------------------------------------------------------------

#[derive(Default)]
struct CrawlSpaceRule {
    applicable: bool,
    violations: Vec<usize>,
    details: Vec<String>,
}

impl RuleState for CrawlSpaceRule {
    fn observe(&mut self, ctx: &RuleCtx<'_>) {
        if let Some(room) = referenced_rooms(&ctx.event.kind, ctx.vocab) {
            if ctx.vocab.room(room).is_some_and(|r| r.is_crawl_space) {
                self.applicable = true;
            }
        }
        if let EventKind::Enter { agent, room } = &ctx.event.kind {
            let is_crawl = ctx.vocab.room(room).is_some_and(|r| r.is_crawl_space);
            let is_child = ctx.vocab.agent(agent).is_some_and(|a| !a.role.is_adult());
            if is_crawl && is_child {
                self.violations.push(ctx.index);
                self.details.push(format!(
                    "{agent} entered the {} at event {}",
                    display_name(room),
                    ctx.index
                ));
            }
        }
    }

    fn finish(self: Box<Self>, spec: &NormSpec) -> Judgement {
        if !self.violations.is_empty() {
            judgement(spec, Verdict::Violated, self.violations, self.details.join("; "))
        } else if self.applicable {
            judgement(
                spec,
                Verdict::NotViolated,
                vec![],
                "no child entered a crawl space".into(),
            )
        } else {
            judgement(spec, Verdict::NotApplicable, vec![], "no crawl-space event occurs".into())
        }
    }
}

// ---------------------------------------------------------------------------
// Norm 8: You should not enter a couple's bedroom without knocking.
// ---------------------------------------------------------------------------

#[derive(Default)]
struct KnockRule {
    applicable: bool,
    violations: Vec<usize>,
    details: Vec<String>,
    last_event: Option<EventKind>,
}

impl RuleState for KnockRule {
    fn observe(&mut self, ctx: &RuleCtx<'_>) {
        if let Some(room) = referenced_rooms(&ctx.event.kind, ctx.vocab) {
            if ctx.vocab.room(room).is_some_and(|r| r.is_couple_bedroom) {
                self.applicable = true;
            }
        }
        if let EventKind::Enter { agent, room } = &ctx.event.kind {
            let is_bedroom = ctx.vocab.room(room).is_some_and(|r| r.is_couple_bedroom);
            let is_parent = ctx.vocab.agent(agent).is_some_and(|a| a.role.is_adult());
            if is_bedroom && !is_parent {
                // Strict reading: the knock must be the immediately
                // preceding event, by the same agent, on the same door.
                let knocked = matches!(
                    &self.last_event,
                    Some(EventKind::Knock { agent: ka, room: kr }) if ka == agent && kr == room
                );
                if !knocked {
                    self.violations.push(ctx.index);
                    self.details.push(format!(
                        "{agent} entered the {} at event {} without knocking first",
                        display_name(room),
                        ctx.index
                    ));
                }
            }
        }
        self.last_event = Some(ctx.event.kind.clone());
    }

    fn finish(self: Box<Self>, spec: &NormSpec) -> Judgement {
        if !self.violations.is_empty() {
            judgement(spec, Verdict::Violated, self.violations, self.details.join("; "))
        } else if self.applicable {
            judgement(
                spec,
                Verdict::NotViolated,
                vec![],
                "the couple's bedroom was only entered after knocking or by the couple".into(),
            )
        } else {
            judgement(
                spec,
                Verdict::NotApplicable,
                vec![],
                "the couple's bedroom never appears".into(),
            )
        }
    }
}

// ---------------------------------------------------------------------------
// Norm 9: Kids should be supervised inside the workshop all the time.
// ---------------------------------------------------------------------------

#[derive(Default)]
struct WorkshopRule {
    applicable: bool,
    violations: Vec<usize>,
    details: Vec<String>,
    unsupervised_rooms: BTreeSet<String>,
}

impl RuleState for WorkshopRule {
    fn observe(&mut self, ctx: &RuleCtx<'_>) {
        if let EventKind::Enter { agent, room } = &ctx.event.kind {
            let is_workshop = ctx.vocab.room(room).is_some_and(|r| r.is_workshop);
            let is_child = ctx.vocab.agent(agent).is_some_and(|a| !a.role.is_adult());
            if is_workshop && is_child {
                self.applicable = true;
            }
        }
        // Record the moment a workshop transitions into an unsupervised
        // state; the violation persists until an adult shows up.
        let workshop_rooms: Vec<&str> = ctx
            .vocab
            .rooms
            .iter()
            .filter(|r| r.is_workshop)
            .map(|r| r.name.as_str())
            .collect();
        for room in workshop_rooms {
            let occupants = ctx
                .post
                .occupants(room, ctx.vocab)
                .expect("vocabulary rooms are known");
            let kids: Vec<&str> = occupants
                .iter()
                .copied()
                .filter(|a| ctx.vocab.agent(a).is_some_and(|s| !s.role.is_adult()))
                .collect();
            let adult_present = occupants
                .iter()
                .any(|a| ctx.vocab.agent(a).is_some_and(|s| s.role.is_adult()));
            let bad = !kids.is_empty() && !adult_present;
            if bad && !self.unsupervised_rooms.contains(room) {
                self.unsupervised_rooms.insert(room.to_string());
                self.violations.push(ctx.index);
                self.details.push(format!(
                    "{} left unsupervised in the {} from event {}",
                    kids.join(", "),
                    display_name(room),
                    ctx.index
                ));
            } else if !bad {
                self.unsupervised_rooms.remove(room);
            }
        }
    }

    fn finish(self: Box<Self>, spec: &NormSpec) -> Judgement {
        if !self.violations.is_empty() {
            judgement(spec, Verdict::Violated, self.violations, self.details.join("; "))
        } else if self.applicable {
            judgement(
                spec,
                Verdict::NotViolated,
                vec![],
                "children in the workshop were always supervised".into(),
            )
        } else {
            judgement(
                spec,
                Verdict::NotApplicable,
                vec![],
                "no child ever enters a workshop".into(),
            )
        }
    }
}

// ---------------------------------------------------------------------------
// Norm 10: Father should not be disturbed while he is in his study room.
// ---------------------------------------------------------------------------

#[derive(Default)]
struct StudyRule {
    father_entered_study: bool,
    violations: Vec<usize>,
    details: Vec<String>,
}

impl RuleState for StudyRule {
    fn observe(&mut self, ctx: &RuleCtx<'_>) {
        let father = ctx.vocab.father().name.clone();
        if let EventKind::Enter { agent, room } = &ctx.event.kind {
            if !ctx.vocab.room(room).is_some_and(|r| r.is_study) {
                return;
            }
            if *agent == father {
                self.father_entered_study = true;
            } else {
                let occupants = ctx
                    .pre
                    .occupants(room, ctx.vocab)
                    .expect("room validated during replay");
                if occupants.contains(father.as_str()) {
                    self.violations.push(ctx.index);
                    self.details.push(format!(
                        "{agent} entered the {} at event {} while {father} was inside",
                        display_name(room),
                        ctx.index
                    ));
                }
            }
        }
    }

    fn finish(self: Box<Self>, spec: &NormSpec) -> Judgement {
        if !self.violations.is_empty() {
            judgement(spec, Verdict::Violated, self.violations, self.details.join("; "))
        } else if self.father_entered_study {
            judgement(
                spec,
                Verdict::NotViolated,
                vec![],
                "nobody entered the study while the father was inside".into(),
            )
        } else {
            judgement(
                spec,
                Verdict::NotApplicable,
                vec![],
                "the father never enters a study".into(),
            )
        }
    }
}

fn join(names: &BTreeSet<&str>) -> String {
    names.iter().copied().collect::<Vec<_>>().join(", ")
}
