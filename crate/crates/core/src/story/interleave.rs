//! Randomized topological sort of task actions.
//!
//! The partial order has exactly two kinds of constraints: each agent's
//! concatenated per-task chain order is preserved, and each task's
//! observations follow that task's first action. At every step the next
//! event is drawn uniformly from the ready set, so any linear extension
//! can be produced.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::CoreError;
use crate::story::task::TaskScript;
use crate::world::EventKind;

/// Kahn's algorithm with a uniformly sampled ready set.
pub(crate) fn random_topological_order<R: Rng>(
    node_count: usize,
    edges: &[(usize, usize)],
    rng: &mut R,
) -> Result<Vec<usize>, CoreError> {
    let mut indegree = vec![0usize; node_count];
    let mut successors: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for &(from, to) in edges {
        indegree[to] += 1;
        successors[from].push(to);
    }
    let mut ready: Vec<usize> = (0..node_count).filter(|&n| indegree[n] == 0).collect();
    let mut order = Vec::with_capacity(node_count);
    while !ready.is_empty() {
        let pick = rng.gen_range(0..ready.len());
        let node = ready.swap_remove(pick);
        order.push(node);
        for &succ in &successors[node] {
            indegree[succ] -= 1;
            if indegree[succ] == 0 {
                ready.push(succ);
            }
        }
    }
    if order.len() != node_count {
        return Err(CoreError::InterleaveCycle {
            emitted: order.len(),
            total: node_count,
        });
    }
    Ok(order)
}

/// Interleaves the tasks' chains and observations into one event sequence.
pub fn interleave<R: Rng>(
    tasks: &[TaskScript],
    rng: &mut R,
) -> Result<Vec<EventKind>, CoreError> {
    let mut nodes: Vec<&EventKind> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    // Last node per agent, carried across tasks so an agent's full action
    // sequence stays in task order.
    let mut agent_tail: BTreeMap<&str, usize> = BTreeMap::new();

    for task in tasks {
        let mut anchor: Option<usize> = None;
        for chain in &task.chains {
            for action in &chain.actions {
                let node = nodes.len();
                nodes.push(action);
                if let Some(prev) = agent_tail.get(chain.agent.as_str()) {
                    edges.push((*prev, node));
                }
                agent_tail.insert(chain.agent.as_str(), node);
                anchor.get_or_insert(node);
            }
        }
        for observation in &task.observations {
            let node = nodes.len();
            nodes.push(observation);
            if let Some(anchor) = anchor {
                edges.push((anchor, node));
            }
        }
    }

    let order = random_topological_order(nodes.len(), &edges, rng)?;
    Ok(order.into_iter().map(|n| nodes[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::story::task::AgentChain;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn enter(agent: &str, room: &str) -> EventKind {
        EventKind::Enter {
            agent: agent.into(),
            room: room.into(),
        }
    }

    fn exit(agent: &str, room: &str) -> EventKind {
        EventKind::Exit {
            agent: agent.into(),
            room: room.into(),
        }
    }

    #[test]
    fn single_chain_is_identity() {
        let task = TaskScript {
            task_id: 0,
            chains: vec![AgentChain {
                agent: "Emily".into(),
                actions: vec![
                    enter("Emily", "study"),
                    exit("Emily", "study"),
                    enter("Emily", "kitchen"),
                ],
            }],
            observations: vec![],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let events = interleave(&[task.clone()], &mut rng).unwrap();
        assert_eq!(events, task.chains[0].actions);
    }

    #[test]
    fn cycle_guard_fires_on_bad_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = random_topological_order(2, &[(0, 1), (1, 0)], &mut rng).unwrap_err();
        assert!(matches!(err, CoreError::InterleaveCycle { emitted: 0, total: 2 }));
    }

    #[test]
    fn observations_follow_first_task_action() {
        let task = TaskScript {
            task_id: 0,
            chains: vec![AgentChain {
                agent: "Ann".into(),
                actions: vec![enter("Ann", "study"), exit("Ann", "study")],
            }],
            observations: vec![EventKind::Observe {
                item: "hat".into(),
                container: "white_crate".into(),
            }],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let events = interleave(&[task.clone()], &mut rng).unwrap();
            let obs_pos = events
                .iter()
                .position(|e| matches!(e, EventKind::Observe { .. }))
                .unwrap();
            let first_action = events
                .iter()
                .position(|e| matches!(e, EventKind::Enter { .. }))
                .unwrap();
            assert!(obs_pos > first_action);
        }
    }

    #[test]
    fn cross_task_agent_order_preserved() {
        let t0 = TaskScript {
            task_id: 0,
            chains: vec![AgentChain {
                agent: "Ann".into(),
                actions: vec![enter("Ann", "study"), exit("Ann", "study")],
            }],
            observations: vec![],
        };
        let t1 = TaskScript {
            task_id: 1,
            chains: vec![AgentChain {
                agent: "Ann".into(),
                actions: vec![enter("Ann", "kitchen"), exit("Ann", "kitchen")],
            }],
            observations: vec![],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let events = interleave(&[t0.clone(), t1.clone()], &mut rng).unwrap();
            let expected = [
                enter("Ann", "study"),
                exit("Ann", "study"),
                enter("Ann", "kitchen"),
                exit("Ann", "kitchen"),
            ];
            assert_eq!(events, expected);
        }
    }
}
