use std::collections::{HashMap, HashSet};
use std::fmt;

use super::{memory_update, CounterSelector};
use crate::error::{Error, Result};
use crate::ext::Level;
use crate::graph::strongly_connected_components;
use crate::model::{ActionId, Cmdp, StateId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainNode {
    Pair { state: StateId, level: u64 },
    Sink,
}

/// The finite Markov chain (supports only) that a counter strategy induces
/// on `(state, level)` pairs reachable from the root.
#[derive(Debug, Clone)]
pub struct InducedChain {
    pub nodes: Vec<ChainNode>,
    /// Chosen action per node; `None` at the sink.
    pub actions: Vec<Option<ActionId>>,
    pub edges: Vec<Vec<usize>>,
    pub root: usize,
    /// Nodes where the selector had no applicable threshold.
    pub underflow_nodes: Vec<usize>,
}

impl InducedChain {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn sink(&self) -> Option<usize> {
        self.nodes.iter().position(|n| *n == ChainNode::Sink)
    }

    pub fn node_index(&self, state: StateId, level: u64) -> Option<usize> {
        self.nodes.iter().position(|n| *n == ChainNode::Pair { state, level })
    }
}

/// Build the chain reachable from `(s0, d)`.
///
/// Each node plays the selector's action for its level (falling back to the
/// order-first action on underflow). A step that exhausts the resource leads
/// to the absorbing sink.
pub fn induced_chain(model: &Cmdp, selector: &CounterSelector, s0: StateId, d: u64) -> Result<InducedChain> {
    if d > model.capacity() {
        return Err(Error::LoadOutOfRange { load: d, capacity: model.capacity() });
    }
    if selector.num_states() != model.num_states() {
        return Err(Error::InvalidStrategy("selector does not match the model".into()));
    }
    let mut index: HashMap<ChainNode, usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut intern = |node: ChainNode, nodes: &mut Vec<ChainNode>| -> usize {
        *index.entry(node).or_insert_with(|| {
            nodes.push(node);
            nodes.len() - 1
        })
    };
    let root = intern(ChainNode::Pair { state: s0, level: d }, &mut nodes);
    let mut actions = Vec::new();
    let mut edges = Vec::new();
    let mut underflow_nodes = Vec::new();

    let mut next = 0;
    while next < nodes.len() {
        let i = next;
        next += 1;
        let (state, level) = match nodes[i] {
            ChainNode::Sink => {
                actions.push(None);
                edges.push(vec![i]);
                continue;
            }
            ChainNode::Pair { state, level } => (state, level),
        };
        let lookup = selector
            .lookup(model, state, level)
            .ok_or_else(|| Error::InvalidModel(format!("state `{}` has no actions", model.state_name(state))))?;
        if lookup.underflow {
            underflow_nodes.push(i);
        }
        let a = lookup.action;
        let choice = model.require_choice(state, a)?;
        let mut out = Vec::new();
        match memory_update(model, Level::Units(level), state, a) {
            Level::Exhausted => out.push(intern(ChainNode::Sink, &mut nodes)),
            Level::Units(l) => {
                for t in model.succ_states(choice) {
                    out.push(intern(ChainNode::Pair { state: t, level: l }, &mut nodes));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        actions.push(Some(a));
        edges.push(out);
    }
    Ok(InducedChain { nodes, actions, edges, root, underflow_nodes })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    Safe,
    PositiveReach,
    BuchiAs,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Safe => "safe",
            Objective::PositiveReach => "positive-reach",
            Objective::BuchiAs => "buchi-as",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub objective: Objective,
    pub holds: bool,
    pub sink_reachable: bool,
    pub target_reachable: bool,
    pub bottom_components: usize,
    /// Bottom components without a target node.
    pub bottom_components_missing_target: usize,
}

/// Check `objective` on the chain. Every node of the chain is reachable from
/// its root, so reachability questions reduce to membership.
pub fn verify(chain: &InducedChain, targets: &[StateId], objective: Objective) -> Verdict {
    let targets: HashSet<StateId> = targets.iter().copied().collect();
    let is_target = |i: usize| matches!(chain.nodes[i], ChainNode::Pair { state, .. } if targets.contains(&state));
    let sink_reachable = chain.sink().is_some();
    let target_reachable = (0..chain.len()).any(is_target);

    let mut bottom_components = 0;
    let mut bottom_components_missing_target = 0;
    if objective == Objective::BuchiAs {
        let sccs = strongly_connected_components(chain.len(), |i| chain.edges[i].iter().copied());
        let mut comp = vec![0; chain.len()];
        for (c, members) in sccs.iter().enumerate() {
            for &v in members {
                comp[v] = c;
            }
        }
        for (c, members) in sccs.iter().enumerate() {
            let bottom = members.iter().all(|&v| chain.edges[v].iter().all(|&w| comp[w] == c));
            if bottom {
                bottom_components += 1;
                if !members.iter().any(|&v| is_target(v)) {
                    bottom_components_missing_target += 1;
                }
            }
        }
    }

    let holds = !sink_reachable
        && match objective {
            Objective::Safe => true,
            Objective::PositiveReach => target_reachable,
            Objective::BuchiAs => bottom_components_missing_target == 0,
        };
    Verdict { objective, holds, sink_reachable, target_reachable, bottom_components, bottom_components_missing_target }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::example_model;
    use crate::solvers::{buchi, SemanticsMode};

    #[test]
    fn buchi_selector_is_verified() {
        let m = example_model();
        let t = m.require_states(&["s2"]).unwrap();
        let res = buchi(&m, &t, SemanticsMode::Truncated).unwrap();
        let s1 = m.require_state("s1").unwrap();
        let chain = induced_chain(&m, &res.selector, s1, 2).unwrap();
        assert!(chain.sink().is_none());
        assert!(chain.underflow_nodes.is_empty());
        assert!(verify(&chain, &t, Objective::BuchiAs).holds);
    }

    #[test]
    fn always_a2_is_safe_but_never_reaches() {
        let m = example_model();
        let a2 = m.action_id("a2");
        let sel = CounterSelector::memoryless(&vec![a2; m.num_states()]);
        let s1 = m.require_state("s1").unwrap();
        let t = m.require_states(&["s2"]).unwrap();
        let chain = induced_chain(&m, &sel, s1, 2).unwrap();
        assert!(verify(&chain, &t, Objective::Safe).holds);
        assert!(!verify(&chain, &t, Objective::PositiveReach).holds);
    }

    #[test]
    fn empty_targets_fail_buchi() {
        let m = example_model();
        let t = m.require_states(&["s2"]).unwrap();
        let res = buchi(&m, &t, SemanticsMode::Truncated).unwrap();
        let chain = induced_chain(&m, &res.selector, StateId(0), 2).unwrap();
        assert!(!verify(&chain, &[], Objective::BuchiAs).holds);
    }

    #[test]
    fn too_little_load_reaches_the_sink() {
        let m = example_model();
        let a1 = m.action_id("a1");
        let sel = CounterSelector::memoryless(&vec![a1; m.num_states()]);
        let chain = induced_chain(&m, &sel, StateId(0), 4).unwrap();
        assert!(chain.sink().is_some());
        assert!(!verify(&chain, &[], Objective::Safe).holds);
    }
}
