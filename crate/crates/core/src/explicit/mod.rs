//! Explicit unfolding of the resource level into the state space.
//!
//! Node `(s, e)` stands for state `s` with `e` units left; one extra sink
//! node collects every step that runs out. The resulting MDP is finite and
//! its qualitative questions are answered by textbook graph algorithms, so
//! it serves as a reference for the fixed-point solvers.

mod mec;
mod oracle;

pub(crate) use oracle::almost_sure_buchi_rounds;

pub use mec::{mec_decomposition, mec_decomposition_restricted, Mec};
pub use oracle::{
    almost_sure_buchi_oracle, compare_with_solver, positive_reach_layers, positive_reach_oracle, safety_levels_oracle,
    Mismatch, WinningRegion,
};

use crate::error::{Error, Result};
use crate::ext::Level;
use crate::model::{step_level, ActionDoc, ActionId, Cmdp, CmdpDoc, StateId, SuccessorDoc};

pub const DEFAULT_NODE_LIMIT: u64 = 5_000_000;

#[derive(Debug, Clone)]
pub struct ExplicitMdp {
    num_states: usize,
    capacity: u64,
    reload: Vec<bool>,
    choice_start: Vec<usize>,
    choice_action: Vec<Option<ActionId>>,
    choice_cost: Vec<u64>,
    succ_start: Vec<usize>,
    succ: Vec<usize>,
    prob: Vec<f64>,
}

/// Number of nodes the unfolding of `model` would have.
pub fn node_estimate(model: &Cmdp) -> u128 {
    (model.capacity() as u128 + 1) * model.num_states() as u128 + 1
}

pub fn unfold(model: &Cmdp) -> Result<ExplicitMdp> {
    unfold_with_limit(model, DEFAULT_NODE_LIMIT)
}

pub fn unfold_with_limit(model: &Cmdp, limit: u64) -> Result<ExplicitMdp> {
    let estimate = node_estimate(model);
    if estimate > limit as u128 {
        return Err(Error::TooLarge { estimate, limit });
    }
    let n = model.num_states();
    let cap = model.capacity();
    let width = cap as usize + 1;
    let num_nodes = estimate as usize;
    let sink = num_nodes - 1;

    let mut choice_start = Vec::with_capacity(num_nodes + 1);
    let mut choice_action = Vec::new();
    let mut choice_cost = Vec::new();
    let mut succ_start = vec![0];
    let mut succ = Vec::new();
    let mut prob = Vec::new();

    for s in model.states() {
        let reload = model.is_reload(s);
        for e in 0..=cap {
            choice_start.push(choice_action.len());
            for c in model.choices(s) {
                choice_action.push(Some(c.action));
                choice_cost.push(c.consumption);
                match step_level(Level::Units(e), reload, c.consumption, cap) {
                    Level::Exhausted => {
                        succ.push(sink);
                        prob.push(1.0);
                    }
                    Level::Units(l) => {
                        for t in model.successors(c) {
                            succ.push(t.target.0 * width + l as usize);
                            prob.push(t.prob);
                        }
                    }
                }
                succ_start.push(succ.len());
            }
        }
    }
    choice_start.push(choice_action.len());
    choice_action.push(None);
    choice_cost.push(0);
    succ.push(sink);
    prob.push(1.0);
    succ_start.push(succ.len());
    choice_start.push(choice_action.len());

    Ok(ExplicitMdp {
        num_states: n,
        capacity: cap,
        reload: model.reload_mask().to_vec(),
        choice_start,
        choice_action,
        choice_cost,
        succ_start,
        succ,
        prob,
    })
}

impl ExplicitMdp {
    pub fn num_nodes(&self) -> usize {
        self.choice_start.len() - 1
    }

    pub fn num_choices(&self) -> usize {
        self.choice_action.len()
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn sink(&self) -> usize {
        self.num_nodes() - 1
    }

    pub fn is_reload(&self, s: StateId) -> bool {
        self.reload[s.0]
    }

    pub fn node(&self, s: StateId, level: u64) -> usize {
        assert!(level <= self.capacity);
        s.0 * (self.capacity as usize + 1) + level as usize
    }

    /// `(state, level)` of a node, `None` for the sink.
    pub fn decode(&self, node: usize) -> Option<(StateId, u64)> {
        if node == self.sink() {
            return None;
        }
        let width = self.capacity as usize + 1;
        Some((StateId(node / width), (node % width) as u64))
    }

    /// Global indices of the node's choices.
    pub fn choices(&self, node: usize) -> std::ops::Range<usize> {
        self.choice_start[node]..self.choice_start[node + 1]
    }

    /// The original action; `None` for the sink's self-loop.
    pub fn choice_action(&self, choice: usize) -> Option<ActionId> {
        self.choice_action[choice]
    }

    pub fn successors(&self, choice: usize) -> &[usize] {
        &self.succ[self.succ_start[choice]..self.succ_start[choice + 1]]
    }

    pub fn probabilities(&self, choice: usize) -> &[f64] {
        &self.prob[self.succ_start[choice]..self.succ_start[choice + 1]]
    }

    /// Owner node of every choice.
    pub(crate) fn choice_owner(&self) -> Vec<usize> {
        let mut owner = vec![0; self.num_choices()];
        for v in 0..self.num_nodes() {
            for k in self.choices(v) {
                owner[k] = v;
            }
        }
        owner
    }

    /// Predecessor choices of every node, CSR encoded.
    pub(crate) fn reverse(&self) -> (Vec<usize>, Vec<usize>) {
        let nodes = self.num_nodes();
        let mut start = vec![0usize; nodes + 1];
        for &t in &self.succ {
            start[t + 1] += 1;
        }
        for i in 0..nodes {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut preds = vec![0; self.succ.len()];
        for k in 0..self.num_choices() {
            for &t in self.successors(k) {
                preds[fill[t]] = k;
                fill[t] += 1;
            }
        }
        (start, preds)
    }

    pub fn node_name(&self, model: &Cmdp, node: usize) -> String {
        match self.decode(node) {
            Some((s, e)) => format!("{}@{e}", model.state_name(s)),
            None => "⊥".to_owned(),
        }
    }

    /// The unfolding in the model file format. Nodes are named `s@e`, the
    /// sink `⊥`. Consumption values are copied from the original actions
    /// for reference; the unfolding itself has no reload states.
    pub fn to_doc(&self, model: &Cmdp) -> CmdpDoc {
        let names: Vec<String> = (0..self.num_nodes()).map(|v| self.node_name(model, v)).collect();
        let mut actions = Vec::with_capacity(self.num_choices());
        for v in 0..self.num_nodes() {
            for k in self.choices(v) {
                let label = match self.choice_action(k) {
                    Some(a) => model.action_label(a).to_owned(),
                    None => "⊥".to_owned(),
                };
                let successors = self
                    .successors(k)
                    .iter()
                    .zip(self.probabilities(k))
                    .map(|(&t, &p)| SuccessorDoc { state: names[t].clone(), prob: p })
                    .collect();
                actions.push(ActionDoc {
                    source: names[v].clone(),
                    label,
                    consumption: self.choice_cost[k],
                    successors,
                });
            }
        }
        CmdpDoc { capacity: self.capacity, states: names, reload: Vec::new(), targets: None, actions }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{example_model, CmdpBuilder};

    #[test]
    fn node_counts() {
        let m = example_model();
        assert_eq!(unfold(&m).unwrap().num_nodes(), 106);
        let zero = m.with_capacity(0);
        assert_eq!(unfold(&zero).unwrap().num_nodes(), 6);
    }

    #[test]
    fn size_guard() {
        let m = example_model();
        match unfold_with_limit(&m, 100) {
            Err(Error::TooLarge { estimate, limit }) => assert_eq!((estimate, limit), (106, 100)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dynamics_follow_levels() {
        let m = example_model();
        let x = unfold(&m).unwrap();
        let s1 = m.require_state("s1").unwrap();
        let s5 = m.require_state("s5").unwrap();
        let a1 = m.action_id("a1").unwrap();
        // s1 at level 4 cannot afford a1.
        let v = x.node(s1, 4);
        let k = x.choices(v).find(|&k| x.choice_action(k) == Some(a1)).unwrap();
        assert_eq!(x.successors(k), &[x.sink()]);
        // Leaving s5 resets to 19 whatever the level.
        for e in [0, 7, 20] {
            let k = x.choices(x.node(s5, e)).next().unwrap();
            assert_eq!(x.successors(k), &[x.node(s1, 19)]);
        }
        assert_eq!(x.decode(x.node(s5, 3)), Some((s5, 3)));
        assert_eq!(x.decode(x.sink()), None);
    }

    #[test]
    fn dump_names_levels() {
        let mut b = CmdpBuilder::new(1);
        let s = b.add_reload_state("s").unwrap();
        b.add_action(s, "x", 1, [(s, 1.0)]).unwrap();
        let m = b.build();
        let doc = unfold(&m).unwrap().to_doc(&m);
        assert_eq!(doc.states, vec!["s@0", "s@1", "⊥"]);
        assert_eq!(doc.actions[0].successors[0].state, "s@0");
    }
}
