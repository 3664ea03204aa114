//! The consumption MDP: states, per-state actions with consumption and
//! successor distributions, reload states and a capacity.
//!
//! Actions are stored per state; only available actions exist. Every
//! iteration over a state's actions follows the global label order (order of
//! first appearance in the input), which is also the tie-breaking order of
//! every argmin in the solvers.

mod history;
mod json;
mod validate;

use std::collections::HashMap;
use std::fmt;

pub(crate) use history::step_level;
pub use history::{consumption, energy_level, History};
pub use json::{ActionDoc, CmdpDoc, Instance, SuccessorDoc};
pub use validate::{validate, Rule, ValidationReport, Violation, PROBABILITY_TOLERANCE};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionId(pub usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl ActionId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub target: StateId,
    pub prob: f64,
}

/// One available action of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Choice {
    pub action: ActionId,
    pub consumption: u64,
    start: usize,
    end: usize,
}

#[derive(Debug, Clone)]
pub struct Cmdp {
    state_names: Vec<String>,
    state_lookup: HashMap<String, StateId>,
    labels: Vec<String>,
    label_lookup: HashMap<String, ActionId>,
    choice_start: Vec<usize>,
    choices: Vec<Choice>,
    transitions: Vec<Transition>,
    reload: Vec<bool>,
    capacity: u64,
}

impl Cmdp {
    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = StateId> + Clone {
        (0..self.state_names.len()).map(StateId)
    }

    pub fn num_choices(&self) -> usize {
        self.choices.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.state_names[s.0]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_lookup.get(name).copied()
    }

    pub fn require_state(&self, name: &str) -> Result<StateId> {
        self.state_id(name).ok_or_else(|| Error::UnknownState(name.to_owned()))
    }

    /// Resolve a list of names; the result is sorted and deduplicated.
    pub fn require_states<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<StateId>> {
        let mut out = names.iter().map(|n| self.require_state(n.as_ref())).collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn action_label(&self, a: ActionId) -> &str {
        &self.labels[a.0]
    }

    pub fn action_id(&self, label: &str) -> Option<ActionId> {
        self.label_lookup.get(label).copied()
    }

    pub fn is_reload(&self, s: StateId) -> bool {
        self.reload[s.0]
    }

    pub fn reload_mask(&self) -> &[bool] {
        &self.reload
    }

    pub fn reload_states(&self) -> Vec<StateId> {
        self.states().filter(|&s| self.reload[s.0]).collect()
    }

    pub fn num_reloads(&self) -> usize {
        self.reload.iter().filter(|&&r| r).count()
    }

    /// Available actions of `s`, in label order.
    pub fn choices(&self, s: StateId) -> &[Choice] {
        &self.choices[self.choice_start[s.0]..self.choice_start[s.0 + 1]]
    }

    pub fn choice(&self, s: StateId, a: ActionId) -> Option<&Choice> {
        self.choices(s).iter().find(|c| c.action == a)
    }

    pub fn require_choice(&self, s: StateId, a: ActionId) -> Result<&Choice> {
        self.choice(s, a).ok_or_else(|| Error::ActionUnavailable {
            state: self.state_name(s).to_owned(),
            action: self.action_label(a).to_owned(),
        })
    }

    /// The support of a choice together with its probabilities.
    pub fn successors(&self, choice: &Choice) -> &[Transition] {
        &self.transitions[choice.start..choice.end]
    }

    pub fn succ_states<'a>(&'a self, choice: &Choice) -> impl ExactSizeIterator<Item = StateId> + Clone + 'a {
        self.successors(choice).iter().map(|t| t.target)
    }

    /// The order-first available action of `s`.
    pub fn first_action(&self, s: StateId) -> Option<ActionId> {
        self.choices(s).first().map(|c| c.action)
    }

    pub fn max_consumption(&self) -> u64 {
        self.choices.iter().map(|c| c.consumption).max().unwrap_or(0)
    }

    pub fn state_mask(&self, states: &[StateId]) -> Vec<bool> {
        let mut mask = vec![false; self.num_states()];
        for s in states {
            mask[s.0] = true;
        }
        mask
    }

    /// `M(R')`: the same model with the reload set replaced by `subset`.
    pub fn restrict_reloads(&self, subset: &[StateId]) -> Result<Cmdp> {
        let mut mask = vec![false; self.num_states()];
        for &s in subset {
            if s.0 >= self.num_states() {
                return Err(Error::UnknownState(s.to_string()));
            }
            if !self.reload[s.0] {
                return Err(Error::InvalidModel(format!(
                    "state `{}` is not a reload state and cannot be kept as one",
                    self.state_name(s)
                )));
            }
            mask[s.0] = true;
        }
        Ok(self.with_reload_mask(mask))
    }

    /// Replace the reload set without checking it against the current one.
    pub fn with_reload_mask(&self, mask: Vec<bool>) -> Cmdp {
        assert_eq!(mask.len(), self.num_states());
        Cmdp { reload: mask, ..self.clone() }
    }

    pub fn with_capacity(&self, capacity: u64) -> Cmdp {
        Cmdp { capacity, ..self.clone() }
    }
}

struct PendingChoice {
    action: ActionId,
    consumption: u64,
    successors: Vec<Transition>,
}

/// Incremental construction of a [`Cmdp`].
///
/// The builder rejects structural errors (unknown or duplicate names, an
/// action declared twice for one state). Semantic rules such as distribution
/// sums or the decreasing property are left to [`validate`].
pub struct CmdpBuilder {
    capacity: u64,
    state_names: Vec<String>,
    state_lookup: HashMap<String, StateId>,
    labels: Vec<String>,
    label_lookup: HashMap<String, ActionId>,
    reload: Vec<bool>,
    pending: Vec<Vec<PendingChoice>>,
}

impl CmdpBuilder {
    pub fn new(capacity: u64) -> Self {
        CmdpBuilder {
            capacity,
            state_names: Vec::new(),
            state_lookup: HashMap::new(),
            labels: Vec::new(),
            label_lookup: HashMap::new(),
            reload: Vec::new(),
            pending: Vec::new(),
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> Result<StateId> {
        let name = name.into();
        if self.state_lookup.contains_key(&name) {
            return Err(Error::InvalidModel(format!("state `{name}` declared twice")));
        }
        let id = StateId(self.state_names.len());
        self.state_lookup.insert(name.clone(), id);
        self.state_names.push(name);
        self.reload.push(false);
        self.pending.push(Vec::new());
        Ok(id)
    }

    pub fn add_reload_state(&mut self, name: impl Into<String>) -> Result<StateId> {
        let id = self.add_state(name)?;
        self.reload[id.0] = true;
        Ok(id)
    }

    pub fn set_reload(&mut self, s: StateId, reload: bool) {
        self.reload[s.0] = reload;
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_lookup.get(name).copied()
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.state_names[s.0]
    }

    /// Interns an action label; the first call fixes its position in the order.
    pub fn label(&mut self, label: &str) -> ActionId {
        if let Some(&id) = self.label_lookup.get(label) {
            return id;
        }
        let id = ActionId(self.labels.len());
        self.labels.push(label.to_owned());
        self.label_lookup.insert(label.to_owned(), id);
        id
    }

    pub fn add_action(
        &mut self,
        source: StateId,
        label: &str,
        consumption: u64,
        successors: impl IntoIterator<Item = (StateId, f64)>,
    ) -> Result<ActionId> {
        if source.0 >= self.state_names.len() {
            return Err(Error::UnknownState(source.to_string()));
        }
        let action = self.label(label);
        if self.pending[source.0].iter().any(|p| p.action == action) {
            return Err(Error::InvalidModel(format!(
                "action `{label}` declared twice for state `{}`",
                self.state_names[source.0]
            )));
        }
        let mut list: Vec<Transition> = Vec::new();
        for (target, prob) in successors {
            if target.0 >= self.state_names.len() {
                return Err(Error::UnknownState(target.to_string()));
            }
            if list.iter().any(|t| t.target == target) {
                return Err(Error::InvalidModel(format!(
                    "successor `{}` listed twice for action `{label}` in state `{}`",
                    self.state_names[target.0], self.state_names[source.0]
                )));
            }
            list.push(Transition { target, prob });
        }
        self.pending[source.0].push(PendingChoice { action, consumption, successors: list });
        Ok(action)
    }

    pub fn build(self) -> Cmdp {
        let n = self.state_names.len();
        let mut choice_start = Vec::with_capacity(n + 1);
        let mut choices = Vec::new();
        let mut transitions = Vec::new();
        for mut list in self.pending {
            choice_start.push(choices.len());
            list.sort_by_key(|p| p.action);
            for p in list {
                let start = transitions.len();
                transitions.extend(p.successors);
                choices.push(Choice { action: p.action, consumption: p.consumption, start, end: transitions.len() });
            }
        }
        choice_start.push(choices.len());
        Cmdp {
            state_names: self.state_names,
            state_lookup: self.state_lookup,
            labels: self.labels,
            label_lookup: self.label_lookup,
            choice_start,
            choices,
            transitions,
            reload: self.reload,
            capacity: self.capacity,
        }
    }
}

/// The running example: five states, reloads `s2` and `s5`, capacity 20.
///
/// `s1 -a1(5)-> {s2: 1/2, s3: 1/2}`, `s1 -a2(2)-> s5`, and every other state
/// has both actions behaving identically: `s2 -(1)-> s2`, `s3 -(1)-> s4`,
/// `s4 -(2)-> s1`, `s5 -(1)-> s1`.
pub fn example_model() -> Cmdp {
    let mut b = CmdpBuilder::new(20);
    let s: Vec<StateId> = (1..=5).map(|i| b.add_state(format!("s{i}")).unwrap()).collect();
    b.set_reload(s[1], true);
    b.set_reload(s[4], true);
    b.add_action(s[0], "a1", 5, [(s[1], 0.5), (s[2], 0.5)]).unwrap();
    b.add_action(s[0], "a2", 2, [(s[4], 1.0)]).unwrap();
    for (from, to, cost) in [(1, 1, 1), (2, 3, 1), (3, 0, 2), (4, 0, 1)] {
        for label in ["a1", "a2"] {
            b.add_action(s[from], label, cost, [(s[to], 1.0)]).unwrap();
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choices_follow_label_order() {
        let mut b = CmdpBuilder::new(3);
        let s = b.add_state("s").unwrap();
        let t = b.add_state("t").unwrap();
        b.add_action(t, "x", 1, [(s, 1.0)]).unwrap();
        b.add_action(s, "y", 1, [(t, 1.0)]).unwrap();
        b.add_action(s, "x", 2, [(t, 1.0)]).unwrap();
        let m = b.build();
        let labels: Vec<&str> = m.choices(s).iter().map(|c| m.action_label(c.action)).collect();
        assert_eq!(labels, ["x", "y"]);
        assert_eq!(m.first_action(s), m.action_id("x"));
    }

    #[test]
    fn duplicate_declarations_rejected() {
        let mut b = CmdpBuilder::new(3);
        let s = b.add_state("s").unwrap();
        assert!(b.add_state("s").is_err());
        b.add_action(s, "a", 1, [(s, 1.0)]).unwrap();
        assert!(b.add_action(s, "a", 1, [(s, 1.0)]).is_err());
        assert!(b.add_action(s, "b", 1, [(s, 0.5), (s, 0.5)]).is_err());
    }

    #[test]
    fn restrict_reloads_keeps_everything_else() {
        let m = example_model();
        let s2 = m.require_state("s2").unwrap();
        let s5 = m.require_state("s5").unwrap();

        let same = m.restrict_reloads(&[s2, s5]).unwrap();
        assert_eq!(same.reload_mask(), m.reload_mask());

        let only_s5 = m.restrict_reloads(&[s5]).unwrap();
        assert!(!only_s5.is_reload(s2));
        assert!(only_s5.is_reload(s5));
        assert_eq!(only_s5.num_choices(), m.num_choices());

        let none = m.restrict_reloads(&[]).unwrap();
        assert_eq!(none.num_reloads(), 0);
    }

    #[test]
    fn restrict_reloads_rejects_non_reload_states() {
        let m = example_model();
        let s1 = m.require_state("s1").unwrap();
        assert!(matches!(m.restrict_reloads(&[s1]), Err(Error::InvalidModel(_))));
    }
}
