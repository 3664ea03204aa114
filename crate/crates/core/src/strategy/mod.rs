//! Finite-counter strategies.
//!
//! A [`CounterSelector`] maps each state to a [`SelectionRule`]: a sorted
//! threshold → action table. Together with initial loads it defines a
//! strategy whose memory is the current resource level. The action at level
//! `m` is the one stored at the largest threshold `<= m`.

mod chain;
mod json;
mod sim;

use std::collections::BTreeMap;

pub use chain::{induced_chain, verify, ChainNode, InducedChain, Objective, Verdict};
pub use json::{export_strategy, import_strategy, StrategyDoc, ThresholdDoc};
pub use sim::{simulate, RunTrace, Termination, TraceEntry};

use crate::ext::{ExtNat, Level};
use crate::model::{ActionId, Cmdp, StateId};

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SelectionRule {
    entries: BTreeMap<u64, ActionId>,
}

impl SelectionRule {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the action at `threshold`, replacing any previous one.
    pub fn insert(&mut self, threshold: u64, action: ActionId) {
        self.entries.insert(threshold, action);
    }

    pub fn get(&self, threshold: u64) -> Option<ActionId> {
        self.entries.get(&threshold).copied()
    }

    /// The action at the largest threshold not above `level`.
    pub fn select(&self, level: u64) -> Option<ActionId> {
        self.entries.range(..=level).next_back().map(|(_, &a)| a)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, ActionId)> + '_ {
        self.entries.iter().map(|(&t, &a)| (t, a))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn min_threshold(&self) -> Option<u64> {
        self.entries.keys().next().copied()
    }
}

impl FromIterator<(u64, ActionId)> for SelectionRule {
    fn from_iter<I: IntoIterator<Item = (u64, ActionId)>>(iter: I) -> Self {
        SelectionRule { entries: iter.into_iter().collect() }
    }
}

/// Result of a rule lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lookup {
    pub action: ActionId,
    /// No threshold was low enough and the fallback was used.
    pub underflow: bool,
}

pub fn rule_lookup(rule: &SelectionRule, level: u64, fallback: ActionId) -> Lookup {
    match rule.select(level) {
        Some(action) => Lookup { action, underflow: false },
        None => Lookup { action: fallback, underflow: true },
    }
}

/// One step of the counter: leaving `s` with `a` from memory `m`.
///
/// Non-reload states subtract the consumption, reload states reset to
/// `cap - C`. Anything unaffordable, and any action not available in `s`,
/// yields `⊥`.
pub fn memory_update(model: &Cmdp, m: Level, s: StateId, a: ActionId) -> Level {
    match model.choice(s, a) {
        Some(c) => crate::model::step_level(m, model.is_reload(s), c.consumption, model.capacity()),
        None => Level::Exhausted,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterSelector {
    rules: Vec<SelectionRule>,
    initial: Vec<Option<ExtNat>>,
}

impl CounterSelector {
    pub fn empty(num_states: usize) -> Self {
        CounterSelector { rules: vec![SelectionRule::new(); num_states], initial: vec![None; num_states] }
    }

    /// A memoryless strategy as a selector with a single rule at threshold 0.
    pub fn memoryless(actions: &[Option<ActionId>]) -> Self {
        let mut sel = CounterSelector::empty(actions.len());
        for (s, a) in actions.iter().enumerate() {
            if let Some(a) = a {
                sel.rules[s].insert(0, *a);
            }
        }
        sel
    }

    pub fn num_states(&self) -> usize {
        self.rules.len()
    }

    pub fn rule(&self, s: StateId) -> &SelectionRule {
        &self.rules[s.0]
    }

    pub fn insert(&mut self, s: StateId, threshold: u64, action: ActionId) {
        self.rules[s.0].insert(threshold, action);
    }

    pub fn initial(&self, s: StateId) -> Option<ExtNat> {
        self.initial[s.0]
    }

    pub fn set_initial(&mut self, s: StateId, load: Option<ExtNat>) {
        self.initial[s.0] = load;
    }

    pub fn with_initial(mut self, loads: &[ExtNat]) -> Self {
        assert_eq!(loads.len(), self.initial.len());
        self.initial = loads.iter().copied().map(Some).collect();
        self
    }

    pub fn is_empty(&self) -> bool {
        self.rules.iter().all(SelectionRule::is_empty) && self.initial.iter().all(Option::is_none)
    }

    /// The action at state `s` with level `level`; the fallback is the
    /// order-first available action.
    pub fn lookup(&self, model: &Cmdp, s: StateId, level: u64) -> Option<Lookup> {
        let fallback = model.first_action(s)?;
        Some(rule_lookup(&self.rules[s.0], level, fallback))
    }
}
