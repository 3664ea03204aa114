use super::{ActionId, Cmdp, StateId};
use crate::error::{Error, Result};
use crate::ext::{ExtNat, Level};

/// A finite path `s1 a1 s2 ... sn` whose steps respect the successor supports.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct History {
    states: Vec<StateId>,
    actions: Vec<ActionId>,
}

impl History {
    pub fn new(model: &Cmdp, states: Vec<StateId>, actions: Vec<ActionId>) -> Result<History> {
        if states.len() != actions.len() + 1 {
            return Err(Error::InvalidHistory(format!(
                "{} states cannot alternate with {} actions",
                states.len(),
                actions.len()
            )));
        }
        for (i, &a) in actions.iter().enumerate() {
            let (s, t) = (states[i], states[i + 1]);
            let choice = model.require_choice(s, a)?;
            if !model.succ_states(choice).any(|x| x == t) {
                return Err(Error::InvalidHistory(format!(
                    "`{}` is not a successor of `{}` under `{}`",
                    model.state_name(t),
                    model.state_name(s),
                    model.action_label(a)
                )));
            }
        }
        Ok(History { states, actions })
    }

    pub fn single(s: StateId) -> History {
        History { states: vec![s], actions: Vec::new() }
    }

    /// Parses a whitespace-separated `s1 a1 s2 ...` sequence.
    pub fn parse(model: &Cmdp, text: &str) -> Result<History> {
        let mut states = Vec::new();
        let mut actions = Vec::new();
        for (i, tok) in text.split_whitespace().enumerate() {
            if i % 2 == 0 {
                states.push(model.require_state(tok)?);
            } else {
                actions.push(model.action_id(tok).ok_or_else(|| Error::UnknownAction(tok.to_owned()))?);
            }
        }
        if states.is_empty() {
            return Err(Error::InvalidHistory("empty history".into()));
        }
        History::new(model, states, actions)
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn actions(&self) -> &[ActionId] {
        &self.actions
    }

    /// Number of actions.
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn first(&self) -> StateId {
        self.states[0]
    }

    pub fn last(&self) -> StateId {
        *self.states.last().expect("history has at least one state")
    }

    /// The prefix with `steps` actions.
    pub fn prefix(&self, steps: usize) -> History {
        History { states: self.states[..=steps].to_vec(), actions: self.actions[..steps].to_vec() }
    }

    /// The suffix starting at the state with index `from`.
    pub fn suffix(&self, from: usize) -> History {
        History { states: self.states[from..].to_vec(), actions: self.actions[from..].to_vec() }
    }

    /// Joint path `self ⊙ other`; requires `last(self) = first(other)`.
    pub fn join(&self, other: &History) -> Result<History> {
        if self.last() != other.first() {
            return Err(Error::InvalidHistory("joined histories do not meet".into()));
        }
        let mut states = self.states.clone();
        states.extend_from_slice(&other.states[1..]);
        let mut actions = self.actions.clone();
        actions.extend_from_slice(&other.actions);
        Ok(History { states, actions })
    }

    pub fn repeat(&self, times: usize) -> Result<History> {
        let mut out = History::single(self.first());
        for _ in 0..times {
            out = out.join(self)?;
        }
        Ok(out)
    }
}

/// One step of the level dynamics: leaving `s` with an action of cost `cost`.
pub(crate) fn step_level(level: Level, reload: bool, cost: u64, capacity: u64) -> Level {
    match level {
        Level::Exhausted => Level::Exhausted,
        Level::Units(m) if !reload => {
            if cost <= m {
                Level::Units(m - cost)
            } else {
                Level::Exhausted
            }
        }
        Level::Units(_) => {
            if cost <= capacity {
                Level::Units(capacity - cost)
            } else {
                Level::Exhausted
            }
        }
    }
}

/// The resource level after `history` when starting with `initial_load`.
pub fn energy_level(model: &Cmdp, history: &History, initial_load: u64) -> Result<Level> {
    if initial_load > model.capacity() {
        return Err(Error::LoadOutOfRange { load: initial_load, capacity: model.capacity() });
    }
    let mut level = Level::Units(initial_load);
    for (i, &a) in history.actions.iter().enumerate() {
        let s = history.states[i];
        let choice = model.require_choice(s, a)?;
        level = step_level(level, model.is_reload(s), choice.consumption, model.capacity());
    }
    Ok(level)
}

/// Total consumption along `history`, ignoring reloads.
pub fn consumption(model: &Cmdp, history: &History) -> Result<ExtNat> {
    let mut total = ExtNat::ZERO;
    for (i, &a) in history.actions.iter().enumerate() {
        total = total.add_u64(model.require_choice(history.states[i], a)?.consumption)?;
    }
    Ok(total)
}
