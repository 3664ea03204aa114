use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{memory_update, CounterSelector};
use crate::error::{Error, Result};
use crate::ext::Level;
use crate::model::{ActionId, Cmdp, StateId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEntry {
    pub state: StateId,
    /// The action that led here; `None` for the first entry.
    pub action: Option<ActionId>,
    /// Level on arrival at `state`.
    pub level: Level,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    StepBudget,
    Exhausted,
    /// The level at this state was below every threshold of its rule.
    SelectorUnderflow {
        state: StateId,
        level: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub entries: Vec<TraceEntry>,
    pub termination: Termination,
}

impl RunTrace {
    pub fn visits(&self, s: StateId) -> bool {
        self.entries.iter().any(|e| e.state == s)
    }

    pub fn visit_count(&self, targets: &[StateId]) -> usize {
        self.entries.iter().filter(|e| targets.contains(&e.state)).count()
    }

    pub fn steps(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn to_json(&self, model: &Cmdp) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "state": model.state_name(e.state),
                    "action": e.action.map(|a| model.action_label(a)),
                    "level": match e.level {
                        Level::Units(u) => json!(u),
                        Level::Exhausted => json!("bottom"),
                    },
                })
            })
            .collect();
        let termination = match self.termination {
            Termination::StepBudget => json!({"reason": "step-budget"}),
            Termination::Exhausted => json!({"reason": "exhausted"}),
            Termination::SelectorUnderflow { state, level } => {
                json!({"reason": "selector-underflow", "state": model.state_name(state), "level": level})
            }
        };
        json!({ "trace": entries, "termination": termination })
    }
}

/// Sample one run of the strategy encoded by `selector` with initial load
/// `d` in `s0`, for at most `steps` steps.
pub fn simulate(
    model: &Cmdp,
    selector: &CounterSelector,
    s0: StateId,
    d: u64,
    steps: usize,
    seed: u64,
) -> Result<RunTrace> {
    if d > model.capacity() {
        return Err(Error::LoadOutOfRange { load: d, capacity: model.capacity() });
    }
    if selector.num_states() != model.num_states() {
        return Err(Error::InvalidStrategy("selector does not match the model".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = vec![TraceEntry { state: s0, action: None, level: Level::Units(d) }];
    let mut state = s0;
    let mut level = d;

    for _ in 0..steps {
        let lookup = selector
            .lookup(model, state, level)
            .ok_or_else(|| Error::InvalidModel(format!("state `{}` has no actions", model.state_name(state))))?;
        if lookup.underflow {
            return Ok(RunTrace { entries, termination: Termination::SelectorUnderflow { state, level } });
        }
        let a = lookup.action;
        let next_level = memory_update(model, Level::Units(level), state, a);
        let choice = model.require_choice(state, a)?;
        let succ = model.successors(choice);
        let dist = WeightedIndex::new(succ.iter().map(|t| t.prob))
            .map_err(|e| Error::InvalidModel(format!("bad distribution: {e}")))?;
        state = succ[dist.sample(&mut rng)].target;
        entries.push(TraceEntry { state, action: Some(a), level: next_level });
        match next_level {
            Level::Units(l) => level = l,
            Level::Exhausted => return Ok(RunTrace { entries, termination: Termination::Exhausted }),
        }
    }
    Ok(RunTrace { entries, termination: Termination::StepBudget })
}
