//! Fixed-point solvers: minimum-cost reachability, minimal initial
//! consumption, safety, safe positive reachability and almost-sure Büchi.
//!
//! All iterations are Jacobi style: every sweep reads only the previous
//! vector. Argmins break ties by the model's action order. Iteration counts
//! reported by the solvers count sweeps that changed the vector; the
//! confirming sweep that detects the fixpoint is not counted.

mod buchi;
mod minreach;
mod posreach;
mod safety;

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use serde_json::{Map, Value};

pub use buchi::{buchi, decide, BuchiResult, Decision};
pub use minreach::{
    duplicate_model, min_reach, min_reach_iterates, min_reach_plus_oracle, min_reach_strategy, Duplicated,
};
pub use posreach::{positive_reachability, positive_reachability_iterates, spr_value, Diagnostic, PosReachResult};
pub use safety::{min_init_cons, min_init_cons_iterates, safe, safe_actions, safety_selector, SafetyResult};

use crate::error::{Error, Result};
use crate::ext::ExtNat;
use crate::model::{Cmdp, StateId};

/// How safety requirements of reload successors enter the local checks.
///
/// `Truncated` treats a reload state with finite safety value as needing
/// zero units on arrival (its level is reset on departure). `Literal` uses
/// the raw safety vector everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SemanticsMode {
    #[default]
    Truncated,
    Literal,
}

impl fmt::Display for SemanticsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SemanticsMode::Truncated => "truncated",
            SemanticsMode::Literal => "literal",
        })
    }
}

impl FromStr for SemanticsMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "truncated" => Ok(SemanticsMode::Truncated),
            "literal" => Ok(SemanticsMode::Literal),
            other => Err(format!("unknown semantics `{other}` (expected truncated or literal)")),
        }
    }
}

/// One extended natural per state, in model state order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValueVector(Vec<ExtNat>);

impl ValueVector {
    pub fn new(values: Vec<ExtNat>) -> Self {
        ValueVector(values)
    }

    pub fn filled(n: usize, value: ExtNat) -> Self {
        ValueVector(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[ExtNat] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<ExtNat> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ExtNat> {
        self.0.iter()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &ValueVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Values above `cap` become ∞, the rest stay.
    pub fn cap_at(&self, cap: u64) -> ValueVector {
        ValueVector(self.0.iter().map(|&v| if v.le_u64(cap) { v } else { ExtNat::Inf }).collect())
    }

    pub fn to_json(&self, model: &Cmdp) -> Value {
        let mut map = Map::new();
        for s in model.states() {
            map.insert(model.state_name(s).to_owned(), serde_json::to_value(self[s]).expect("ExtNat serializes"));
        }
        Value::Object(map)
    }

    pub fn from_json(model: &Cmdp, value: &Value) -> Result<ValueVector> {
        let map = value.as_object().ok_or_else(|| Error::InvalidModel("value vector must be a JSON object".into()))?;
        let mut out = vec![ExtNat::Inf; model.num_states()];
        for (name, v) in map {
            let s = model.require_state(name)?;
            out[s.0] = serde_json::from_value(v.clone())?;
        }
        Ok(ValueVector(out))
    }
}

impl Index<StateId> for ValueVector {
    type Output = ExtNat;

    fn index(&self, s: StateId) -> &ExtNat {
        &self.0[s.0]
    }
}

impl fmt::Display for ValueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// A fixpoint vector together with the number of changing sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixpoint {
    pub values: ValueVector,
    pub iterations: usize,
}

/// `C + max_t x(t)` over a successor list, ∞ if any successor is ∞.
pub(crate) fn cost_plus_max(
    consumption: u64,
    succ: impl Iterator<Item = StateId>,
    value: impl Fn(StateId) -> ExtNat,
) -> Result<ExtNat> {
    let worst = succ.map(value).max().unwrap_or(ExtNat::ZERO);
    worst.add_u64(consumption)
}

/// Safety requirement on arrival at each state for the given semantics.
pub(crate) fn arrival_requirement(safe: &ValueVector, reload: &[bool], mode: SemanticsMode) -> Vec<ExtNat> {
    safe.iter()
        .zip(reload)
        .map(|(&v, &r)| match mode {
            SemanticsMode::Truncated if r && v.is_finite() => ExtNat::ZERO,
            _ => v,
        })
        .collect()
}

/// Two-sided truncation: ∞ above capacity, 0 at reload states otherwise.
pub(crate) fn truncate(values: &mut [ExtNat], reload: &[bool], cap: u64) {
    for (v, &r) in values.iter_mut().zip(reload) {
        if !v.le_u64(cap) {
            *v = ExtNat::Inf;
        } else if r {
            *v = ExtNat::ZERO;
        }
    }
}
