use super::safety::{safe_masked, safety_selector_with};
use super::{arrival_requirement, truncate, SafetyResult, SemanticsMode, ValueVector};
use crate::error::Result;
use crate::ext::ExtNat;
use crate::model::{ActionId, Choice, Cmdp, StateId};
use crate::strategy::CounterSelector;

/// Something the solver noticed but did not treat as an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagnostic {
    /// A state with finite safety value has no safe action. Only possible in
    /// literal mode; the selector seed for the state is skipped.
    EmptySafeActions { state: StateId },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosReachResult {
    pub values: ValueVector,
    /// Selector with `initial` set to `values`.
    pub selector: CounterSelector,
    pub safe: SafetyResult,
    /// Changing sweeps of the main loop.
    pub iterations: usize,
    pub diagnostics: Vec<Diagnostic>,
}

/// Resource needed to play `a` in `s` so that one successor continues with
/// its `x` requirement while every other successor stays safe.
pub fn spr_value(
    model: &Cmdp,
    s: StateId,
    a: ActionId,
    x: &ValueVector,
    safe_values: &ValueVector,
    mode: SemanticsMode,
) -> Result<ExtNat> {
    let choice = model.require_choice(s, a)?;
    let req = arrival_requirement(safe_values, model.reload_mask(), mode);
    spr_with(model, choice, x.as_slice(), &req)
}

pub(crate) fn spr_with(model: &Cmdp, choice: &Choice, x: &[ExtNat], req: &[ExtNat]) -> Result<ExtNat> {
    let succ = model.successors(choice);
    // Largest and second largest requirement among the successors, by position.
    let mut top: Option<(usize, ExtNat)> = None;
    let mut second = ExtNat::ZERO;
    for (i, tr) in succ.iter().enumerate() {
        let v = req[tr.target.0];
        match top {
            Some((_, best)) if v <= best => second = second.max(v),
            Some((_, best)) => {
                second = best;
                top = Some((i, v));
            }
            None => top = Some((i, v)),
        }
    }
    let Some((top_idx, top_val)) = top else {
        return Ok(ExtNat::Inf);
    };
    let mut best = ExtNat::Inf;
    for (i, tr) in succ.iter().enumerate() {
        let others = if i == top_idx { second } else { top_val };
        best = best.min(x[tr.target.0].max(others));
    }
    best.add_u64(choice.consumption)
}

/// Minimal load from which a safe strategy reaches `targets` with positive
/// probability, together with a counter selector realising it.
pub fn positive_reachability(model: &Cmdp, targets: &[StateId], mode: SemanticsMode) -> Result<PosReachResult> {
    positive_reachability_masked(model, model.reload_mask(), targets, mode, None)
}

/// `B^0(y_T), B^1(y_T), ...` up to and including the fixpoint.
pub fn positive_reachability_iterates(
    model: &Cmdp,
    targets: &[StateId],
    mode: SemanticsMode,
) -> Result<Vec<ValueVector>> {
    let mut trace = Vec::new();
    positive_reachability_masked(model, model.reload_mask(), targets, mode, Some(&mut trace))?;
    Ok(trace)
}

pub(crate) fn positive_reachability_masked(
    model: &Cmdp,
    reload: &[bool],
    targets: &[StateId],
    mode: SemanticsMode,
    mut trace: Option<&mut Vec<ValueVector>>,
) -> Result<PosReachResult> {
    let n = model.num_states();
    let cap = model.capacity();
    let is_target = model.state_mask(targets);
    let safe = safe_masked(model, reload)?;
    let req = arrival_requirement(&safe.values, reload, mode);

    let (mut selector, missing) = safety_selector_with(model, reload, &safe.values, mode);
    let diagnostics: Vec<Diagnostic> =
        missing.into_iter().map(|state| Diagnostic::EmptySafeActions { state }).collect();

    let mut lower: Vec<ExtNat> = safe.values.as_slice().to_vec();
    truncate(&mut lower, reload, cap);

    let mut r: Vec<ExtNat> = (0..n).map(|i| if is_target[i] { req[i] } else { ExtNat::Inf }).collect();
    if let Some(t) = trace.as_deref_mut() {
        t.push(ValueVector::new(r.clone()));
    }

    let num_reloads = reload.iter().filter(|&&x| x).count();
    let bound = num_reloads + (num_reloads + 1) * (n - num_reloads + 1);
    let mut iterations = 0;
    let mut best_action: Vec<Option<ActionId>> = vec![None; n];
    loop {
        let old = r.clone();
        for s in model.states() {
            if is_target[s.0] {
                continue;
            }
            let mut c = ExtNat::Inf;
            let mut arg = None;
            for choice in model.choices(s) {
                let v = spr_with(model, choice, &old, &req)?;
                if v < c {
                    c = v;
                    arg = Some(choice.action);
                }
            }
            r[s.0] = c;
            best_action[s.0] = arg;
        }
        truncate(&mut r, reload, cap);
        for s in model.states() {
            let i = s.0;
            assert!(r[i] <= old[i], "positive reachability vector increased at state {i}");
            assert!(r[i] >= lower[i], "positive reachability vector dropped below Safe at state {i}");
            if r[i] < old[i] {
                if let (Some(th), Some(a)) = (r[i].finite(), best_action[i]) {
                    selector.insert(s, th, a);
                }
            }
        }
        if r == old {
            break;
        }
        iterations += 1;
        assert!(iterations <= bound, "positive reachability exceeded K = {bound} iterations");
        if let Some(t) = trace.as_deref_mut() {
            t.push(ValueVector::new(r.clone()));
        }
    }

    let values = ValueVector::new(r);
    let selector = selector.with_initial(values.as_slice());
    Ok(PosReachResult { values, selector, safe, iterations, diagnostics })
}
