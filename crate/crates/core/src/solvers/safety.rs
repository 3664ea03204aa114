use super::{arrival_requirement, cost_plus_max, Fixpoint, SemanticsMode, ValueVector};
use crate::error::Result;
use crate::ext::ExtNat;
use crate::model::{ActionId, Choice, Cmdp, StateId};
use crate::strategy::CounterSelector;

/// Minimal initial load that surely reaches a reload state in at least one
/// step, via the truncated operator (successor reloads count as 0) started
/// from the all-∞ vector.
pub fn min_init_cons(model: &Cmdp) -> Result<Fixpoint> {
    min_init_cons_masked(model, model.reload_mask(), None)
}

/// `G^0(∞), G^1(∞), ...` up to and including the fixpoint.
pub fn min_init_cons_iterates(model: &Cmdp) -> Result<Vec<ValueVector>> {
    let mut trace = Vec::new();
    min_init_cons_masked(model, model.reload_mask(), Some(&mut trace))?;
    Ok(trace)
}

pub(crate) fn min_init_cons_masked(
    model: &Cmdp,
    reload: &[bool],
    mut trace: Option<&mut Vec<ValueVector>>,
) -> Result<Fixpoint> {
    let n = model.num_states();
    let mut x = vec![ExtNat::Inf; n];
    if let Some(t) = trace.as_deref_mut() {
        t.push(ValueVector::new(x.clone()));
    }

    let mut iterations = 0;
    loop {
        let old = x.clone();
        let truncated = |t: StateId| if reload[t.0] { ExtNat::ZERO } else { old[t.0] };
        for s in model.states() {
            let mut c = ExtNat::Inf;
            for choice in model.choices(s) {
                c = c.min(cost_plus_max(choice.consumption, model.succ_states(choice), truncated)?);
            }
            if c < x[s.0] {
                x[s.0] = c;
            }
        }
        if x == old {
            break;
        }
        iterations += 1;
        assert!(iterations <= n, "min-init-cons iteration exceeded |S| = {n}");
        if let Some(t) = trace.as_deref_mut() {
            t.push(ValueVector::new(x.clone()));
        }
    }
    Ok(Fixpoint { values: ValueVector::new(x), iterations })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SafetyResult {
    /// Minimal safe initial load per state (∞ where none exists).
    pub values: ValueVector,
    /// Reload states that survived the pruning.
    pub reloads: Vec<StateId>,
    /// Number of pruning rounds that removed at least one reload state.
    pub removal_rounds: usize,
    /// Changing sweeps of each min-init-cons run, in order.
    pub inner_iterations: Vec<usize>,
}

/// Prune reload states that cannot reach surviving reloads within capacity,
/// then cap the final min-init-cons vector at the capacity.
pub fn safe(model: &Cmdp) -> Result<SafetyResult> {
    safe_masked(model, model.reload_mask())
}

pub(crate) fn safe_masked(model: &Cmdp, reload: &[bool]) -> Result<SafetyResult> {
    let cap = model.capacity();
    let mut rel = reload.to_vec();
    let total = rel.iter().filter(|&&r| r).count();
    let mut removal_rounds = 0;
    let mut inner_iterations = Vec::new();

    let mic = loop {
        let mic = min_init_cons_masked(model, &rel, None)?;
        inner_iterations.push(mic.iterations);
        let to_remove: Vec<usize> =
            (0..rel.len()).filter(|&r| rel[r] && !mic.values.as_slice()[r].le_u64(cap)).collect();
        if to_remove.is_empty() {
            break mic.values;
        }
        removal_rounds += 1;
        assert!(removal_rounds <= total, "safety pruning exceeded |R| = {total} rounds");
        for r in to_remove {
            rel[r] = false;
        }
    };

    Ok(SafetyResult {
        values: mic.cap_at(cap),
        reloads: (0..rel.len()).filter(|&r| rel[r]).map(StateId).collect(),
        removal_rounds,
        inner_iterations,
    })
}

/// Actions of `s` that keep the safety invariant.
///
/// Every action is safe where the safety value is ∞. Otherwise the cost plus
/// the worst successor requirement must fit into the state's own value, or
/// into the capacity at a reload state.
pub fn safe_actions(model: &Cmdp, safe_values: &ValueVector, s: StateId, mode: SemanticsMode) -> Vec<ActionId> {
    let req = arrival_requirement(safe_values, model.reload_mask(), mode);
    safe_actions_with(model, model.reload_mask(), safe_values, &req, s)
}

pub(crate) fn safe_actions_with(
    model: &Cmdp,
    reload: &[bool],
    safe_values: &ValueVector,
    req: &[ExtNat],
    s: StateId,
) -> Vec<ActionId> {
    model
        .choices(s)
        .iter()
        .filter(|c| is_safe_action(model, reload, safe_values, req, s, c))
        .map(|c| c.action)
        .collect()
}

fn is_safe_action(
    model: &Cmdp,
    reload: &[bool],
    safe_values: &ValueVector,
    req: &[ExtNat],
    s: StateId,
    c: &Choice,
) -> bool {
    let own = safe_values[s];
    if own == ExtNat::Inf {
        return true;
    }
    // Overflow means the requirement is certainly not met.
    let Ok(need) = cost_plus_max(c.consumption, model.succ_states(c), |t| req[t.0]) else {
        return false;
    };
    if reload[s.0] {
        need.le_u64(model.capacity())
    } else {
        need <= own
    }
}

/// One safe action per state with finite safety value, at threshold
/// `Safe(s)`, or 0 at reload states in truncated mode. The initial loads
/// are the safety values. States without a safe action are returned
/// separately (literal mode only).
pub fn safety_selector(
    model: &Cmdp,
    safe_values: &ValueVector,
    mode: SemanticsMode,
) -> (CounterSelector, Vec<StateId>) {
    safety_selector_with(model, model.reload_mask(), safe_values, mode)
}

pub(crate) fn safety_selector_with(
    model: &Cmdp,
    reload: &[bool],
    safe_values: &ValueVector,
    mode: SemanticsMode,
) -> (CounterSelector, Vec<StateId>) {
    let req = arrival_requirement(safe_values, reload, mode);
    let mut selector = CounterSelector::empty(model.num_states());
    let mut missing = Vec::new();
    for s in model.states() {
        let Some(v) = safe_values[s].finite() else {
            continue;
        };
        match safe_actions_with(model, reload, safe_values, &req, s).first() {
            Some(&a) => {
                let threshold = if mode == SemanticsMode::Truncated && reload[s.0] { 0 } else { v };
                selector.insert(s, threshold, a);
            }
            None => missing.push(s),
        }
    }
    (selector.with_initial(safe_values.as_slice()), missing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{example_model, CmdpBuilder};

    fn fin(v: &[u64]) -> Vec<ExtNat> {
        v.iter().map(|&x| ExtNat::Fin(x)).collect()
    }

    #[test]
    fn example_min_init_cons() {
        let m = example_model();
        let r = min_init_cons(&m).unwrap();
        assert_eq!(r.values.as_slice(), fin(&[2, 1, 5, 4, 3]).as_slice());
        assert!(r.iterations <= m.num_states());
    }

    #[test]
    fn no_reloads_means_no_finite_value() {
        let m = example_model();
        let m = m.restrict_reloads(&[]).unwrap();
        assert!(min_init_cons(&m).unwrap().values.iter().all(|v| *v == ExtNat::Inf));
        assert!(safe(&m).unwrap().values.iter().all(|v| *v == ExtNat::Inf));
    }

    #[test]
    fn reload_self_loop_costs_its_consumption() {
        let mut b = CmdpBuilder::new(10);
        let r = b.add_reload_state("r").unwrap();
        b.add_action(r, "loop", 4, [(r, 1.0)]).unwrap();
        let m = b.build();
        assert_eq!(min_init_cons(&m).unwrap().values[r], ExtNat::Fin(4));
    }

    #[test]
    fn example_safety() {
        let m = example_model();
        let r = safe(&m).unwrap();
        assert_eq!(r.values.as_slice(), fin(&[2, 1, 5, 4, 3]).as_slice());
        assert_eq!(r.reloads, m.reload_states());
        assert_eq!(r.removal_rounds, 0);
    }

    #[test]
    fn expensive_reload_is_pruned() {
        let mut b = CmdpBuilder::new(5);
        let r = b.add_reload_state("r").unwrap();
        let s = b.add_state("s").unwrap();
        b.add_action(r, "far", 6, [(r, 1.0)]).unwrap();
        b.add_action(s, "go", 1, [(r, 1.0)]).unwrap();
        let m = b.build();
        let res = safe(&m).unwrap();
        assert_eq!(res.values[r], ExtNat::Inf);
        assert_eq!(res.values[s], ExtNat::Inf);
        assert!(res.reloads.is_empty());
        assert_eq!(res.removal_rounds, 1);
    }

    #[test]
    fn example_safe_actions() {
        let m = example_model();
        let safe_v = safe(&m).unwrap().values;
        let s1 = m.require_state("s1").unwrap();
        let s2 = m.require_state("s2").unwrap();
        let a1 = m.action_id("a1").unwrap();
        let a2 = m.action_id("a2").unwrap();
        assert_eq!(safe_actions(&m, &safe_v, s1, SemanticsMode::Truncated), vec![a2]);
        assert_eq!(safe_actions(&m, &safe_v, s2, SemanticsMode::Truncated), vec![a1, a2]);
        // Read literally, s5 still needs 3 units on arrival, which s1 cannot afford.
        assert!(safe_actions(&m, &safe_v, s1, SemanticsMode::Literal).is_empty());
    }

    #[test]
    fn unsafe_states_allow_everything() {
        let mut b = CmdpBuilder::new(5);
        let s = b.add_state("s").unwrap();
        b.add_action(s, "x", 1, [(s, 1.0)]).unwrap();
        b.add_action(s, "y", 2, [(s, 1.0)]).unwrap();
        let m = b.build();
        let v = safe(&m).unwrap().values;
        assert_eq!(safe_actions(&m, &v, s, SemanticsMode::Truncated).len(), 2);
    }
}
