use super::{cost_plus_max, Fixpoint, ValueVector};
use crate::error::Result;
use crate::ext::ExtNat;
use crate::model::{ActionId, Cmdp, CmdpBuilder, StateId};

/// Minimum cost to surely reach `targets`: iterate the Bellman-style
/// min-max operator from `0` on targets and `∞` elsewhere.
pub fn min_reach(model: &Cmdp, targets: &[StateId]) -> Result<Fixpoint> {
    min_reach_run(model, targets, None)
}

/// `F^0(x_T), F^1(x_T), ...` up to and including the fixpoint.
pub fn min_reach_iterates(model: &Cmdp, targets: &[StateId]) -> Result<Vec<ValueVector>> {
    let mut trace = Vec::new();
    min_reach_run(model, targets, Some(&mut trace))?;
    Ok(trace)
}

fn min_reach_run(model: &Cmdp, targets: &[StateId], mut trace: Option<&mut Vec<ValueVector>>) -> Result<Fixpoint> {
    let n = model.num_states();
    let is_target = model.state_mask(targets);
    let mut x: Vec<ExtNat> = is_target.iter().map(|&t| if t { ExtNat::ZERO } else { ExtNat::Inf }).collect();
    if let Some(t) = trace.as_deref_mut() {
        t.push(ValueVector::new(x.clone()));
    }

    let mut iterations = 0;
    loop {
        let old = x.clone();
        for s in model.states() {
            if is_target[s.0] {
                continue;
            }
            let mut best = ExtNat::Inf;
            for c in model.choices(s) {
                best = best.min(cost_plus_max(c.consumption, model.succ_states(c), |t| old[t.0])?);
            }
            x[s.0] = best;
        }
        if x == old {
            break;
        }
        iterations += 1;
        assert!(iterations <= n, "min-reach iteration exceeded |S| = {n}");
        if let Some(t) = trace.as_deref_mut() {
            t.push(ValueVector::new(x.clone()));
        }
    }
    Ok(Fixpoint { values: ValueVector::new(x), iterations })
}

/// A memoryless strategy attaining the min-reach values.
///
/// Targets get rank 0. Rank `i + 1` goes to unranked states that have a good
/// action (`C + max successor value <= value`) whose successors are all
/// ranked; the order-first such action is chosen. Unranked states and
/// targets get their order-first action.
pub fn min_reach_strategy(model: &Cmdp, targets: &[StateId], values: &ValueVector) -> Result<Vec<Option<ActionId>>> {
    let n = model.num_states();
    let mut ranked = model.state_mask(targets);
    let mut choice: Vec<Option<ActionId>> = model.states().map(|s| model.first_action(s)).collect();

    loop {
        let mut newly = Vec::new();
        for s in model.states() {
            if ranked[s.0] || !values[s].is_finite() {
                continue;
            }
            for c in model.choices(s) {
                let progressing = model.succ_states(c).all(|t| ranked[t.0]);
                if !progressing {
                    continue;
                }
                let need = cost_plus_max(c.consumption, model.succ_states(c), |t| values[t])?;
                if need <= values[s] {
                    newly.push((s, c.action));
                    break;
                }
            }
        }
        if newly.is_empty() {
            break;
        }
        for (s, a) in newly {
            ranked[s.0] = true;
            choice[s.0] = Some(a);
        }
    }
    debug_assert_eq!(choice.len(), n);
    Ok(choice)
}

/// The model extended with a copy `~s` of every state. Copies have the
/// dynamics of their originals, are never reloads and are never targets.
#[derive(Debug, Clone)]
pub struct Duplicated {
    pub model: Cmdp,
    /// `copies[s]` is the copy of original state `s`.
    pub copies: Vec<StateId>,
}

pub fn duplicate_model(model: &Cmdp) -> Duplicated {
    let mut b = CmdpBuilder::new(model.capacity());
    for s in model.states() {
        b.add_state(model.state_name(s)).expect("original names are unique");
        b.set_reload(s, model.is_reload(s));
    }
    let mut copies = Vec::with_capacity(model.num_states());
    for s in model.states() {
        let mut name = format!("~{}", model.state_name(s));
        while b.state_id(&name).is_some() {
            name.insert(0, '~');
        }
        copies.push(b.add_state(name).expect("fresh name"));
    }
    // Labels in original order first so argmin tie-breaking matches.
    for label in model.labels() {
        b.label(label);
    }
    for s in model.states() {
        for c in model.choices(s) {
            let succ: Vec<(StateId, f64)> = model.successors(c).iter().map(|t| (t.target, t.prob)).collect();
            let label = model.action_label(c.action);
            b.add_action(s, label, c.consumption, succ.iter().copied()).expect("copied action");
            b.add_action(copies[s.0], label, c.consumption, succ).expect("copied action");
        }
    }
    Duplicated { model: b.build(), copies }
}

/// Minimum cost to reach `targets` in at least one step, computed on the
/// duplicated model and read off at the copies.
pub fn min_reach_plus_oracle(model: &Cmdp, targets: &[StateId]) -> Result<ValueVector> {
    let dup = duplicate_model(model);
    let reach = min_reach(&dup.model, targets)?;
    Ok(ValueVector::new(dup.copies.iter().map(|&c| reach.values[c]).collect()))
}
