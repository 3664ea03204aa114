use super::{mec_decomposition_restricted, ExplicitMdp};
use crate::ext::ExtNat;
use crate::model::{Cmdp, StateId};
use crate::solvers::ValueVector;

/// Winning nodes of an objective on the unfolding and the least winning
/// level per original state (∞ if no level wins).
#[derive(Debug, Clone, PartialEq)]
pub struct WinningRegion {
    pub nodes: Vec<bool>,
    pub levels: ValueVector,
}

impl WinningRegion {
    fn from_nodes(mdp: &ExplicitMdp, nodes: Vec<bool>) -> WinningRegion {
        let levels = min_levels(mdp, &nodes);
        WinningRegion { nodes, levels }
    }
}

/// Least winning level per state. Winning sets are upward closed in the
/// level, and at reload states the level is irrelevant; both are asserted.
fn min_levels(mdp: &ExplicitMdp, win: &[bool]) -> ValueVector {
    let cap = mdp.capacity();
    let values = (0..mdp.num_states())
        .map(|i| {
            let s = StateId(i);
            let first = (0..=cap).find(|&e| win[mdp.node(s, e)]);
            if let Some(e0) = first {
                assert!((e0..=cap).all(|e| win[mdp.node(s, e)]), "winning levels of state {i} are not upward closed");
                assert!(!mdp.is_reload(s) || e0 == 0, "winning status of reload state {i} depends on the level");
            }
            first.map_or(ExtNat::Inf, ExtNat::Fin)
        })
        .collect();
    ValueVector::new(values)
}

/// Nodes from which the sink can be avoided forever, and the choices that
/// keep a run inside that set.
fn safe_region(mdp: &ExplicitMdp) -> (Vec<bool>, Vec<bool>) {
    let owner = mdp.choice_owner();
    let (start, preds) = mdp.reverse();
    let mut live: Vec<usize> = (0..mdp.num_nodes()).map(|v| mdp.choices(v).len()).collect();
    let mut choice_ok = vec![true; mdp.num_choices()];
    let mut lost = vec![false; mdp.num_nodes()];
    let mut stack = vec![mdp.sink()];
    lost[mdp.sink()] = true;
    while let Some(t) = stack.pop() {
        for &k in &preds[start[t]..start[t + 1]] {
            if !choice_ok[k] {
                continue;
            }
            choice_ok[k] = false;
            let u = owner[k];
            live[u] -= 1;
            if live[u] == 0 && !lost[u] {
                lost[u] = true;
                stack.push(u);
            }
        }
    }
    (lost.iter().map(|&l| !l).collect(), choice_ok)
}

fn target_nodes(mdp: &ExplicitMdp, targets: &[StateId]) -> Vec<bool> {
    let mut mask = vec![false; mdp.num_nodes()];
    for &t in targets {
        for e in 0..=mdp.capacity() {
            mask[mdp.node(t, e)] = true;
        }
    }
    mask
}

/// Backward closure of `roots` inside `inside` through the `usable` choices.
fn backward_reach(mdp: &ExplicitMdp, roots: &[bool], inside: &[bool], usable: &[bool]) -> Vec<bool> {
    let owner = mdp.choice_owner();
    let (start, preds) = mdp.reverse();
    let mut reached: Vec<bool> = roots.iter().zip(inside).map(|(&r, &i)| r && i).collect();
    let mut stack: Vec<usize> = (0..reached.len()).filter(|&v| reached[v]).collect();
    while let Some(t) = stack.pop() {
        for &k in &preds[start[t]..start[t + 1]] {
            let u = owner[k];
            if usable[k] && inside[u] && !reached[u] {
                reached[u] = true;
                stack.push(u);
            }
        }
    }
    reached
}

pub fn safety_levels_oracle(mdp: &ExplicitMdp) -> WinningRegion {
    let (win, _) = safe_region(mdp);
    WinningRegion::from_nodes(mdp, win)
}

/// Nodes from which some sink-avoiding strategy has a path to a target.
pub fn positive_reach_oracle(mdp: &ExplicitMdp, targets: &[StateId]) -> WinningRegion {
    let (win, safe_choice) = safe_region(mdp);
    let reach = backward_reach(mdp, &target_nodes(mdp, targets), &win, &safe_choice);
    WinningRegion::from_nodes(mdp, reach)
}

/// Least levels for reaching a target within `i` steps with positive
/// probability while staying safe, for `i = 0..=steps`.
pub fn positive_reach_layers(mdp: &ExplicitMdp, targets: &[StateId], steps: usize) -> Vec<ValueVector> {
    let (win, safe_choice) = safe_region(mdp);
    let mut layer: Vec<bool> = target_nodes(mdp, targets).iter().zip(&win).map(|(&t, &w)| t && w).collect();
    let mut out = vec![min_levels(mdp, &layer)];
    for _ in 0..steps {
        let next: Vec<bool> = (0..mdp.num_nodes())
            .map(|v| {
                layer[v]
                    || (win[v] && mdp.choices(v).any(|k| safe_choice[k] && mdp.successors(k).iter().any(|&t| layer[t])))
            })
            .collect();
        layer = next;
        out.push(min_levels(mdp, &layer));
    }
    out
}

/// Nodes from which a sink-avoiding strategy visits targets infinitely
/// often with probability 1: almost-sure reachability of the end components
/// (within the safe region) that contain a target node.
pub fn almost_sure_buchi_oracle(mdp: &ExplicitMdp, targets: &[StateId]) -> WinningRegion {
    almost_sure_buchi_rounds(mdp, targets).0
}

/// The Büchi region and the number of shrinking rounds it took.
pub(crate) fn almost_sure_buchi_rounds(mdp: &ExplicitMdp, targets: &[StateId]) -> (WinningRegion, usize) {
    let (win, safe_choice) = safe_region(mdp);
    let is_target = target_nodes(mdp, targets);
    let mut good = vec![false; mdp.num_nodes()];
    for mec in mec_decomposition_restricted(mdp, &win, &safe_choice) {
        if mec.nodes.iter().any(|&v| is_target[v]) {
            for &v in &mec.nodes {
                good[v] = true;
            }
        }
    }

    let mut x = win;
    let mut rounds = 0;
    loop {
        let usable: Vec<bool> =
            (0..mdp.num_choices()).map(|k| safe_choice[k] && mdp.successors(k).iter().all(|&t| x[t])).collect();
        let next = backward_reach(mdp, &good, &x, &usable);
        if next == x {
            break;
        }
        x = next;
        rounds += 1;
    }
    (WinningRegion::from_nodes(mdp, x), rounds)
}

/// A state where solver and oracle disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub state: StateId,
    pub solver: ExtNat,
    pub oracle: ExtNat,
}

/// Compare solver values with oracle levels. Non-reload states must agree
/// exactly. A reload state wins at every level or at none, so there the
/// oracle level must be 0 exactly when the solver value fits the capacity.
pub fn compare_with_solver(model: &Cmdp, solver: &ValueVector, oracle: &ValueVector) -> Vec<Mismatch> {
    let cap = model.capacity();
    model
        .states()
        .filter(|&s| {
            let (v, o) = (solver[s], oracle[s]);
            if model.is_reload(s) {
                (o == ExtNat::ZERO) != v.le_u64(cap) || (o != ExtNat::ZERO && o != ExtNat::Inf)
            } else {
                v != o
            }
        })
        .map(|s| Mismatch { state: s, solver: solver[s], oracle: oracle[s] })
        .collect()
}
