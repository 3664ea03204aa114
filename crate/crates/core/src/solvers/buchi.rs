use super::posreach::positive_reachability_masked;
use super::{Diagnostic, SemanticsMode, ValueVector};
use crate::error::{Error, Result};
use crate::ext::ExtNat;
use crate::model::{Cmdp, StateId};
use crate::strategy::CounterSelector;

#[derive(Debug, Clone, PartialEq)]
pub struct BuchiResult {
    pub values: ValueVector,
    /// Selector computed on the model restricted to `reloads`, with
    /// `initial` set to `values`.
    pub selector: CounterSelector,
    /// Reload states that survived the pruning.
    pub reloads: Vec<StateId>,
    /// Rounds that removed at least one reload state.
    pub removal_rounds: usize,
    /// Iterations of each positive-reachability run, in order.
    pub posreach_iterations: Vec<usize>,
    pub diagnostics: Vec<Diagnostic>,
}

impl BuchiResult {
    /// The model the selector was computed for.
    pub fn restricted_model(&self, model: &Cmdp) -> Cmdp {
        model.with_reload_mask(model.state_mask(&self.reloads))
    }
}

/// Minimal load from which a safe strategy visits `targets` infinitely often
/// with probability 1.
///
/// Reload states from which the targets cannot be reached within capacity
/// are dropped until the reload set is stable.
pub fn buchi(model: &Cmdp, targets: &[StateId], mode: SemanticsMode) -> Result<BuchiResult> {
    let cap = model.capacity();
    let mut rel = model.reload_mask().to_vec();
    let total = model.num_reloads();
    let mut removal_rounds = 0;
    let mut posreach_iterations = Vec::new();

    loop {
        let pr = positive_reachability_masked(model, &rel, targets, mode, None)?;
        posreach_iterations.push(pr.iterations);
        let to_remove: Vec<usize> =
            (0..rel.len()).filter(|&r| rel[r] && !pr.values.as_slice()[r].le_u64(cap)).collect();
        if to_remove.is_empty() {
            return Ok(BuchiResult {
                values: pr.values,
                selector: pr.selector,
                reloads: (0..rel.len()).filter(|&r| rel[r]).map(StateId).collect(),
                removal_rounds,
                posreach_iterations,
                diagnostics: pr.diagnostics,
            });
        }
        removal_rounds += 1;
        assert!(removal_rounds <= total, "Büchi pruning exceeded |R| = {total} rounds");
        for r in to_remove {
            rel[r] = false;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub winning: bool,
    /// The Büchi value of the queried state.
    pub value: ExtNat,
    /// On a win: the Büchi selector with initial load `d` at the state.
    pub strategy: Option<CounterSelector>,
}

/// Can `targets` be visited infinitely often almost surely from `s` with
/// initial load `d`?
pub fn decide(model: &Cmdp, targets: &[StateId], s: StateId, d: u64, mode: SemanticsMode) -> Result<Decision> {
    if d > model.capacity() {
        return Err(Error::LoadOutOfRange { load: d, capacity: model.capacity() });
    }
    let res = buchi(model, targets, mode)?;
    let value = res.values[s];
    let winning = value.le_u64(d);
    let strategy = winning.then(|| {
        let mut sel = res.selector;
        sel.set_initial(s, Some(ExtNat::Fin(d)));
        sel
    });
    Ok(Decision { winning, value, strategy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{example_model, CmdpBuilder};

    #[test]
    fn example_buchi() {
        let m = example_model();
        let t = m.require_states(&["s2"]).unwrap();
        let res = buchi(&m, &t, SemanticsMode::Truncated).unwrap();
        let expect: Vec<ExtNat> = [2, 0, 5, 4, 0].iter().map(|&v| ExtNat::Fin(v)).collect();
        assert_eq!(res.values.as_slice(), expect.as_slice());
        assert_eq!(res.reloads, m.reload_states());
        assert_eq!(res.removal_rounds, 0);
    }

    #[test]
    fn example_decisions() {
        let m = example_model();
        let t = m.require_states(&["s2"]).unwrap();
        let s1 = m.require_state("s1").unwrap();
        let yes = decide(&m, &t, s1, 2, SemanticsMode::Truncated).unwrap();
        assert!(yes.winning);
        assert_eq!(yes.strategy.unwrap().initial(s1), Some(ExtNat::Fin(2)));
        let no = decide(&m, &t, s1, 1, SemanticsMode::Truncated).unwrap();
        assert!(!no.winning && no.strategy.is_none());
        assert!(decide(&m, &t, s1, 21, SemanticsMode::Truncated).is_err());
    }

    #[test]
    fn unreachable_target_removes_reloads() {
        let mut b = CmdpBuilder::new(10);
        let r = b.add_reload_state("r").unwrap();
        let t = b.add_state("t").unwrap();
        b.add_action(r, "stay", 1, [(r, 1.0)]).unwrap();
        b.add_action(t, "stay", 1, [(t, 1.0)]).unwrap();
        let m = b.build();
        let res = buchi(&m, &[t], SemanticsMode::Truncated).unwrap();
        assert!(res.values.iter().all(|v| *v == ExtNat::Inf));
        assert!(res.reloads.is_empty());
        assert_eq!(res.removal_rounds, 1);
    }

    #[test]
    fn positive_reach_is_not_enough() {
        // From r one can reach t once, but t leads to a reload that never
        // sees t again.
        let mut b = CmdpBuilder::new(10);
        let r = b.add_reload_state("r").unwrap();
        let t = b.add_state("t").unwrap();
        let q = b.add_reload_state("q").unwrap();
        b.add_action(r, "go", 1, [(t, 1.0)]).unwrap();
        b.add_action(t, "go", 1, [(q, 1.0)]).unwrap();
        b.add_action(q, "go", 1, [(q, 1.0)]).unwrap();
        let m = b.build();
        let pr = crate::solvers::positive_reachability(&m, &[t], SemanticsMode::Truncated).unwrap();
        assert_eq!(pr.values[r], ExtNat::ZERO);
        let sb = buchi(&m, &[t], SemanticsMode::Truncated).unwrap();
        assert_eq!(sb.values[r], ExtNat::Inf);
        assert_eq!(sb.values[t], ExtNat::Inf);
    }
}
