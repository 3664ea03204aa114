//! Property tests for the level dynamics and the solver vectors on random
//! decreasing models.

use cmdp::gen::{gen_random, RandomSpec};
use cmdp::model::{consumption, energy_level};
use cmdp::solvers::{buchi, positive_reachability, safe, safe_actions, SemanticsMode};
use cmdp::{Cmdp, ExtNat, History, Instance, Level, StateId};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn model(seed: u64, states: usize) -> Instance {
    gen_random(&RandomSpec {
        states,
        actions: 3,
        capacity: (0, 12),
        targets: 2.min(states),
        seed,
        ..Default::default()
    })
    .unwrap()
}

/// A random path of `len` steps from `s0` following the model's dynamics.
fn random_path(m: &Cmdp, s0: StateId, len: usize, seed: u64) -> History {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = vec![s0];
    let mut actions = Vec::new();
    let mut s = s0;
    for _ in 0..len {
        let choices = m.choices(s);
        let c = &choices[rng.gen_range(0..choices.len())];
        let succ = m.successors(c);
        let t = succ[rng.gen_range(0..succ.len())].target;
        actions.push(c.action);
        states.push(t);
        s = t;
    }
    History::new(m, states, actions).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn joint_paths_compose(seed in 0u64..10_000, n in 1usize..8, len in 0usize..12, split in 0usize..12, d in 0u64..13) {
        let inst = model(seed, n);
        let m = &inst.model;
        let d = d.min(m.capacity());
        let h = random_path(m, StateId(seed as usize % n), len, seed);
        let k = split.min(h.len());
        let (p, q) = (h.prefix(k), h.suffix(k));
        prop_assert_eq!(p.join(&q).unwrap(), h.clone());
        let whole = energy_level(m, &h, d).unwrap();
        match energy_level(m, &p, d).unwrap() {
            Level::Exhausted => prop_assert_eq!(whole, Level::Exhausted),
            Level::Units(mid) => prop_assert_eq!(whole, energy_level(m, &q, mid).unwrap()),
        }
    }

    #[test]
    fn more_load_never_hurts(seed in 0u64..10_000, n in 1usize..8, len in 0usize..12, d in 0u64..12) {
        let inst = model(seed, n);
        let m = &inst.model;
        prop_assume!(d < m.capacity());
        let h = random_path(m, StateId(0), len, seed ^ 0x5555);
        prop_assert!(energy_level(m, &h, d).unwrap() <= energy_level(m, &h, d + 1).unwrap());
    }

    #[test]
    fn no_reload_means_plain_subtraction(seed in 0u64..10_000, n in 1usize..8, len in 0usize..12, d in 0u64..13) {
        let inst = model(seed, n);
        let m = &inst.model;
        let d = d.min(m.capacity());
        let h = random_path(m, StateId(n - 1), len, seed);
        let first_reload = h.states()[..h.len()].iter().position(|&s| m.is_reload(s)).unwrap_or(h.len());
        let p = h.prefix(first_reload);
        let spent = consumption(m, &p).unwrap().finite().unwrap();
        let expected = if spent <= d { Level::Units(d - spent) } else { Level::Exhausted };
        prop_assert_eq!(energy_level(m, &p, d).unwrap(), expected);
    }

    /// From `Safe(s)` units, every safe action leaves every successor with
    /// enough for its own safety value (reload states need none on arrival).
    #[test]
    fn safe_actions_extend(seed in 0u64..10_000, n in 1usize..8) {
        let inst = model(seed, n);
        let m = &inst.model;
        let sf = safe(m).unwrap().values;
        for s in m.states() {
            let Some(d) = sf[s].finite() else { continue };
            let d = if m.is_reload(s) { 0 } else { d };
            let acts = safe_actions(m, &sf, s, SemanticsMode::Truncated);
            prop_assert!(!acts.is_empty());
            for a in acts {
                let c = m.choice(s, a).unwrap();
                let after = energy_level(m, &History::new(m, vec![s, m.successors(c)[0].target], vec![a]).unwrap(), d).unwrap();
                let Level::Units(left) = after else { return Err(TestCaseError::fail("safe action exhausts")) };
                for t in m.succ_states(c) {
                    prop_assert!(m.is_reload(t) && sf[t].is_finite() || sf[t].le_u64(left));
                }
            }
        }
    }

    #[test]
    fn objectives_are_ordered_and_monotone_in_capacity(seed in 0u64..10_000, n in 1usize..8) {
        let inst = model(seed, n);
        let m = &inst.model;
        let t = inst.targets.clone().unwrap();
        let mode = SemanticsMode::Truncated;
        let sf = safe(m).unwrap().values;
        let pr = positive_reachability(m, &t, mode).unwrap().values;
        let sb = buchi(m, &t, mode).unwrap().values;
        for s in m.states().filter(|&s| !m.is_reload(s)) {
            prop_assert!(sf[s] <= pr[s] && pr[s] <= sb[s]);
        }
        let bigger = m.with_capacity(m.capacity() + 3);
        prop_assert!(safe(&bigger).unwrap().values.le(&sf));
        prop_assert!(buchi(&bigger, &t, mode).unwrap().values.le(&sb));
        prop_assert!(sb.iter().all(|v| *v == ExtNat::Inf || v.le_u64(m.capacity())));
    }
}
