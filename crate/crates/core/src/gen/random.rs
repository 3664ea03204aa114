use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::MAX_GENERATED_STATES;
use crate::error::{Error, Result};
use crate::model::{CmdpBuilder, Instance, StateId};

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpec {
    pub states: usize,
    /// Number of action labels; each state gets between 1 and this many.
    pub actions: usize,
    pub reload_fraction: f64,
    /// Capacity drawn uniformly from this inclusive range.
    pub capacity: (u64, u64),
    pub max_consumption: u64,
    pub max_support: usize,
    /// Number of target states drawn.
    pub targets: usize,
    pub seed: u64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            states: 5,
            actions: 2,
            reload_fraction: 0.4,
            capacity: (10, 10),
            max_consumption: 4,
            max_support: 3,
            targets: 1,
            seed: 1,
        }
    }
}

/// A random decreasing model.
///
/// A random permutation fixes a rank per state. Zero-cost actions are kept
/// only if every successor has a higher rank, so every cycle pays at least
/// one unit.
pub fn gen_random(spec: &RandomSpec) -> Result<Instance> {
    let n = spec.states;
    if n == 0 || spec.actions == 0 || spec.max_support == 0 {
        return Err(Error::InvalidSpec("states, actions and support size must be at least 1".into()));
    }
    if n > MAX_GENERATED_STATES {
        return Err(Error::InvalidSpec(format!("at most {MAX_GENERATED_STATES} states can be generated")));
    }
    if !(0.0..=1.0).contains(&spec.reload_fraction) {
        return Err(Error::InvalidSpec("reload fraction must lie in [0, 1]".into()));
    }
    let (lo, hi) = spec.capacity;
    if lo > hi {
        return Err(Error::InvalidSpec(format!("empty capacity range {lo}..={hi}")));
    }
    if spec.targets > n {
        return Err(Error::InvalidSpec(format!("cannot draw {} targets from {n} states", spec.targets)));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let capacity = rng.gen_range(lo..=hi);
    let mut b = CmdpBuilder::new(capacity);
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(&mut rng);
    let reloads = ((n as f64) * spec.reload_fraction).round() as usize;
    let mut is_reload = vec![false; n];
    for &i in &all[..reloads] {
        is_reload[i] = true;
    }
    for (i, &r) in is_reload.iter().enumerate() {
        let name = format!("s{i}");
        if r {
            b.add_reload_state(name)?;
        } else {
            b.add_state(name)?;
        }
    }
    for a in 0..spec.actions {
        b.label(&format!("a{a}"));
    }

    let mut rank = vec![0; n];
    all.shuffle(&mut rng);
    for (r, &s) in all.iter().enumerate() {
        rank[s] = r;
    }

    let labels: Vec<usize> = (0..spec.actions).collect();
    for s in 0..n {
        let k = rng.gen_range(1..=spec.actions);
        let mut chosen: Vec<usize> = labels.choose_multiple(&mut rng, k).copied().collect();
        chosen.sort_unstable();
        for a in chosen {
            let support = rng.gen_range(1..=spec.max_support.min(n));
            let succ: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(&mut rng, support).copied().collect();
            let weights: Vec<u32> = succ.iter().map(|_| rng.gen_range(1..=4)).collect();
            let total: u32 = weights.iter().sum();
            let mut consumption = rng.gen_range(0..=spec.max_consumption);
            if consumption == 0 && succ.iter().any(|&t| rank[t] <= rank[s]) {
                consumption = 1;
            }
            let dist = succ.iter().zip(&weights).map(|(&t, &w)| (StateId(t), f64::from(w) / f64::from(total)));
            b.add_action(StateId(s), &format!("a{a}"), consumption, dist)?;
        }
    }
    let mut targets: Vec<StateId> =
        (0..n).collect::<Vec<_>>().choose_multiple(&mut rng, spec.targets).map(|&t| StateId(t)).collect();
    targets.sort_unstable();
    Ok(Instance::new(b.build(), Some(targets)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;

    #[test]
    fn reproducible() {
        let a = gen_random(&RandomSpec::default()).unwrap();
        let b = gen_random(&RandomSpec::default()).unwrap();
        assert_eq!(a.to_json_string(), b.to_json_string());
        assert_eq!(a.model.num_states(), 5);
        assert_eq!(a.model.num_reloads(), 2);
    }

    #[test]
    fn corpus_validates() {
        for seed in 0..500 {
            let spec = RandomSpec { states: 1 + (seed as usize % 8), actions: 3, seed, ..Default::default() };
            let inst = gen_random(&spec).unwrap();
            let report = validate(&inst.model);
            assert!(report.is_valid(), "seed {seed}: {:?}", report.violations);
        }
    }

    #[test]
    fn no_reloads() {
        let spec = RandomSpec { reload_fraction: 0.0, ..Default::default() };
        assert_eq!(gen_random(&spec).unwrap().model.num_reloads(), 0);
    }
}
