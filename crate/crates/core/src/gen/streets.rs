use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Cell, MAX_GENERATED_STATES};
use crate::error::{Error, Result};
use crate::model::{ActionId, CmdpBuilder, Instance, StateId, PROBABILITY_TOLERANCE};

/// Insert an edge whose consumption is random: a zero-cost action from
/// `from` picks one of `outcomes.len()` intermediate states with the given
/// probabilities, and each intermediate state drives on to `to` at its cost.
pub fn add_stochastic_edge(
    b: &mut CmdpBuilder,
    from: StateId,
    to: StateId,
    label: &str,
    outcomes: &[(u64, f64)],
) -> Result<ActionId> {
    if outcomes.is_empty() {
        return Err(Error::InvalidSpec("a stochastic edge needs at least one outcome".into()));
    }
    if let Some(&(c, _)) = outcomes.iter().find(|(c, _)| *c == 0) {
        return Err(Error::InvalidSpec(format!("edge costs must be at least 1, got {c}")));
    }
    if outcomes.iter().any(|&(_, p)| p.is_nan() || p <= 0.0) {
        return Err(Error::InvalidSpec("edge probabilities must be positive".into()));
    }
    let sum: f64 = outcomes.iter().map(|&(_, p)| p).sum();
    if (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
        return Err(Error::InvalidSpec(format!("edge probabilities sum to {sum}, not 1")));
    }
    let mut branches = Vec::with_capacity(outcomes.len());
    for (i, &(c, p)) in outcomes.iter().enumerate() {
        let name = format!("{}~{label}~{i}", b.state_name(from));
        let dummy = b.add_state(name)?;
        b.add_action(dummy, "drive", c, [(to, 1.0)])?;
        branches.push((dummy, p));
    }
    b.add_action(from, label, 0, branches)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StreetSpec {
    pub rows: usize,
    pub cols: usize,
    pub capacity: u64,
    /// Consumption outcomes `(cost, probability)` shared by all edges
    /// before jitter.
    pub outcomes: Vec<(u64, f64)>,
    /// Each edge adds a uniform offset in `0..=jitter` to all its costs.
    pub jitter: u64,
    pub charging: Vec<Cell>,
    pub targets: Vec<Cell>,
    pub seed: u64,
}

impl Default for StreetSpec {
    fn default() -> Self {
        StreetSpec {
            rows: 3,
            cols: 3,
            capacity: 40,
            outcomes: vec![(3, 0.2), (5, 0.6), (8, 0.2)],
            jitter: 2,
            charging: vec![(0, 0)],
            targets: vec![(2, 2)],
            seed: 0,
        }
    }
}

/// A rectangular street network. Inner streets are one-way in alternating
/// directions, border streets are two-way. Intersections are named
/// `i{col}.{row}`.
pub fn gen_streets(spec: &StreetSpec) -> Result<Instance> {
    let (rows, cols) = (spec.rows, spec.cols);
    if rows < 2 || cols < 2 {
        return Err(Error::InvalidSpec("street grids need at least 2 rows and 2 columns".into()));
    }
    let estimate = rows * cols * (1 + 4 * spec.outcomes.len());
    if estimate > MAX_GENERATED_STATES {
        return Err(Error::InvalidSpec(format!("street grid would exceed {MAX_GENERATED_STATES} states")));
    }
    for &(x, y) in spec.charging.iter().chain(&spec.targets) {
        if x >= cols || y >= rows {
            return Err(Error::InvalidSpec(format!("cell ({x}, {y}) is outside the street grid")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut b = CmdpBuilder::new(spec.capacity);
    let mut ids = vec![StateId(0); rows * cols];
    for y in 0..rows {
        for x in 0..cols {
            let name = format!("i{x}.{y}");
            ids[y * cols + x] =
                if spec.charging.contains(&(x, y)) { b.add_reload_state(name)? } else { b.add_state(name)? };
        }
    }
    let at = |x: usize, y: usize| ids[y * cols + x];

    for y in 0..rows {
        for x in 0..cols {
            let border_row = y == 0 || y + 1 == rows;
            let border_col = x == 0 || x + 1 == cols;
            let mut exits: Vec<(&str, usize, usize)> = Vec::new();
            if x + 1 < cols && (border_row || y % 2 == 0) {
                exits.push(("east", x + 1, y));
            }
            if x > 0 && (border_row || y % 2 == 1) {
                exits.push(("west", x - 1, y));
            }
            if y + 1 < rows && (border_col || x % 2 == 0) {
                exits.push(("south", x, y + 1));
            }
            if y > 0 && (border_col || x % 2 == 1) {
                exits.push(("north", x, y - 1));
            }
            for (label, tx, ty) in exits {
                let offset = if spec.jitter > 0 { rng.gen_range(0..=spec.jitter) } else { 0 };
                let outcomes: Vec<(u64, f64)> = spec.outcomes.iter().map(|&(c, p)| (c + offset, p)).collect();
                add_stochastic_edge(&mut b, at(x, y), at(tx, ty), label, &outcomes)?;
            }
        }
    }
    let mut targets: Vec<StateId> = spec.targets.iter().map(|&(x, y)| at(x, y)).collect();
    targets.sort_unstable();
    targets.dedup();
    Ok(Instance::new(b.build(), Some(targets)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;

    #[test]
    fn three_outcome_gadget() {
        let mut b = CmdpBuilder::new(20);
        let i1 = b.add_state("I1").unwrap();
        let i2 = b.add_reload_state("I2").unwrap();
        add_stochastic_edge(&mut b, i1, i2, "go", &[(3, 0.2), (5, 0.6), (8, 0.2)]).unwrap();
        add_stochastic_edge(&mut b, i2, i1, "back", &[(2, 1.0)]).unwrap();
        let m = b.build();
        assert_eq!(m.num_states(), 2 + 3 + 1);
        let c = &m.choices(i1)[0];
        assert_eq!(c.consumption, 0);
        let expected: f64 = m.successors(c).iter().map(|t| t.prob * m.choices(t.target)[0].consumption as f64).sum();
        assert!((expected - 5.2).abs() < 1e-9);
        assert!(validate(&m).is_valid());
    }

    #[test]
    fn zero_cost_outcome_is_rejected() {
        let mut b = CmdpBuilder::new(5);
        let i1 = b.add_state("I1").unwrap();
        let i2 = b.add_state("I2").unwrap();
        assert!(add_stochastic_edge(&mut b, i1, i2, "go", &[(0, 1.0)]).is_err());
        assert!(add_stochastic_edge(&mut b, i1, i2, "go", &[(1, 0.5), (2, 0.4)]).is_err());
    }

    #[test]
    fn small_network_is_valid() {
        let spec = StreetSpec { rows: 2, cols: 2, ..Default::default() };
        let inst = gen_streets(&StreetSpec { targets: vec![(1, 1)], ..spec }).unwrap();
        assert!(validate(&inst.model).is_valid());
        // The 2x2 grid is all border: 8 directed edges of 3 outcomes each.
        assert_eq!(inst.model.num_states(), 4 + 8 * 3);
    }

    #[test]
    fn default_network_is_valid_and_deterministic() {
        let a = gen_streets(&StreetSpec::default()).unwrap();
        assert!(validate(&a.model).is_valid());
        assert_eq!(a.to_json_string(), gen_streets(&StreetSpec::default()).unwrap().to_json_string());
    }
}
