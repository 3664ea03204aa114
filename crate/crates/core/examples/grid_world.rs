// A helicopter that can only recharge when it meets a rover. Solve the
// Büchi objective for surveying target cells and sample a mission.

use cmdp::gen::{gen_grid, GridSpec};
use cmdp::solvers::{buchi, SemanticsMode};
use cmdp::strategy::simulate;
use cmdp::{ExtNat, Result};

pub struct Summary {
    pub states: usize,
    pub reloads: usize,
    /// States with a finite Büchi value.
    pub winning: usize,
    pub start: String,
    pub start_load: u64,
    pub target_visits: usize,
}

pub fn run_example() -> Result<Summary> {
    let spec = GridSpec { n: 4, capacity: 12, targets: vec![(3, 3)], ..GridSpec::default() };
    let inst = gen_grid(&spec)?;
    let m = &inst.model;
    let targets = inst.targets.clone().unwrap_or_default();
    let res = buchi(m, &targets, SemanticsMode::Truncated)?;
    let winning = res.values.iter().filter(|v| v.is_finite()).count();

    let start = m.require_state("h0.0-r1.0")?;
    let ExtNat::Fin(d) = res.values[start] else {
        panic!("the start state should win");
    };
    let run = simulate(m, &res.selector, start, d, 500, 7)?;
    Ok(Summary {
        states: m.num_states(),
        reloads: m.num_reloads(),
        winning,
        start: m.state_name(start).to_owned(),
        start_load: d,
        target_visits: run.visit_count(&targets),
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let s = run_example()?;
    println!("{} states, {} reload states, {} winning", s.states, s.reloads, s.winning);
    println!("from {} with {} units: {} target visits in 500 steps", s.start, s.start_load, s.target_visits);
    Ok(())
}
