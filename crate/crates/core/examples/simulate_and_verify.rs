// Check the Büchi strategy exactly on its induced Markov chain, then
// sample runs and count target visits.

use cmdp::solvers::{buchi, SemanticsMode};
use cmdp::strategy::{induced_chain, simulate, verify, Objective, Termination};
use cmdp::{example_model, Result};

pub struct Summary {
    pub chain_nodes: usize,
    pub holds: bool,
    /// Target visits in each sampled run.
    pub visits: Vec<usize>,
    pub all_runs_full_length: bool,
}

pub fn run_example() -> Result<Summary> {
    let m = example_model();
    let t = m.require_states(&["s2"])?;
    let s1 = m.require_state("s1")?;
    let res = buchi(&m, &t, SemanticsMode::Truncated)?;
    let d = res.values[s1].finite().expect("s1 wins");

    let chain = induced_chain(&m, &res.selector, s1, d)?;
    let verdict = verify(&chain, &t, Objective::BuchiAs);

    let mut visits = Vec::new();
    let mut full = true;
    for seed in 0..5 {
        let run = simulate(&m, &res.selector, s1, d, 200, seed)?;
        full &= run.termination == Termination::StepBudget;
        visits.push(run.visit_count(&t));
    }
    Ok(Summary { chain_nodes: chain.len(), holds: verdict.holds, visits, all_runs_full_length: full })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let s = run_example()?;
    println!("induced chain: {} nodes, Büchi holds: {}", s.chain_nodes, s.holds);
    println!("target visits per run of 200 steps: {:?}", s.visits);
    Ok(())
}
