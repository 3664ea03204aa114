// Minimal safe loads and the safe actions that keep them, on a small
// delivery loop where one reload station is out of reach.

use cmdp::solvers::{min_init_cons, safe, safe_actions, SemanticsMode};
use cmdp::{Cmdp, CmdpBuilder, Result, ValueVector};

pub fn delivery_loop() -> Result<Cmdp> {
    let mut b = CmdpBuilder::new(6);
    let depot = b.add_reload_state("depot")?;
    let a = b.add_state("a")?;
    let c = b.add_state("c")?;
    let far = b.add_reload_state("far")?;
    b.add_action(depot, "out", 2, [(a, 1.0)])?;
    b.add_action(a, "next", 1, [(c, 0.5), (depot, 0.5)])?;
    b.add_action(a, "detour", 4, [(far, 1.0)])?;
    b.add_action(c, "home", 2, [(depot, 1.0)])?;
    // The only way back from `far` costs more than the capacity.
    b.add_action(far, "back", 7, [(depot, 1.0)])?;
    Ok(b.build())
}

pub struct Summary {
    pub min_init_cons: ValueVector,
    pub safe: ValueVector,
    pub dropped_reloads: usize,
    pub safe_at_a: Vec<String>,
}

pub fn run_example() -> Result<Summary> {
    let m = delivery_loop()?;
    let mic = min_init_cons(&m)?;
    let sf = safe(&m)?;
    let a = m.require_state("a")?;
    let safe_at_a = safe_actions(&m, &sf.values, a, SemanticsMode::Truncated)
        .into_iter()
        .map(|x| m.action_label(x).to_owned())
        .collect();
    Ok(Summary {
        min_init_cons: mic.values,
        dropped_reloads: m.num_reloads() - sf.reloads.len(),
        safe: sf.values,
        safe_at_a,
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let s = run_example()?;
    println!("MinInitCons = {}", s.min_init_cons);
    println!("Safe        = {}", s.safe);
    println!("reload states dropped: {}", s.dropped_reloads);
    println!("safe actions at a: {:?}", s.safe_at_a);
    Ok(())
}
