// Positive reachability against almost-sure Büchi: a gamble that can hit
// the target but may also end in a state from which it is lost for good.

use cmdp::solvers::{buchi, positive_reachability, positive_reachability_iterates, SemanticsMode};
use cmdp::{Cmdp, CmdpBuilder, Result, ValueVector};

pub fn gamble() -> Result<Cmdp> {
    let mut b = CmdpBuilder::new(10);
    let base = b.add_reload_state("base")?;
    let coin = b.add_state("coin")?;
    let goal = b.add_state("goal")?;
    let pit = b.add_reload_state("pit")?;
    b.add_action(base, "go", 3, [(coin, 1.0)])?;
    b.add_action(coin, "flip", 1, [(goal, 0.5), (pit, 0.5)])?;
    b.add_action(goal, "return", 2, [(base, 1.0)])?;
    b.add_action(pit, "idle", 1, [(pit, 1.0)])?;
    Ok(b.build())
}

pub struct Summary {
    pub iterates: Vec<ValueVector>,
    pub posreach: ValueVector,
    pub buchi: ValueVector,
}

pub fn run_example() -> Result<Summary> {
    let m = gamble()?;
    let t = m.require_states(&["goal"])?;
    Ok(Summary {
        iterates: positive_reachability_iterates(&m, &t, SemanticsMode::Truncated)?,
        posreach: positive_reachability(&m, &t, SemanticsMode::Truncated)?.values,
        buchi: buchi(&m, &t, SemanticsMode::Truncated)?.values,
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let s = run_example()?;
    for (i, v) in s.iterates.iter().enumerate() {
        println!("B^{i} = {v}");
    }
    println!("PR    = {}", s.posreach);
    println!("Büchi = {}", s.buchi);
    Ok(())
}
