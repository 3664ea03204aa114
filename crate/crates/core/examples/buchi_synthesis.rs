// Decide whether a given initial load suffices for visiting a target
// infinitely often, and export the witnessing strategy as JSON.

use cmdp::solvers::{decide, SemanticsMode};
use cmdp::strategy::{export_strategy, import_strategy};
use cmdp::{example_model, Result};

pub struct Summary {
    /// `(load, winning)` for every load from 0 to 4 at `s1`.
    pub answers: Vec<(u64, bool)>,
    pub strategy_json: String,
    pub round_trip: bool,
}

pub fn run_example() -> Result<Summary> {
    let m = example_model();
    let t = m.require_states(&["s2"])?;
    let s1 = m.require_state("s1")?;
    let mut answers = Vec::new();
    let mut witness = None;
    for d in 0..=4 {
        let dec = decide(&m, &t, s1, d, SemanticsMode::Truncated)?;
        answers.push((d, dec.winning));
        if witness.is_none() {
            witness = dec.strategy;
        }
    }
    let sel = witness.expect("some load up to 4 wins");
    let strategy_json = export_strategy(&m, &sel);
    let round_trip = import_strategy(&m, &strategy_json)? == sel;
    Ok(Summary { answers, strategy_json, round_trip })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let s = run_example()?;
    for (d, w) in &s.answers {
        println!("s1 with load {d}: {}", if *w { "yes" } else { "no" });
    }
    println!("{}", s.strategy_json);
    println!("import(export(σ)) == σ: {}", s.round_trip);
    Ok(())
}
