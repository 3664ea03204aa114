// The five-state running example: safety, positive reachability and Büchi
// values, plus the counter selector at `s1`.

use cmdp::solvers::{buchi, positive_reachability, safe, SemanticsMode};
use cmdp::{example_model, Result, ValueVector};

pub struct Summary {
    pub safe: ValueVector,
    pub posreach: ValueVector,
    pub buchi: ValueVector,
    /// `(threshold, action label)` pairs of the Büchi rule at `s1`.
    pub s1_rule: Vec<(u64, String)>,
}

pub fn run_example() -> Result<Summary> {
    let m = example_model();
    let targets = m.require_states(&["s2"])?;
    let sf = safe(&m)?;
    let pr = positive_reachability(&m, &targets, SemanticsMode::Truncated)?;
    let sb = buchi(&m, &targets, SemanticsMode::Truncated)?;
    let s1 = m.require_state("s1")?;
    let s1_rule = sb.selector.rule(s1).iter().map(|(t, a)| (t, m.action_label(a).to_owned())).collect();
    Ok(Summary { safe: sf.values, posreach: pr.values, buchi: sb.values, s1_rule })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let s = run_example()?;
    println!("Safe  = {}", s.safe);
    println!("PR    = {}", s.posreach);
    println!("Büchi = {}", s.buchi);
    for (t, a) in &s.s1_rule {
        println!("s1: level >= {t} -> {a}");
    }
    Ok(())
}
