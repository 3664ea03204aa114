// Unfold the resource level into the state space and compare the
// fixed-point solvers with graph algorithms on the unfolding.

use cmdp::explicit::{
    almost_sure_buchi_oracle, compare_with_solver, mec_decomposition, positive_reach_oracle, safety_levels_oracle,
    unfold,
};
use cmdp::solvers::{buchi, positive_reachability, safe, SemanticsMode};
use cmdp::{example_model, Result};

pub struct Summary {
    pub nodes: usize,
    pub choices: usize,
    pub mecs: Vec<Vec<String>>,
    /// Mismatching states for safety, positive reachability and Büchi.
    pub mismatches: [usize; 3],
}

pub fn run_example() -> Result<Summary> {
    let m = example_model();
    let t = m.require_states(&["s2"])?;
    let x = unfold(&m)?;
    let mecs =
        mec_decomposition(&x).iter().map(|mec| mec.nodes.iter().map(|&v| x.node_name(&m, v)).collect()).collect();

    let mode = SemanticsMode::Truncated;
    let mismatches = [
        compare_with_solver(&m, &safe(&m)?.values, &safety_levels_oracle(&x).levels).len(),
        compare_with_solver(&m, &positive_reachability(&m, &t, mode)?.values, &positive_reach_oracle(&x, &t).levels)
            .len(),
        compare_with_solver(&m, &buchi(&m, &t, mode)?.values, &almost_sure_buchi_oracle(&x, &t).levels).len(),
    ];
    Ok(Summary { nodes: x.num_nodes(), choices: x.num_choices(), mecs, mismatches })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let s = run_example()?;
    println!("unfolding: {} nodes, {} choices", s.nodes, s.choices);
    for mec in &s.mecs {
        println!("MEC {{{}}}", mec.join(", "));
    }
    println!("mismatches (safe, posreach, buchi): {:?}", s.mismatches);
    Ok(())
}
