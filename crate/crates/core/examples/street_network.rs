// An electric car on a street grid where every street has a random energy
// cost, modelled with intermediate states that each charge a fixed amount.

use cmdp::gen::{add_stochastic_edge, gen_streets, StreetSpec};
use cmdp::model::validate;
use cmdp::solvers::{buchi, safe, SemanticsMode};
use cmdp::{CmdpBuilder, Result, ValueVector};

pub struct Summary {
    pub gadget_states: usize,
    pub states: usize,
    pub valid: bool,
    pub safe: ValueVector,
    pub buchi: ValueVector,
    pub names: Vec<String>,
}

pub fn run_example() -> Result<Summary> {
    let mut b = CmdpBuilder::new(20);
    let i1 = b.add_reload_state("I1")?;
    let i2 = b.add_state("I2")?;
    add_stochastic_edge(&mut b, i1, i2, "drive", &[(3, 0.2), (5, 0.6), (8, 0.2)])?;
    add_stochastic_edge(&mut b, i2, i1, "back", &[(4, 1.0)])?;
    let gadget_states = b.num_states();

    let spec = StreetSpec { rows: 2, cols: 3, capacity: 80, ..StreetSpec::default() };
    let inst = gen_streets(&StreetSpec { targets: vec![(2, 1)], ..spec })?;
    let m = &inst.model;
    let targets = inst.targets.clone().unwrap_or_default();
    Ok(Summary {
        gadget_states,
        states: m.num_states(),
        valid: validate(m).is_valid(),
        safe: safe(m)?.values,
        buchi: buchi(m, &targets, SemanticsMode::Truncated)?.values,
        names: m.state_names().to_vec(),
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let s = run_example()?;
    println!("two-street gadget: {} states", s.gadget_states);
    println!("2x3 street grid: {} states, valid: {}", s.states, s.valid);
    for (i, name) in s.names.iter().enumerate().filter(|(_, n)| !n.contains('~')) {
        println!("{name}: safe {} buchi {}", s.safe.as_slice()[i], s.buchi.as_slice()[i]);
    }
    Ok(())
}
