//! Runs every example and checks its reported numbers.

mod running_example {
    include!("../examples/running_example.rs");
}
mod safety {
    include!("../examples/safety.rs");
}
mod positive_reachability {
    include!("../examples/positive_reachability.rs");
}
mod buchi_synthesis {
    include!("../examples/buchi_synthesis.rs");
}
mod simulate_and_verify {
    include!("../examples/simulate_and_verify.rs");
}
mod explicit_oracle {
    include!("../examples/explicit_oracle.rs");
}
mod grid_world {
    include!("../examples/grid_world.rs");
}
mod street_network {
    include!("../examples/street_network.rs");
}
mod capacity_scaling {
    include!("../examples/capacity_scaling.rs");
}

use cmdp::ExtNat;

fn vals(v: &cmdp::ValueVector) -> Vec<Option<u64>> {
    v.iter().map(|x| x.finite()).collect()
}

#[test]
fn example_file() {
    let s = running_example::run_example().unwrap();
    assert_eq!(vals(&s.safe), [Some(2), Some(1), Some(5), Some(4), Some(3)]);
    assert_eq!(vals(&s.posreach), [Some(2), Some(0), Some(5), Some(4), Some(0)]);
    assert_eq!(s.buchi, s.posreach);
    assert_eq!(s.s1_rule, vec![(2, "a2".to_owned()), (10, "a1".to_owned())]);
}

#[test]
fn safety_drops_unreachable_station() {
    let s = safety::run_example().unwrap();
    assert_eq!(vals(&s.min_init_cons), [Some(5), Some(3), Some(2), Some(7)]);
    assert_eq!(vals(&s.safe), [Some(5), Some(3), Some(2), None]);
    assert_eq!(s.dropped_reloads, 1);
    assert_eq!(s.safe_at_a, vec!["next"]);
}

#[test]
fn gamble_reaches_but_does_not_recur() {
    let s = positive_reachability::run_example().unwrap();
    assert_eq!(vals(&s.posreach), [Some(0), Some(3), Some(2), None]);
    assert!(s.buchi.iter().all(|v| *v == ExtNat::Inf));
    assert_eq!(s.iterates.last(), Some(&s.posreach));
}

#[test]
fn decisions_and_json() {
    let s = buchi_synthesis::run_example().unwrap();
    assert_eq!(s.answers, vec![(0, false), (1, false), (2, true), (3, true), (4, true)]);
    assert!(s.round_trip);
    assert!(s.strategy_json.contains("\"threshold\": 10"));
}

#[test]
fn simulation_visits_targets() {
    let s = simulate_and_verify::run_example().unwrap();
    assert!(s.holds);
    assert!(s.all_runs_full_length);
    assert!(s.visits.iter().all(|&v| v > 0));
}

#[test]
fn oracle_agrees() {
    let s = explicit_oracle::run_example().unwrap();
    assert_eq!((s.nodes, s.choices), (106, 211));
    assert_eq!(s.mismatches, [0, 0, 0]);
    assert_eq!(s.mecs.len(), 3);
    assert_eq!(s.mecs[1], vec!["s2@19"]);
}

#[test]
fn grid_mission() {
    let s = grid_world::run_example().unwrap();
    assert_eq!((s.states, s.reloads), (256, 16));
    assert!(s.winning > 0);
    assert!(s.target_visits > 0);
}

#[test]
fn streets() {
    let s = street_network::run_example().unwrap();
    assert_eq!(s.gadget_states, 2 + 3 + 1);
    assert!(s.valid);
    assert!(s.buchi.iter().any(|v| v.is_finite()));
    let i21 = s.names.iter().position(|n| n == "i2.1").unwrap();
    assert_eq!(s.buchi.as_slice()[i21], s.safe.as_slice()[i21]);
}

#[test]
fn scaling_rows() {
    let records = capacity_scaling::run_example(vec![5, 10], 1).unwrap();
    assert_eq!(records.len(), 4);
    for r in records.iter().filter(|r| r.solver == cmdp::bench::SolverKind::ExplicitMec) {
        assert_eq!(r.nodes as u64, (r.capacity + 1) * r.states as u64 + 1);
    }
}
