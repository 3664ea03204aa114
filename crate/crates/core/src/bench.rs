//! Capacity-scaling benchmark: the fixed-point Büchi solver against the
//! explicit unfolding on grid-world models.

use std::fmt;
use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::explicit::{almost_sure_buchi_rounds, unfold};
use crate::gen::{gen_grid, GridSpec, RoverControl};
use crate::model::{Instance, StateId};
use crate::solvers::{buchi, SemanticsMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SolverKind {
    CmdpBuchi,
    ExplicitMec,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::CmdpBuchi => "cmdp-buchi",
            SolverKind::ExplicitMec => "explicit-mec",
        })
    }
}

impl Serialize for SolverKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One CSV row: a (model, capacity, solver) cell averaged over repeats.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub model_id: String,
    pub states: usize,
    pub reloads: usize,
    pub capacity: u64,
    pub solver: SolverKind,
    pub time_ms: f64,
    pub iterations: usize,
    pub nodes: usize,
}

/// Result of a single timed run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub time_ms: f64,
    /// Positive-reachability sweeps summed over pruning rounds for the
    /// fixed-point solver; shrinking rounds of the almost-sure loop for the
    /// unfolding.
    pub iterations: usize,
    /// States of the model, or nodes of the unfolding.
    pub nodes: usize,
}

/// Solve the Büchi objective once with the chosen solver at `capacity`.
pub fn measure(instance: &Instance, capacity: u64, solver: SolverKind) -> Result<Measurement> {
    let model = instance.model.with_capacity(capacity);
    let targets: &[StateId] = instance.targets.as_deref().unwrap_or(&[]);
    let start = Instant::now();
    let (iterations, nodes) = match solver {
        SolverKind::CmdpBuchi => {
            let res = buchi(&model, targets, SemanticsMode::Truncated)?;
            (res.posreach_iterations.iter().sum(), model.num_states())
        }
        SolverKind::ExplicitMec => {
            let x = unfold(&model)?;
            let (_, rounds) = almost_sure_buchi_rounds(&x, targets);
            (rounds, x.num_nodes())
        }
    };
    let time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(Measurement { time_ms, iterations, nodes })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub caps: Vec<u64>,
    pub grid_n: Vec<usize>,
    pub repeats: usize,
    pub seed: u64,
    pub rover: RoverControl,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { caps: vec![10, 20, 40, 80], grid_n: vec![3], repeats: 5, seed: 0, rover: RoverControl::Joint }
    }
}

pub fn grid_instance(n: usize, seed: u64, rover: RoverControl) -> Result<Instance> {
    gen_grid(&GridSpec { n, seed, rover, ..GridSpec::default() })
}

/// Every (grid, capacity, solver) cell with the mean time over `repeats`
/// runs, sorted by model, capacity and solver.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let repeats = config.repeats.max(1);
    let mut records = Vec::new();
    for &n in &config.grid_n {
        let instance = grid_instance(n, config.seed, config.rover)?;
        let model_id = format!("grid-n{n}-seed{}", config.seed);
        for &cap in &config.caps {
            for solver in [SolverKind::CmdpBuchi, SolverKind::ExplicitMec] {
                let mut total = 0.0;
                let mut last = None;
                for _ in 0..repeats {
                    let m = measure(&instance, cap, solver)?;
                    total += m.time_ms;
                    last = Some(m);
                }
                let m = last.expect("at least one repeat");
                records.push(BenchRecord {
                    model_id: model_id.clone(),
                    states: instance.model.num_states(),
                    reloads: instance.model.num_reloads(),
                    capacity: cap,
                    solver,
                    time_ms: total / repeats as f64,
                    iterations: m.iterations,
                    nodes: m.nodes,
                });
            }
        }
    }
    records.sort_by(|a, b| (&a.model_id, a.capacity, a.solver).cmp(&(&b.model_id, b.capacity, b.solver)));
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_rows() {
        let cfg = BenchConfig { caps: vec![5, 10], grid_n: vec![2], repeats: 1, ..Default::default() };
        let records = run_bench(&cfg).unwrap();
        assert_eq!(records.len(), 4);
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "model_id,states,reloads,capacity,solver,time_ms,iterations,nodes");
        assert_eq!(text.lines().count(), 5);
        let explicit = records.iter().find(|r| r.solver == SolverKind::ExplicitMec && r.capacity == 10).unwrap();
        assert_eq!(explicit.nodes, 11 * 16 + 1);
    }
}
