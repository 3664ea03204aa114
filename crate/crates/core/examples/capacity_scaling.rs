// Time the fixed-point Büchi solver and the explicit unfolding on one grid
// model for growing capacities and print the benchmark CSV.

use cmdp::bench::{run_bench, write_csv, BenchConfig, BenchRecord};
use cmdp::Result;

pub fn run_example(caps: Vec<u64>, repeats: usize) -> Result<Vec<BenchRecord>> {
    run_bench(&BenchConfig { caps, grid_n: vec![3], repeats, ..BenchConfig::default() })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let records = run_example(vec![10, 20, 40, 80], 3)?;
    write_csv(&records, std::io::stdout().lock())
}
