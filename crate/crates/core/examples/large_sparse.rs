//! Reduces a large sparse random graph with the first three tiers and prints
//! the stats document.

use std::time::Instant;

use mwis_kernel::generate::gen_sparse;
use mwis_kernel::{reduce, ReducerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(100_000);
    let g = gen_sparse(n, 4.0, 1, 100, 7);
    let config = ReducerConfig { record_timing: true, ..ReducerConfig::first_tiers(3) };
    let start = Instant::now();
    let result = reduce(g, &config)?;
    println!("{}", result.stats.to_json());
    println!("reduced {n} vertices to {} in {:.2?}", result.kernel.num_vertices(), start.elapsed());
    Ok(())
}
