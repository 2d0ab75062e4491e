//! Computes the critical weighted independent set of a random graph by max
//! flow and applies the corresponding reduction.

use mwis_kernel::generate::gen_random;
use mwis_kernel::reductions::{critical_set, critical_weight_value, try_cwis, Session};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for seed in 0..5 {
        let g = gen_random(40, 0.05, 1, 30, seed);
        let value = critical_weight_value(&g);
        let set = critical_set(&g);
        let mut s = Session::new(g.clone());
        let applied = try_cwis(&mut s)?.applied();
        println!(
            "seed {seed}: critical value {value}, critical set {} vertices, applied={applied}, n {} -> {}, offset {}",
            set.len(),
            g.num_vertices(),
            s.graph.num_vertices(),
            s.trace.offset()
        );
    }
    Ok(())
}
