//! Kernelizes a random graph with the default rules, solves the kernel
//! exactly and lifts the solution back to the input graph.

use mwis_kernel::generate::gen_random;
use mwis_kernel::solver::{solve_exact, SolveBudget};
use mwis_kernel::{reduce, ReducerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = gen_random(60, 0.08, 1, 20, 42);
    let result = reduce(g.clone(), &ReducerConfig::default())?;
    println!(
        "input n={} m={} -> kernel n={} m={}, offset {}, {} events",
        g.num_vertices(),
        g.num_edges(),
        result.kernel.num_vertices(),
        result.kernel.num_edges(),
        result.offset,
        result.trace.len()
    );
    let kernel_sol = solve_exact(&result.kernel, &SolveBudget::default()).solution().clone();
    let lifted = result.lift(&kernel_sol, &g)?;
    println!("kernel weight {} + offset {} = lifted weight {}", kernel_sol.weight, result.offset, lifted.weight);
    let direct = solve_exact(&g, &SolveBudget::default()).solution().weight;
    println!("solving the input directly gives {direct}");
    Ok(())
}
