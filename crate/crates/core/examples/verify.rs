//! Verifies a kernel and trace against the input, then shows the report for
//! a trace whose offset was tampered with.

use mwis_kernel::generate::gen_random;
use mwis_kernel::solver::{solve_exact, SolveBudget};
use mwis_kernel::trace::ReductionTrace;
use mwis_kernel::{reduce, verify_kernel, ReducerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = gen_random(50, 0.1, 1, 10, 17);
    let config = ReducerConfig::default();
    let r = reduce(g.clone(), &config)?;
    let sol = solve_exact(&r.kernel, &SolveBudget::default()).solution().clone();

    let report = verify_kernel(&g, &r.kernel, &r.trace, &sol, &config)?;
    println!("honest trace: passed={}\n{}", report.passed(), serde_json::to_string_pretty(&report)?);

    let tampered = r.trace.to_json_lines().replacen("\"delta\":", "\"delta\":1", 1);
    let bad = ReductionTrace::from_json_lines(&tampered)?;
    let report = verify_kernel(&g, &r.kernel, &bad, &sol, &config)?;
    println!("tampered trace: passed={}, errors {:?}", report.passed(), report.errors);
    Ok(())
}
