//! Writes an instance in both file formats, reads it back, and round-trips a
//! reduction trace through its JSON-lines form before lifting with it.

use mwis_kernel::generate::gen_random;
use mwis_kernel::io::{parse_edge_list, parse_metis, write_edge_list, write_metis};
use mwis_kernel::solver::brute_force_mwis;
use mwis_kernel::trace::ReductionTrace;
use mwis_kernel::{reduce, ReducerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = gen_random(12, 0.3, 1, 9, 3);
    let metis = write_metis(&g);
    println!("METIS:\n{metis}");
    assert_eq!(parse_metis(&metis)?, g);

    let labels: Vec<u64> = (0..g.id_bound() as u64).map(|i| 100 + i).collect();
    let edges = write_edge_list(&g, &labels);
    println!("edge list (first lines):");
    edges.lines().take(5).for_each(|l| println!("  {l}"));
    let inst = parse_edge_list(&edges)?;
    assert_eq!(inst.graph.num_edges(), g.num_edges());

    let result = reduce(g.clone(), &ReducerConfig::all())?;
    let text = result.trace.to_json_lines();
    println!("trace:\n{text}");
    let trace = ReductionTrace::from_json_lines(&text)?;
    let lifted = trace.lift(&brute_force_mwis(&result.kernel)?, &g)?;
    println!("lifted through the reparsed trace: weight {}", lifted.weight);
    Ok(())
}
