//! Runs the four struction variants on the same vertex and compares the
//! resulting graph sizes, with and without a growth budget.

use mwis_kernel::reductions::{
    try_struction_extended, try_struction_extended_reduced, try_struction_modified, try_struction_original,
    RuleResult, Session, StructionBudget,
};
use mwis_kernel::solver::brute_force_mwis;
use mwis_kernel::{VertexId, WeightedGraph};

type Variant = fn(&mut Session, VertexId, &StructionBudget) -> RuleResult;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a light vertex 0 with four neighbors, two of them adjacent
    let weights = [1, 2, 3, 4, 2, 5, 1, 3];
    let edges = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 5), (2, 6), (3, 7), (4, 5), (6, 7)];
    let g = WeightedGraph::from_edges(&weights, &edges)?;
    let alpha = brute_force_mwis(&g)?.weight;
    let variants: [(&str, Variant); 4] = [
        ("original", try_struction_original),
        ("modified", try_struction_modified),
        ("extended", try_struction_extended),
        ("extended-reduced", try_struction_extended_reduced),
    ];
    let unbounded = StructionBudget { max_increase: 8, ..StructionBudget::default() };
    for (label, budget) in [("no growth", StructionBudget::default()), ("growth <= 8", unbounded)] {
        println!("budget: {label}");
        for (name, f) in variants {
            let mut s = Session::new(g.clone());
            let applied = f(&mut s, VertexId(0), &budget)?.applied();
            let reduced = brute_force_mwis(&s.graph)?.weight;
            println!(
                "  {name:<17} applied={applied:<5} n {} -> {}, alpha {alpha} = {reduced} + {}",
                g.num_vertices(),
                s.graph.num_vertices(),
                s.trace.offset()
            );
            assert_eq!(alpha, reduced + s.trace.offset());
        }
    }
    Ok(())
}
