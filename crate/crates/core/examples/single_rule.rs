//! Applies one rule at a time to a small hand-made graph and prints each
//! trace event, then lifts an optimal solution through it.

use mwis_kernel::reductions::{Budgets, Session};
use mwis_kernel::solver::brute_force_mwis;
use mwis_kernel::{try_rule, Rule, VertexId, WeightedGraph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a pendant vertex 0, a heavy vertex 2 over a triangle, and a 5-cycle tail
    let weights = [4, 3, 9, 2, 2, 5, 3, 3, 4, 5];
    let edges = [(0, 1), (1, 2), (2, 3), (2, 4), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9), (9, 5)];
    let g = WeightedGraph::from_edges(&weights, &edges)?;
    let mut s = Session::new(g.clone());
    let budgets = Budgets::default();
    for rule in [Rule::DegreeOne, Rule::NeighborhoodRemoval, Rule::Domination, Rule::Triangle, Rule::VShape] {
        let candidates: Vec<VertexId> = s.graph.vertices().collect();
        for v in candidates {
            if !s.graph.is_active(v) {
                continue;
            }
            if let Some(ev) = try_rule(&mut s, rule, v, &budgets)?.event() {
                println!("{:<22} at {:>2}: delta {:>2}, payload {}", rule.name(), v.0, ev.delta, serde_json::to_string(&ev.payload)?);
            }
        }
    }
    let opt = brute_force_mwis(&s.graph)?;
    let lifted = s.trace.lift(&opt, &g)?;
    println!("reduced graph has {} vertices, offset {}", s.graph.num_vertices(), s.trace.offset());
    println!("alpha = {} (reduced {} + offset {})", lifted.weight, opt.weight, s.trace.offset());
    assert_eq!(lifted.weight, brute_force_mwis(&g)?.weight);
    Ok(())
}
