//! Seeded random instance generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{VertexId, Weight, WeightedGraph};

/// Erdős–Rényi `G(n, p)` with weights uniform in `[wmin, wmax]`.
pub fn gen_random(n: usize, edge_prob: f64, wmin: Weight, wmax: Weight, seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = WeightedGraph::new();
    for _ in 0..n {
        g.add_vertex(rng.gen_range(wmin..=wmax)).expect("small weights");
    }
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(edge_prob.clamp(0.0, 1.0)) {
                g.add_edge(VertexId(u), VertexId(v)).expect("distinct active vertices");
            }
        }
    }
    g
}

/// Sparse random graph with `n * avg_degree / 2` uniformly drawn edges
/// (duplicates and loops are redrawn).
pub fn gen_sparse(n: usize, avg_degree: f64, wmin: Weight, wmax: Weight, seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = WeightedGraph::new();
    for _ in 0..n {
        g.add_vertex(rng.gen_range(wmin..=wmax)).expect("small weights");
    }
    if n < 2 {
        return g;
    }
    let max_edges = n * (n - 1) / 2;
    let target = ((n as f64 * avg_degree / 2.0).round() as usize).min(max_edges);
    while g.num_edges() < target {
        let u = VertexId(rng.gen_range(0..n as u32));
        let v = VertexId(rng.gen_range(0..n as u32));
        if u != v {
            g.add_edge(u, v).expect("distinct active vertices");
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::write_metis;

    #[test]
    fn seeds_are_deterministic() {
        let a = gen_random(20, 0.3, 1, 10, 42);
        let b = gen_random(20, 0.3, 1, 10, 42);
        assert_eq!(write_metis(&a), write_metis(&b));
    }

    #[test]
    fn extreme_probabilities() {
        assert_eq!(gen_random(10, 0.0, 1, 5, 1).num_edges(), 0);
        assert_eq!(gen_random(10, 1.0, 1, 5, 1).num_edges(), 45);
    }

    #[test]
    fn sparse_edge_count() {
        let g = gen_sparse(1000, 4.0, 1, 100, 3);
        assert_eq!(g.num_edges(), 2000);
        assert!(g.vertices().all(|v| (1..=100).contains(&g.weight(v))));
    }
}
