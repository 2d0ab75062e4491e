//! Integer max flow (Dinic) and the critical weighted independent set.

use std::collections::VecDeque;

use crate::graph::{VertexId, VertexSet, Weight, WeightedGraph};
use crate::trace::Rule;

use super::{include, RuleOutcome, RuleResult, Session};

#[derive(Debug, Clone, Copy)]
struct Arc {
    to: usize,
    cap: Weight,
}

/// Directed network with integer capacities. Arcs are stored in pairs so that
/// arc `i ^ 1` is the residual reverse of arc `i`.
#[derive(Debug, Clone, Default)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: Weight,
    /// `reachable[x]`: node `x` is reachable from the source in the residual
    /// network, i.e. lies on the source side of the minimal minimum cut.
    pub reachable: Vec<bool>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork { arcs: Vec::new(), out: vec![Vec::new(); nodes] }
    }

    pub fn num_nodes(&self) -> usize {
        self.out.len()
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: Weight) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    fn levels(&self, s: usize) -> Vec<u32> {
        let mut level = vec![u32::MAX; self.num_nodes()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &a in &self.out[x] {
                let Arc { to, cap } = self.arcs[a];
                if cap > 0 && level[to] == u32::MAX {
                    level[to] = level[x] + 1;
                    queue.push_back(to);
                }
            }
        }
        level
    }

    /// Iterative blocking-flow search along level-increasing arcs.
    fn augment(&mut self, s: usize, t: usize, level: &[u32], next: &mut [usize]) -> Weight {
        let mut total = 0;
        let mut path: Vec<usize> = Vec::new();
        let mut x = s;
        loop {
            if x == t {
                let push = path.iter().map(|&a| self.arcs[a].cap).min().expect("non-empty path");
                for &a in &path {
                    self.arcs[a].cap -= push;
                    self.arcs[a ^ 1].cap += push;
                }
                total += push;
                // restart from the tail of the first saturated arc
                let cut = path.iter().position(|&a| self.arcs[a].cap == 0).expect("one arc saturates");
                path.truncate(cut);
                x = path.last().map_or(s, |&a| self.arcs[a].to);
                continue;
            }
            let mut advanced = false;
            while next[x] < self.out[x].len() {
                let a = self.out[x][next[x]];
                let Arc { to, cap } = self.arcs[a];
                if cap > 0 && level[to] == level[x] + 1 {
                    path.push(a);
                    x = to;
                    advanced = true;
                    break;
                }
                next[x] += 1;
            }
            if advanced {
                continue;
            }
            // dead end: retreat
            let Some(a) = path.pop() else {
                return total;
            };
            x = self.arcs[a ^ 1].to;
            next[x] += 1;
        }
    }

    /// Maximum `s`-`t` flow; consumes the capacities into residual form.
    pub fn max_flow(&mut self, s: usize, t: usize) -> MaxFlow {
        let mut value = 0;
        loop {
            let level = self.levels(s);
            if level[t] == u32::MAX {
                let reachable = level.iter().map(|&l| l != u32::MAX).collect();
                return MaxFlow { value, reachable };
            }
            let mut next = vec![0; self.num_nodes()];
            value += self.augment(s, t, &level, &mut next);
        }
    }
}

/// Result of the selection flow on `g`: the vertices on the source side of
/// the minimal minimum cut, and the flow value.
fn selection(g: &WeightedGraph) -> (Vec<VertexId>, Weight) {
    let verts: Vec<VertexId> = g.vertices().collect();
    let n = verts.len();
    let mut index = vec![usize::MAX; g.id_bound()];
    for (i, v) in verts.iter().enumerate() {
        index[v.index()] = i;
    }
    let total = g.total_weight();
    let infinite = total + 1;
    let (s, t) = (2 * n, 2 * n + 1);
    let mut net = FlowNetwork::new(2 * n + 2);
    for (i, &v) in verts.iter().enumerate() {
        net.add_arc(s, i, g.weight(v));
        net.add_arc(n + i, t, g.weight(v));
        for u in g.adjacency(v) {
            net.add_arc(i, n + index[u.index()], infinite);
        }
    }
    let flow = net.max_flow(s, t);
    let side = (0..n).filter(|&i| flow.reachable[i]).map(|i| verts[i]).collect();
    (side, flow.value)
}

/// `max { ω(I) - ω(N(I)) : I independent }`.
pub fn critical_weight_value(g: &WeightedGraph) -> Weight {
    let (_, cut) = selection(g);
    g.total_weight() - cut
}

/// A critical weighted independent set: the vertices of the source side that
/// have no neighbor on the source side.
pub fn critical_set(g: &WeightedGraph) -> VertexSet {
    let (side, _) = selection(g);
    let inside: VertexSet = side.iter().copied().collect();
    side.into_iter().filter(|v| g.adjacency(*v).iter().all(|u| !inside.contains(u))).collect()
}

/// Includes a non-empty critical weighted independent set.
pub fn try_cwis(s: &mut Session) -> RuleResult {
    let ic = critical_set(&s.graph);
    if ic.is_empty() {
        return Ok(RuleOutcome::NotApplicable);
    }
    let vs: Vec<VertexId> = ic.into_iter().collect();
    include(s, Rule::Cwis, &vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::testutil::{check_events, graph, vid};
    use crate::solver::enumerate_independent_sets;

    fn brute_critical(g: &WeightedGraph) -> Weight {
        enumerate_independent_sets(g, usize::MAX)
            .unwrap()
            .iter()
            .map(|set| g.weight_of(set) as i64 - g.weight_of(&g.set_neighborhood(set).unwrap()) as i64)
            .max()
            .unwrap() as Weight
    }

    /// Exhaustive minimum cut over all source sides.
    fn brute_min_cut(nodes: usize, arcs: &[(usize, usize, Weight)], s: usize, t: usize) -> Weight {
        let mut best = Weight::MAX;
        for mask in 0u32..1 << nodes {
            if mask >> s & 1 == 0 || mask >> t & 1 == 1 {
                continue;
            }
            let cut = arcs
                .iter()
                .filter(|&&(a, b, _)| mask >> a & 1 == 1 && mask >> b & 1 == 0)
                .map(|&(_, _, c)| c)
                .sum();
            best = best.min(cut);
        }
        best
    }

    #[test]
    fn single_edge_flow() {
        let g = graph(&[1, 5], &[(0, 1)]);
        let (_, value) = selection(&g);
        assert_eq!(value, 2);
        assert_eq!(critical_weight_value(&g), 4);
    }

    #[test]
    fn empty_graph() {
        let g = WeightedGraph::new();
        assert_eq!(critical_weight_value(&g), 0);
        let mut net = FlowNetwork::new(2);
        let flow = net.max_flow(0, 1);
        assert_eq!(flow.value, 0);
    }

    #[test]
    fn path_example() {
        let g = graph(&[1, 5, 1], &[(0, 1), (1, 2)]);
        assert_eq!(critical_weight_value(&g), 3);
        assert_eq!(critical_set(&g), [vid(1)].into());
        let mut s = Session::new(g.clone());
        let ev = try_cwis(&mut s).unwrap();
        assert_eq!(ev.event().unwrap().delta, 5);
        assert_eq!(s.graph.num_vertices(), 0);
    }

    #[test]
    fn balanced_edge_and_isolated_vertex() {
        let mut s = Session::new(graph(&[1, 1], &[(0, 1)]));
        assert_eq!(try_cwis(&mut s).unwrap(), RuleOutcome::NotApplicable);
        let mut s = Session::new(graph(&[3], &[]));
        assert!(try_cwis(&mut s).unwrap().applied());
    }

    #[test]
    fn flow_matches_min_cut() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let nodes = rng.gen_range(2..=10);
            let mut arcs = Vec::new();
            for a in 0..nodes {
                for b in 0..nodes {
                    if a != b && rng.gen_bool(0.3) {
                        arcs.push((a, b, rng.gen_range(0..10)));
                    }
                }
            }
            let mut net = FlowNetwork::new(nodes);
            for &(a, b, c) in &arcs {
                net.add_arc(a, b, c);
            }
            let flow = net.max_flow(0, nodes - 1);
            assert_eq!(flow.value, brute_min_cut(nodes, &arcs, 0, nodes - 1));
        }
    }

    #[test]
    fn critical_value_matches_enumeration() {
        for seed in 0..300u64 {
            let g = crate::generate::gen_random(1 + (seed % 12) as usize, 0.3, 1, 10, seed);
            let ic = critical_set(&g);
            assert!(g.is_independent(&ic));
            let value = critical_weight_value(&g);
            assert_eq!(value, brute_critical(&g), "seed {seed}");
            assert_eq!(g.weight_of(&ic) - g.weight_of(&g.set_neighborhood(&ic).unwrap()), value);
            let mut s = Session::new(g.clone());
            if try_cwis(&mut s).unwrap().applied() {
                check_events(&g, &s, 0);
            }
        }
    }
}
