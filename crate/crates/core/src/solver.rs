//! Exact MWIS solving at desk scale.
//!
//! [`brute_force_mwis`] is the ground truth for every property test. It only
//! reads the graph through its public query API and shares no code with the
//! reduction rules. [`branch_and_reduce_solve`] is the practical solver for
//! kernels, and [`solve_subset`] is the small bitmask solver rules use for
//! their bounded subproblems.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::graph::{VertexId, VertexSet, Weight, WeightedGraph};
use crate::trace::Solution;

pub const BRUTE_FORCE_BOUND: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveBudget {
    pub brute_force_bound: usize,
    pub node_limit: u64,
    pub time_limit: Option<Duration>,
}

impl Default for SolveBudget {
    fn default() -> Self {
        SolveBudget { brute_force_bound: BRUTE_FORCE_BOUND, node_limit: 50_000_000, time_limit: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Optimal(Solution),
    /// Budget ran out: `best` is a valid independent set, `bound` an upper bound on α.
    TimedOut { best: Solution, bound: Weight },
}

impl SolveOutcome {
    pub fn solution(&self) -> &Solution {
        match self {
            SolveOutcome::Optimal(s) => s,
            SolveOutcome::TimedOut { best, .. } => best,
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, SolveOutcome::Optimal(_))
    }
}

/// Exhaustive enumeration of all independent sets. Among optimal sets, the
/// lexicographically smallest sorted id sequence is returned.
pub fn brute_force_mwis(g: &WeightedGraph) -> Result<Solution, SolveError> {
    let verts: Vec<VertexId> = g.vertices().collect();
    if verts.len() > BRUTE_FORCE_BOUND {
        return Err(SolveError::TooLarge(verts.len(), BRUTE_FORCE_BOUND));
    }
    let mut best: Option<(Weight, Vec<VertexId>)> = None;
    let mut current = Vec::new();
    brute_rec(g, &verts, 0, 0, &mut current, &mut best);
    let (weight, set) = best.expect("the empty set is always independent");
    Ok(Solution { vertices: set.into_iter().collect(), weight })
}

fn brute_rec(
    g: &WeightedGraph,
    verts: &[VertexId],
    i: usize,
    weight: Weight,
    current: &mut Vec<VertexId>,
    best: &mut Option<(Weight, Vec<VertexId>)>,
) {
    if i == verts.len() {
        let better = match best {
            None => true,
            Some((bw, bs)) => weight > *bw || (weight == *bw && current.as_slice() < bs.as_slice()),
        };
        if better {
            *best = Some((weight, current.clone()));
        }
        return;
    }
    let v = verts[i];
    if current.iter().all(|&u| !g.has_edge(u, v)) {
        current.push(v);
        brute_rec(g, verts, i + 1, weight + g.weight(v), current, best);
        current.pop();
    }
    brute_rec(g, verts, i + 1, weight, current, best);
}

/// All independent sets of `g` (including the empty set), or `Aborted` once
/// more than `cap` sets exist.
pub fn enumerate_independent_sets(g: &WeightedGraph, cap: usize) -> Result<Vec<VertexSet>, SolveError> {
    let verts: Vec<VertexId> = g.vertices().collect();
    enumerate_in(g, &verts, cap)
}

/// Independent sets of `G[verts]`.
pub fn enumerate_in(g: &WeightedGraph, verts: &[VertexId], cap: usize) -> Result<Vec<VertexSet>, SolveError> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    if enum_rec(g, verts, 0, &mut current, &mut out, cap) {
        Ok(out)
    } else {
        Err(SolveError::Aborted(cap))
    }
}

fn enum_rec(
    g: &WeightedGraph,
    verts: &[VertexId],
    i: usize,
    current: &mut Vec<VertexId>,
    out: &mut Vec<VertexSet>,
    cap: usize,
) -> bool {
    if i == verts.len() {
        if out.len() >= cap {
            return false;
        }
        out.push(current.iter().copied().collect());
        return true;
    }
    let v = verts[i];
    if current.iter().all(|&u| !g.has_edge(u, v)) {
        current.push(v);
        let ok = enum_rec(g, verts, i + 1, current, out, cap);
        current.pop();
        if !ok {
            return false;
        }
    }
    enum_rec(g, verts, i + 1, current, out, cap)
}

/// Greedy partition of `verts` into cliques: each clique starts from the
/// heaviest unassigned vertex and repeatedly takes the heaviest vertex adjacent
/// to all current members. Ties go to the lower id.
pub fn greedy_clique_partition(g: &WeightedGraph, verts: &[VertexId]) -> Vec<Vec<VertexId>> {
    let mut order: Vec<VertexId> = verts.to_vec();
    order.sort_by(|&a, &b| g.weight(b).cmp(&g.weight(a)).then(a.cmp(&b)));
    let mut assigned = vec![false; order.len()];
    let mut cliques = Vec::new();
    for i in 0..order.len() {
        if assigned[i] {
            continue;
        }
        assigned[i] = true;
        let mut clique = vec![order[i]];
        for j in i + 1..order.len() {
            if !assigned[j] && clique.iter().all(|&c| g.has_edge(c, order[j])) {
                assigned[j] = true;
                clique.push(order[j]);
            }
        }
        cliques.push(clique);
    }
    cliques
}

/// Upper bound on `α_ω(g)`: sum of the heaviest weight of each greedy clique.
pub fn clique_cover_bound(g: &WeightedGraph) -> Weight {
    let verts: Vec<VertexId> = g.vertices().collect();
    clique_cover_bound_of(g, &verts)
}

pub fn clique_cover_bound_of(g: &WeightedGraph, verts: &[VertexId]) -> Weight {
    greedy_clique_partition(g, verts)
        .iter()
        .map(|c| c.iter().map(|&v| g.weight(v)).max().unwrap_or(0))
        .sum()
}

/// Largest subgraph [`solve_subset`] accepts.
pub const SUBSET_LIMIT: usize = 64;

/// Exact MWIS of `G[verts]` for at most 64 vertices (bitmask branch and bound).
/// Returns `None` when `verts` is too large.
pub fn solve_subset(g: &WeightedGraph, verts: &[VertexId]) -> Option<(Weight, Vec<VertexId>)> {
    if verts.len() > SUBSET_LIMIT {
        return None;
    }
    let n = verts.len();
    let mut adj = vec![0u64; n];
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(verts[i], verts[j]) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    let weights: Vec<Weight> = verts.iter().map(|&v| g.weight(v)).collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = (0, 0u64);
    mask_search(&adj, &weights, all, 0, 0, &mut best);
    let set = (0..n).filter(|&i| best.1 >> i & 1 == 1).map(|i| verts[i]).collect();
    Some((best.0, set))
}

/// `α_ω(G[verts])`, or `None` if too large.
pub fn alpha_of(g: &WeightedGraph, verts: &[VertexId]) -> Option<Weight> {
    solve_subset(g, verts).map(|(w, _)| w)
}

fn mask_weight(weights: &[Weight], mut m: u64) -> Weight {
    let mut w = 0;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        w += weights[i];
        m &= m - 1;
    }
    w
}

fn mask_search(adj: &[u64], weights: &[Weight], mut cand: u64, mut acc_w: Weight, mut acc: u64, best: &mut (Weight, u64)) {
    // isolated vertices are always taken
    loop {
        let mut changed = false;
        let mut m = cand;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            let nb = adj[i] & cand;
            if nb == 0 || mask_weight(weights, nb) <= weights[i] {
                acc |= 1 << i;
                acc_w += weights[i];
                cand &= !(nb | 1 << i);
                m &= !nb;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if cand == 0 {
        if acc_w > best.0 {
            *best = (acc_w, acc);
        }
        return;
    }
    if acc_w + mask_weight(weights, cand) <= best.0 {
        return;
    }
    // branch on the vertex with most candidate neighbors
    let mut m = cand;
    let mut pick = 0;
    let mut pick_deg = 0;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        let d = (adj[i] & cand).count_ones();
        if d > pick_deg {
            pick_deg = d;
            pick = i;
        }
    }
    mask_search(adj, weights, cand & !(adj[pick] | 1 << pick), acc_w + weights[pick], acc | 1 << pick, best);
    mask_search(adj, weights, cand & !(1 << pick), acc_w, acc, best);
}

/// Dense bitset graph used by the branch-and-reduce solver.
struct Dense {
    ids: Vec<VertexId>,
    weights: Vec<Weight>,
    adj: Vec<Vec<usize>>,
    words: usize,
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(words: usize) -> Self {
        Bits(vec![0; words])
    }
    fn full(n: usize, words: usize) -> Self {
        let mut b = Self::empty(words);
        for i in 0..n {
            b.set(i);
        }
        b
    }
    #[inline]
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    #[inline]
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    #[inline]
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

struct Search<'a> {
    d: &'a Dense,
    nodes: u64,
    node_limit: u64,
    deadline: Option<Instant>,
    exhausted: bool,
}

impl Search<'_> {
    fn out_of_budget(&mut self) -> bool {
        if self.exhausted {
            return true;
        }
        if self.nodes >= self.node_limit {
            self.exhausted = true;
        } else if let Some(dl) = self.deadline {
            if self.nodes.is_multiple_of(256) && Instant::now() >= dl {
                self.exhausted = true;
            }
        }
        self.exhausted
    }

    fn nbr_weight(&self, v: usize, active: &Bits) -> Weight {
        self.d.adj[v].iter().filter(|&&u| active.get(u)).map(|&u| self.d.weights[u]).sum()
    }

    /// Neighborhood removal, domination and isolated-vertex inclusion.
    fn reduce(&self, active: &mut Bits, taken: &mut Vec<usize>) {
        loop {
            let mut changed = false;
            let verts: Vec<usize> = active.iter().collect();
            for v in verts {
                if !active.get(v) {
                    continue;
                }
                if self.d.weights[v] >= self.nbr_weight(v, active) {
                    taken.push(v);
                    active.clear(v);
                    for &u in &self.d.adj[v] {
                        active.clear(u);
                    }
                    changed = true;
                    continue;
                }
                // exclude v if some neighbor u has N[u] ⊆ N[v] and ω(u) ≥ ω(v)
                let dominated = self.d.adj[v].iter().any(|&u| {
                    active.get(u)
                        && self.d.weights[u] >= self.d.weights[v]
                        && self.d.adj[u]
                            .iter()
                            .all(|&x| x == v || !active.get(x) || self.d.adj[v].binary_search(&x).is_ok())
                });
                if dominated {
                    active.clear(v);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    fn components(&self, active: &Bits) -> Vec<Bits> {
        let mut seen = Bits::empty(self.d.words);
        let mut comps = Vec::new();
        for s in active.iter() {
            if seen.get(s) {
                continue;
            }
            let mut comp = Bits::empty(self.d.words);
            let mut stack = vec![s];
            seen.set(s);
            while let Some(v) = stack.pop() {
                comp.set(v);
                for &u in &self.d.adj[v] {
                    if active.get(u) && !seen.get(u) {
                        seen.set(u);
                        stack.push(u);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    fn bound(&self, active: &Bits) -> Weight {
        let mut order: Vec<usize> = active.iter().collect();
        order.sort_by(|&a, &b| self.d.weights[b].cmp(&self.d.weights[a]).then(a.cmp(&b)));
        let mut cliques: Vec<Vec<usize>> = Vec::new();
        let mut total = 0;
        for v in order {
            let slot = cliques
                .iter_mut()
                .find(|c| c.iter().all(|&x| self.d.adj[v].binary_search(&x).is_ok()));
            match slot {
                Some(c) => c.push(v),
                None => {
                    total += self.d.weights[v];
                    cliques.push(vec![v]);
                }
            }
        }
        total
    }

    /// Best independent set of `G[active]` with weight above `floor`, if found.
    fn solve(&mut self, mut active: Bits, floor: Weight) -> (Weight, Vec<usize>) {
        self.nodes += 1;
        let mut taken = Vec::new();
        self.reduce(&mut active, &mut taken);
        let base: Weight = taken.iter().map(|&v| self.d.weights[v]).sum();
        if active.is_empty() {
            return (base, taken);
        }
        let comps = self.components(&active);
        if comps.len() > 1 {
            let mut w = base;
            for c in comps {
                let (cw, cs) = self.solve(c, 0);
                w += cw;
                taken.extend(cs);
            }
            return (w, taken);
        }
        let local_floor = floor.saturating_sub(base);
        if self.bound(&active) <= local_floor {
            return (base, taken);
        }
        let pick = active
            .iter()
            .max_by(|&a, &b| {
                let da = self.d.adj[a].iter().filter(|&&u| active.get(u)).count();
                let db = self.d.adj[b].iter().filter(|&&u| active.get(u)).count();
                da.cmp(&db).then(self.d.weights[a].cmp(&self.d.weights[b])).then(b.cmp(&a))
            })
            .expect("active is non-empty");
        let mut best: (Weight, Vec<usize>) = (0, Vec::new());
        // include
        let mut inc = active.clone();
        inc.clear(pick);
        for &u in &self.d.adj[pick] {
            inc.clear(u);
        }
        let (iw, mut is) = self.solve(inc, local_floor.saturating_sub(self.d.weights[pick]));
        is.push(pick);
        let iw = iw + self.d.weights[pick];
        if iw > best.0 || best.1.is_empty() {
            best = (iw, is);
        }
        if !self.out_of_budget() {
            let mut exc = active;
            exc.clear(pick);
            let (ew, es) = self.solve(exc, local_floor.max(best.0));
            if ew > best.0 {
                best = (ew, es);
            }
        }
        taken.extend(best.1);
        (base + best.0, taken)
    }
}

/// Branch-and-reduce MWIS solver. Branches on a maximum-degree vertex (ties:
/// heavier, then lower id), applies neighborhood removal and domination at every
/// node, splits components and prunes with a greedy clique cover bound.
pub fn branch_and_reduce_solve(g: &WeightedGraph, budget: &SolveBudget) -> SolveOutcome {
    let ids: Vec<VertexId> = g.vertices().collect();
    let index = |v: VertexId| ids.binary_search(&v).expect("active vertex");
    let n = ids.len();
    let words = n.div_ceil(64).max(1);
    let mut adj: Vec<Vec<usize>> = ids.iter().map(|&v| g.adjacency(v).iter().map(|&u| index(u)).collect()).collect();
    for a in &mut adj {
        a.sort_unstable();
    }
    let d = Dense { weights: ids.iter().map(|&v| g.weight(v)).collect(), ids, adj, words };
    let mut search = Search {
        d: &d,
        nodes: 0,
        node_limit: budget.node_limit.max(1),
        deadline: budget.time_limit.map(|t| Instant::now() + t),
        exhausted: false,
    };
    let all = Bits::full(n, words);
    let root_bound = search.bound(&all);
    let (w, set) = search.solve(all, 0);
    let vertices: VertexSet = set.into_iter().map(|i| d.ids[i]).collect();
    let sol = Solution { weight: w, vertices };
    debug_assert!(g.is_independent(&sol.vertices));
    if search.exhausted {
        SolveOutcome::TimedOut { best: sol, bound: root_bound.max(w) }
    } else {
        SolveOutcome::Optimal(sol)
    }
}

/// Exact solve: brute force for tiny graphs, branch and reduce otherwise.
pub fn solve_exact(g: &WeightedGraph, budget: &SolveBudget) -> SolveOutcome {
    if g.num_vertices() <= budget.brute_force_bound.min(BRUTE_FORCE_BOUND) {
        SolveOutcome::Optimal(brute_force_mwis(g).expect("within bound"))
    } else {
        branch_and_reduce_solve(g, budget)
    }
}
