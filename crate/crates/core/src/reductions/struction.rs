//! Struction: remove a center vertex `v` (offset `ω(v)`) and encode the ways a
//! solution can use `N(v)` instead through new vertices.
//!
//! Every variant first builds a [`Plan`] without touching the graph and checks
//! it against the [`StructionBudget`]; only then is the graph mutated.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::{VertexId, VertexSet, Weight, WeightedGraph};
use crate::trace::{Lift, Rule};

use super::{RuleOutcome, RuleResult, Session};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct StructionBudget {
    /// Max `|N(v)|`.
    pub max_neighborhood: usize,
    /// Max net growth in vertex count (created minus removed) per application.
    pub max_increase: usize,
    /// Max vertices created by one application.
    pub max_created: usize,
}

impl Default for StructionBudget {
    fn default() -> Self {
        StructionBudget { max_neighborhood: 15, max_increase: 0, max_created: 256 }
    }
}

/// A vertex to create: weight, original neighbors, and the originals it
/// stands for when lifting.
#[derive(Debug, Clone)]
struct NewVertex {
    weight: Weight,
    outer: VertexSet,
    expands: Vec<VertexId>,
}

#[derive(Debug, Default)]
struct Plan {
    remove: Vec<VertexId>,
    reweight: Vec<(VertexId, Weight)>,
    new: Vec<NewVertex>,
    /// Edges between new vertices, by index into `new`.
    inner_edges: BTreeSet<(usize, usize)>,
    /// Extra edges between surviving original vertices.
    original_edges: Vec<(VertexId, VertexId)>,
    /// The solution avoids these when `v` is taken back.
    watch: Vec<VertexId>,
}

impl Plan {
    /// Net vertex count after the change, including vertices reweighted to 0.
    fn fits(&self, budget: &StructionBudget) -> bool {
        let zeros = self.reweight.iter().filter(|&&(_, w)| w == 0).count();
        let removed = self.remove.len() + zeros;
        self.new.len() <= budget.max_created && self.new.len() <= removed + budget.max_increase
    }

    fn commit(self, s: &mut Session, rule: Rule, v: VertexId) -> RuleResult {
        let delta = s.graph.weight(v);
        let mut ch = s.change();
        ch.remove_all(self.remove.iter().copied())?;
        for &(u, w) in &self.reweight {
            ch.set_weight(u, w)?;
        }
        let mut ids = Vec::with_capacity(self.new.len());
        for nv in &self.new {
            ids.push(ch.create(nv.weight, nv.outer.iter().copied())?);
        }
        for &(i, j) in &self.inner_edges {
            ch.add_edge(ids[i], ids[j])?;
        }
        for &(a, b) in &self.original_edges {
            ch.add_edge(a, b)?;
        }
        let expansions = ids.iter().zip(self.new).map(|(&id, nv)| (id, nv.expands)).collect();
        ch.commit(rule, delta, Lift::Expand { expansions, watch: self.watch, fallback: vec![v] })
    }
}

fn closed_nbrs(g: &WeightedGraph, v: VertexId) -> VertexSet {
    g.adjacency(v).iter().copied().chain([v]).collect()
}

/// `N(set) \ excluded`.
fn outer_nbrs<'a>(g: &WeightedGraph, set: impl IntoIterator<Item = &'a VertexId>, excluded: &VertexSet) -> VertexSet {
    set.into_iter()
        .flat_map(|&u| g.adjacency(u).iter().copied())
        .filter(|u| !excluded.contains(u))
        .collect()
}

/// Shared construction of the original and modified variants. Returns `None`
/// when `ω(v)` is not minimal in `N[v]`.
fn pair_plan(g: &WeightedGraph, v: VertexId, modified: bool) -> Option<Plan> {
    let wv = g.weight(v);
    let nbrs = g.adjacency(v);
    if nbrs.iter().any(|&u| g.weight(u) < wv) {
        return None;
    }
    let only_v: VertexSet = [v].into();
    let mut plan = Plan {
        remove: vec![v],
        reweight: nbrs.iter().map(|&u| (u, g.weight(u) - wv)).collect(),
        watch: nbrs.to_vec(),
        ..Plan::default()
    };
    // (layer, second index) of each new vertex
    let mut keys = Vec::new();
    for (i, &x) in nbrs.iter().enumerate() {
        for &y in &nbrs[i + 1..] {
            if g.has_edge(x, y) {
                continue;
            }
            let mut outer = outer_nbrs(g, [x, y].iter(), &only_v);
            if modified {
                outer.extend(nbrs.iter().copied().filter(|&k| k != x));
            }
            let weight = if modified { g.weight(y) } else { wv };
            plan.new.push(NewVertex { weight, outer, expands: vec![x, y] });
            keys.push((x, y));
        }
    }
    for (i, &(q, x)) in keys.iter().enumerate() {
        for (j, &(r, y)) in keys.iter().enumerate().skip(i + 1) {
            if q != r || g.has_edge(x, y) {
                plan.inner_edges.insert((i, j));
            }
        }
    }
    if modified {
        for (i, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[i + 1..] {
                if !g.has_edge(x, y) {
                    plan.original_edges.push((x, y));
                }
            }
        }
    }
    Some(plan)
}

fn try_pair(s: &mut Session, v: VertexId, budget: &StructionBudget, modified: bool) -> RuleResult {
    let g = &s.graph;
    g.check_active(v)?;
    if g.degree(v) > budget.max_neighborhood {
        return Ok(RuleOutcome::NotApplicable);
    }
    let rule = if modified { Rule::StructionModified } else { Rule::StructionOriginal };
    match pair_plan(g, v, modified) {
        Some(plan) if plan.fits(budget) => plan.commit(s, rule, v),
        _ => Ok(RuleOutcome::NotApplicable),
    }
}

/// Requires `ω(v)` minimal in `N[v]`. Removes `v`, lowers `N(v)` by `ω(v)` and
/// adds a vertex of weight `ω(v)` for every non-adjacent pair in `N(v)`.
pub fn try_struction_original(s: &mut Session, v: VertexId, budget: &StructionBudget) -> RuleResult {
    try_pair(s, v, budget, false)
}

/// Like [`try_struction_original`], but the pair vertex `v_{x,y}` weighs `ω(y)`,
/// is adjacent to `N(v) \ {x}`, and `N(v)` becomes a clique.
pub fn try_struction_modified(s: &mut Session, v: VertexId, budget: &StructionBudget) -> RuleResult {
    try_pair(s, v, budget, true)
}

/// Calls `visit` on every independent set of `G[verts]` reachable by adding
/// vertices in order, skipping supersets of sets for which `descend` is false.
/// Stops and returns false as soon as `visit` does.
fn walk_independent(
    g: &WeightedGraph,
    verts: &[VertexId],
    current: &mut Vec<VertexId>,
    descend: &mut dyn FnMut(&[VertexId]) -> bool,
    visit: &mut dyn FnMut(&[VertexId]) -> bool,
) -> bool {
    let start = current.last().map_or(0, |last| verts.iter().position(|u| u == last).unwrap() + 1);
    for i in start..verts.len() {
        let u = verts[i];
        if current.iter().any(|&w| g.has_edge(u, w)) {
            continue;
        }
        current.push(u);
        let ok = visit(current) && (!descend(current) || walk_independent(g, verts, current, descend, visit));
        current.pop();
        if !ok {
            return false;
        }
    }
    true
}

/// Room for new vertices under the budget when `N[v]` is removed.
fn creation_limit(g: &WeightedGraph, v: VertexId, budget: &StructionBudget) -> usize {
    budget.max_created.min(g.degree(v) + 1 + budget.max_increase)
}

/// Removes `N[v]` and adds a clique with one vertex `v_c` of weight
/// `ω(c) - ω(v)` per independent set `c ⊆ N(v)` heavier than `v`.
pub fn try_struction_extended(s: &mut Session, v: VertexId, budget: &StructionBudget) -> RuleResult {
    let g = &s.graph;
    g.check_active(v)?;
    let nbrs = g.adjacency(v);
    if nbrs.len() > budget.max_neighborhood {
        return Ok(RuleOutcome::NotApplicable);
    }
    let wv = g.weight(v);
    let limit = creation_limit(g, v, budget);
    let mut qualifying: Vec<Vec<VertexId>> = Vec::new();
    let complete = walk_independent(g, nbrs, &mut Vec::new(), &mut |_| true, &mut |c| {
        if g.weight_of(c) > wv {
            qualifying.push(c.to_vec());
        }
        qualifying.len() <= limit
    });
    if !complete {
        return Ok(RuleOutcome::NotApplicable);
    }
    let closed = closed_nbrs(g, v);
    let mut plan = Plan { remove: closed.iter().copied().collect(), ..Plan::default() };
    for c in qualifying {
        let weight = g.weight_of(&c) - wv;
        let outer = outer_nbrs(g, &c, &closed);
        plan.new.push(NewVertex { weight, outer, expands: c });
    }
    let k = plan.new.len();
    plan.inner_edges = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    if !plan.fits(budget) {
        return Ok(RuleOutcome::NotApplicable);
    }
    plan.commit(s, Rule::StructionExtended, v)
}

/// Extended struction restricted to the minimal independent sets `c ⊆ N(v)`
/// heavier than `v`. Each `c` also gets a layer of vertices `v_{c,y}` of
/// weight `ω(y)`, one per `y ∈ N(v) \ N[c]`, so that solutions using a
/// superset of `c` remain representable.
pub fn try_struction_extended_reduced(s: &mut Session, v: VertexId, budget: &StructionBudget) -> RuleResult {
    let g = &s.graph;
    g.check_active(v)?;
    let nbrs = g.adjacency(v);
    if nbrs.len() > budget.max_neighborhood {
        return Ok(RuleOutcome::NotApplicable);
    }
    let wv = g.weight(v);
    let limit = creation_limit(g, v, budget);
    let mut minimal: Vec<Vec<VertexId>> = Vec::new();
    let mut created = 0;
    let complete = walk_independent(
        g,
        nbrs,
        &mut Vec::new(),
        &mut |c| g.weight_of(c) <= wv,
        &mut |c| {
            let w = g.weight_of(c);
            // every proper subset lies in some c - u; weights are positive
            if w > wv && c.iter().all(|&u| w - g.weight(u) <= wv) {
                let free = nbrs.iter().filter(|&&y| !c.contains(&y) && c.iter().all(|&u| !g.has_edge(u, y)));
                created += 1 + free.count();
                minimal.push(c.to_vec());
            }
            created <= limit
        },
    );
    if !complete {
        return Ok(RuleOutcome::NotApplicable);
    }
    let closed = closed_nbrs(g, v);
    let mut plan = Plan { remove: closed.iter().copied().collect(), ..Plan::default() };
    // layer of each new vertex, and its second index for extension vertices
    let mut keys: Vec<(usize, Option<VertexId>)> = Vec::new();
    for (layer, c) in minimal.iter().enumerate() {
        let c_outer = outer_nbrs(g, c, &closed);
        plan.new.push(NewVertex { weight: g.weight_of(c) - wv, outer: c_outer.clone(), expands: c.clone() });
        keys.push((layer, None));
        for &y in nbrs {
            if c.contains(&y) || c.iter().any(|&u| g.has_edge(u, y)) {
                continue;
            }
            let mut outer = c_outer.clone();
            outer.extend(outer_nbrs(g, [y].iter(), &closed));
            let expands = c.iter().copied().chain([y]).collect();
            plan.new.push(NewVertex { weight: g.weight(y), outer, expands });
            keys.push((layer, Some(y)));
        }
    }
    for (i, &(lc, x)) in keys.iter().enumerate() {
        for (j, &(ld, y)) in keys.iter().enumerate().skip(i + 1) {
            let adjacent = match (x, y) {
                (Some(x), Some(y)) => lc != ld || g.has_edge(x, y),
                // a set vertex and an extension vertex meet only across layers
                _ => lc != ld || (x.is_none() && y.is_none()),
            };
            if adjacent {
                plan.inner_edges.insert((i, j));
            }
        }
    }
    if !plan.fits(budget) {
        return Ok(RuleOutcome::NotApplicable);
    }
    plan.commit(s, Rule::StructionExtendedReduced, v)
}
