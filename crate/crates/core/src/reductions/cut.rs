//! Rules that solve a small component hanging off a one- or two-vertex cut.

use crate::graph::{VertexId, VertexSet, Weight, WeightedGraph};
use crate::solver::solve_subset;
use crate::trace::{Lift, LiftCase, Rule};

use super::{Budgets, RuleOutcome, RuleResult, Session};

/// Articulation points of `g` with `blocked` treated as deleted.
fn articulation_points_without(g: &WeightedGraph, blocked: Option<VertexId>) -> VertexSet {
    let n = g.id_bound();
    let mut disc = vec![0u32; n];
    let mut low = vec![0u32; n];
    let mut time = 0u32;
    let mut out = VertexSet::new();
    let skip = |v: VertexId| Some(v) == blocked;
    for root in g.vertices() {
        if skip(root) || disc[root.index()] != 0 {
            continue;
        }
        time += 1;
        disc[root.index()] = time;
        low[root.index()] = time;
        let mut root_children = 0;
        // (vertex, parent, next adjacency index)
        let mut stack: Vec<(VertexId, Option<VertexId>, usize)> = vec![(root, None, 0)];
        while let Some(&mut (v, parent, ref mut i)) = stack.last_mut() {
            let adj = g.adjacency(v);
            if *i < adj.len() {
                let u = adj[*i];
                *i += 1;
                if skip(u) || Some(u) == parent {
                    continue;
                }
                if disc[u.index()] == 0 {
                    time += 1;
                    disc[u.index()] = time;
                    low[u.index()] = time;
                    stack.push((u, Some(v), 0));
                } else {
                    low[v.index()] = low[v.index()].min(disc[u.index()]);
                }
                continue;
            }
            stack.pop();
            if let Some(p) = parent {
                low[p.index()] = low[p.index()].min(low[v.index()]);
                if p == root {
                    root_children += 1;
                } else if low[v.index()] >= disc[p.index()] {
                    out.insert(p);
                }
            }
        }
        if root_children > 1 {
            out.insert(root);
        }
    }
    out
}

pub fn articulation_points(g: &WeightedGraph) -> VertexSet {
    articulation_points_without(g, None)
}

/// Component of `start` in `g - blocked`, or `None` once it exceeds `bound`.
fn bounded_component(g: &WeightedGraph, start: VertexId, blocked: &[VertexId], bound: usize) -> Option<VertexSet> {
    let mut comp: VertexSet = [start].into();
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &u in g.adjacency(x) {
            if !blocked.contains(&u) && comp.insert(u) {
                if comp.len() > bound {
                    return None;
                }
                stack.push(u);
            }
        }
    }
    Some(comp)
}

/// Smallest component of `g - cut` touching `cut` with at most `bound`
/// vertices, provided some cut vertex also has a neighbor outside it.
fn small_side(g: &WeightedGraph, cut: &[VertexId], bound: usize, min_size: usize) -> Option<VertexSet> {
    let mut best: Option<VertexSet> = None;
    let mut seen = VertexSet::new();
    for &c in cut {
        for &u in g.adjacency(c) {
            if cut.contains(&u) || seen.contains(&u) {
                continue;
            }
            let Some(comp) = bounded_component(g, u, cut, bound) else {
                seen.insert(u);
                continue;
            };
            seen.extend(comp.iter().copied());
            let separates = cut.iter().any(|&x| g.adjacency(x).iter().any(|y| !cut.contains(y) && !comp.contains(y)));
            if separates && comp.len() >= min_size && best.as_ref().is_none_or(|b| comp.len() < b.len()) {
                best = Some(comp);
            }
        }
    }
    best
}

fn solve_without(g: &WeightedGraph, comp: &VertexSet, avoid: &VertexSet) -> (Weight, Vec<VertexId>) {
    let verts: Vec<VertexId> = comp.iter().copied().filter(|x| !avoid.contains(x)).collect();
    solve_subset(g, &verts).expect("component within subset limit")
}

/// Solves the smallest bounded component `G*` of `G - v`. Removes `G* ∪ {v}`
/// when `v` cannot beat the component's own optimum, else folds `v` and `G*`
/// into one vertex of weight `ω(v) + ω(I₂) - ω(I₁)`.
pub fn try_one_vertex_cut(s: &mut Session, v: VertexId, budgets: &Budgets) -> RuleResult {
    let g = &s.graph;
    g.check_active(v)?;
    let bound = budgets.component_bound.min(crate::solver::SUBSET_LIMIT);
    let Some(comp) = small_side(g, &[v], bound, 1) else {
        return Ok(RuleOutcome::NotApplicable);
    };
    let nv: VertexSet = g.adjacency(v).iter().copied().collect();
    let (w1, i1) = solve_without(g, &comp, &VertexSet::new());
    let (w2, i2) = solve_without(g, &comp, &nv);
    let wv = g.weight(v);
    let outer: Vec<VertexId> = nv.iter().copied().filter(|x| !comp.contains(x)).collect();
    let mut ch = s.change();
    ch.remove_all(comp.iter().copied())?;
    ch.remove(v)?;
    if wv + w2 <= w1 {
        return ch.commit(Rule::OneVertexCut, w1, Lift::Include { vertices: i1 });
    }
    let folded = ch.create(wv + w2 - w1, outer)?;
    let chosen = std::iter::once(v).chain(i2).collect();
    ch.commit(Rule::OneVertexCut, w1, Lift::Fold { folded, chosen, otherwise: i1 })
}

/// Replaces a bounded component `G*` of `G - {u, v}` (at least four vertices)
/// by a three-vertex gadget encoding its optimum for each state of `u, v`.
///
/// `x_uv` gets `ω(I*) - max(ω(I_u), ω(I_v))` so that the gadget's best value
/// with both cut vertices free is exactly `ω(I*)`.
pub fn try_two_vertex_cut(s: &mut Session, u: VertexId, v: VertexId, budgets: &Budgets) -> RuleResult {
    let g = &s.graph;
    g.check_active(u)?;
    g.check_active(v)?;
    if u == v {
        return Ok(RuleOutcome::NotApplicable);
    }
    let bound = budgets.component_bound.min(crate::solver::SUBSET_LIMIT);
    let Some(comp) = small_side(g, &[u, v], bound, 4) else {
        return Ok(RuleOutcome::NotApplicable);
    };
    let nu: VertexSet = g.adjacency(u).iter().copied().collect();
    let nv: VertexSet = g.adjacency(v).iter().copied().collect();
    let nuv: VertexSet = nu.union(&nv).copied().collect();
    let (w_star, i_star) = solve_without(g, &comp, &VertexSet::new());
    let (w_u, i_u) = solve_without(g, &comp, &nu);
    let (w_v, i_v) = solve_without(g, &comp, &nv);
    let (w_uv, i_uv) = solve_without(g, &comp, &nuv);

    let mut ch = s.change();
    ch.remove_all(comp.iter().copied())?;
    let x_u = ch.create(w_u - w_uv, [v])?;
    ch.create(w_v - w_uv, [u, x_u])?;
    ch.create(w_star - w_u.max(w_v), [u, v])?;
    let lift = Lift::Cases {
        cases: vec![
            LiftCase::when(vec![u, v], vec![]).add(i_uv),
            LiftCase::when(vec![u], vec![v]).add(i_u),
            LiftCase::when(vec![v], vec![u]).add(i_v),
            LiftCase::otherwise().add(i_star),
        ],
    };
    ch.commit(Rule::TwoVertexCut, w_uv, lift)
}

/// Candidate two-vertex cuts `(a, b)`: `b` is an articulation point of
/// `G - a`, with `a` drawn from the lowest-degree vertices and articulation
/// points of `G`, at most `budgets.two_cut_candidates` of them.
pub fn two_vertex_cuts(g: &WeightedGraph, budgets: &Budgets) -> Vec<(VertexId, VertexId)> {
    let mut firsts: Vec<VertexId> = articulation_points(g).into_iter().collect();
    let mut by_degree: Vec<VertexId> = g.vertices().filter(|v| g.degree(*v) >= 2).collect();
    by_degree.sort_by_key(|&v| (g.degree(v), v));
    firsts.extend(by_degree);
    let mut seen = VertexSet::new();
    firsts.retain(|v| seen.insert(*v));
    firsts.truncate(budgets.two_cut_candidates);
    let mut pairs = Vec::new();
    for a in firsts {
        for b in articulation_points_without(g, Some(a)) {
            let pair = if a < b { (a, b) } else { (b, a) };
            pairs.push(pair);
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}
