//! Rules that bound or solve the independent set weight around a vertex.

use crate::graph::{VertexId, VertexSet, Weight, WeightedGraph};
use crate::solver::{alpha_of, clique_cover_bound_of, enumerate_in};
use crate::trace::Rule;

use super::{exclude, fold_into_new, include, Budgets, RuleOutcome, RuleResult, Session};

/// Vertices at distance exactly two from `v`, ascending.
pub(crate) fn second_neighborhood(g: &WeightedGraph, v: VertexId) -> VertexSet {
    let mut out = VertexSet::new();
    for &u in g.adjacency(v) {
        for &w in g.adjacency(u) {
            if w != v && !g.has_edge(v, w) {
                out.insert(w);
            }
        }
    }
    out
}

fn neighborhood_weight(g: &WeightedGraph, v: VertexId) -> Weight {
    g.adjacency(v).iter().map(|&u| g.weight(u)).sum()
}

/// Includes `v` if `ω(v) ≥ α_ω(G[N(v)])`, solved exactly on small neighborhoods.
pub fn try_heavy_vertex(s: &mut Session, v: VertexId, budgets: &Budgets) -> RuleResult {
    let g = &s.graph;
    g.check_active(v)?;
    if g.degree(v) > budgets.subgraph_vertex_bound {
        return Ok(RuleOutcome::NotApplicable);
    }
    match alpha_of(g, g.adjacency(v)) {
        Some(a) if a <= g.weight(v) => include(s, Rule::HeavyVertex, &[v]),
        _ => Ok(RuleOutcome::NotApplicable),
    }
}

/// Includes `v` if `ω(v) ≥ ω(N(v))`.
pub fn try_neighborhood_removal(s: &mut Session, v: VertexId) -> RuleResult {
    s.graph.check_active(v)?;
    if s.graph.weight(v) >= neighborhood_weight(&s.graph, v) {
        return include(s, Rule::NeighborhoodRemoval, &[v]);
    }
    Ok(RuleOutcome::NotApplicable)
}

/// Includes `v` if its weight reaches the greedy clique cover bound of `N(v)`.
pub fn try_clique_neighborhood_removal(s: &mut Session, v: VertexId) -> RuleResult {
    let g = &s.graph;
    g.check_active(v)?;
    if g.weight(v) >= clique_cover_bound_of(g, g.adjacency(v)) {
        return include(s, Rule::CliqueNeighborhoodRemoval, &[v]);
    }
    Ok(RuleOutcome::NotApplicable)
}

/// Folds `N[v]` when `N(v)` is independent, heavier than `v`, but every
/// proper subset obtained by dropping one neighbor is lighter than `v`.
pub fn try_neighborhood_folding(s: &mut Session, v: VertexId) -> RuleResult {
    let g = &s.graph;
    g.check_active(v)?;
    let nbrs = g.adjacency(v);
    if nbrs.is_empty() || !g.is_independent(nbrs) {
        return Ok(RuleOutcome::NotApplicable);
    }
    let (wv, wn) = (g.weight(v), neighborhood_weight(g, v));
    let min = nbrs.iter().map(|&u| g.weight(u)).min().expect("non-empty");
    if !(wn > wv && wn - min < wv) {
        return Ok(RuleOutcome::NotApplicable);
    }
    let group: Vec<VertexId> = std::iter::once(v).chain(nbrs.iter().copied()).collect();
    let closed: VertexSet = group.iter().copied().collect();
    let outer: VertexSet = nbrs
        .iter()
        .flat_map(|&u| g.adjacency(u).iter().copied())
        .filter(|u| !closed.contains(u))
        .collect();
    let chosen = nbrs.to_vec();
    fold_into_new(s, Rule::NeighborhoodFolding, &group, &outer, wn - wv, wv, chosen, vec![v])
}

/// Enumerates the independent sets of `G[N(v)]`. First excludes every neighbor
/// whose best containing set is lighter than `v`; otherwise folds `N[v]` if
/// exactly one set is heavier than `v`.
///
/// The folded vertex is adjacent to `N(Ĩ) \ N[v]` only: the other neighbors
/// disappear with `N(v) \ Ĩ`.
pub fn try_generalized_fold(s: &mut Session, v: VertexId, budgets: &Budgets) -> RuleResult {
    let g = &s.graph;
    g.check_active(v)?;
    let nbrs = g.adjacency(v);
    if nbrs.is_empty() || nbrs.len() > budgets.generalized_fold_bound {
        return Ok(RuleOutcome::NotApplicable);
    }
    let Ok(sets) = enumerate_in(g, nbrs, budgets.enumeration_cap) else {
        return Ok(RuleOutcome::NotApplicable);
    };
    let wv = g.weight(v);
    let weights: Vec<Weight> = sets.iter().map(|set| g.weight_of(set)).collect();

    let useless: Vec<VertexId> = nbrs
        .iter()
        .copied()
        .filter(|u| {
            sets.iter().zip(&weights).filter(|(set, _)| set.contains(u)).all(|(_, &w)| w < wv)
        })
        .collect();
    if !useless.is_empty() {
        return exclude(s, Rule::GeneralizedFold, &useless);
    }

    let mut heavy = sets.iter().zip(&weights).filter(|(_, &w)| w > wv);
    let (Some((best, &wbest)), None) = (heavy.next(), heavy.next()) else {
        return Ok(RuleOutcome::NotApplicable);
    };
    let closed: VertexSet = std::iter::once(v).chain(nbrs.iter().copied()).collect();
    let outer: VertexSet = best
        .iter()
        .flat_map(|&u| g.adjacency(u).iter().copied())
        .filter(|u| !closed.contains(u))
        .collect();
    let group: Vec<VertexId> = closed.iter().copied().collect();
    let chosen: Vec<VertexId> = best.iter().copied().collect();
    fold_into_new(s, Rule::GeneralizedFold, &group, &outer, wbest - wv, wv, chosen, vec![v])
}

/// Includes `v` and some non-adjacent `u` with
/// `ω(u) + ω(v) ≥ ω(N(u) ∪ N(v))`.
///
/// Requires `ω(x) < ω(N(x))` for both endpoints only, which is all the
/// exchange argument uses; a vertex failing it is left to neighborhood removal.
pub fn try_two_vertex_neighborhood_removal(s: &mut Session, v: VertexId) -> RuleResult {
    let g = &s.graph;
    g.check_active(v)?;
    let wv = g.weight(v);
    if wv >= neighborhood_weight(g, v) {
        return Ok(RuleOutcome::NotApplicable);
    }
    let nv: VertexSet = g.adjacency(v).iter().copied().collect();
    for u in second_neighborhood(g, v) {
        let wu = g.weight(u);
        if wu >= neighborhood_weight(g, u) {
            continue;
        }
        let union: Weight = g.weight_of(&nv) + g.adjacency(u).iter().filter(|x| !nv.contains(x)).map(|&x| g.weight(x)).sum::<Weight>();
        if wu + wv >= union {
            let pair = if u < v { [u, v] } else { [v, u] };
            return include(s, Rule::TwoVertexNeighborhoodRemoval, &pair);
        }
    }
    Ok(RuleOutcome::NotApplicable)
}

/// Includes `v` and a vertex `u` at distance two when every independent set
/// `Ĩ` of `G[N({u,v})]` satisfies `ω(N(Ĩ) ∩ {u,v}) ≥ ω(Ĩ)`.
pub fn try_heavy_set(s: &mut Session, v: VertexId, budgets: &Budgets) -> RuleResult {
    let g = &s.graph;
    g.check_active(v)?;
    if g.degree(v) > budgets.heavy_set_bound {
        return Ok(RuleOutcome::NotApplicable);
    }
    let nv: VertexSet = g.adjacency(v).iter().copied().collect();
    let wv = g.weight(v);
    'pairs: for u in second_neighborhood(g, v) {
        let nu: VertexSet = g.adjacency(u).iter().copied().collect();
        let union: Vec<VertexId> = nv.union(&nu).copied().collect();
        if union.len() > budgets.heavy_set_bound {
            continue;
        }
        let wu = g.weight(u);
        if wu + wv < alpha_of(g, &union).expect("bounded") {
            continue;
        }
        let Ok(sets) = enumerate_in(g, &union, budgets.enumeration_cap) else {
            continue;
        };
        for set in &sets {
            let mut cap = 0;
            if set.iter().any(|x| nu.contains(x)) {
                cap += wu;
            }
            if set.iter().any(|x| nv.contains(x)) {
                cap += wv;
            }
            if cap < g.weight_of(set) {
                continue 'pairs;
            }
        }
        let pair = if u < v { [u, v] } else { [v, u] };
        return include(s, Rule::HeavySet, &pair);
    }
    Ok(RuleOutcome::NotApplicable)
}
