//! Rules comparing two adjacent vertices and their neighborhoods.

use crate::graph::{VertexId, Weight};
use crate::trace::Rule;

use super::{exclude, RuleOutcome, RuleResult, Session};

fn sorted_subset(a: &[VertexId], b: &[VertexId]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
    }
    true
}

/// Excludes `v` if some neighbor `u` with `ω(u) ≥ ω(v)` has `N[u] ⊆ N[v]`.
pub fn try_domination(s: &mut Session, v: VertexId) -> RuleResult {
    let g = &s.graph;
    g.check_active(v)?;
    let wv = g.weight(v);
    let nv = g.adjacency(v);
    for &u in nv {
        if g.weight(u) < wv || g.degree(u) > nv.len() {
            continue;
        }
        // N[u] ⊆ N[v] ⇔ N(u) \ {v} ⊆ N(v)
        let rest: Vec<VertexId> = g.adjacency(u).iter().copied().filter(|&x| x != v).collect();
        if sorted_subset(&rest, nv) {
            return exclude(s, Rule::Domination, &[v]);
        }
    }
    Ok(RuleOutcome::NotApplicable)
}

/// Excludes `v` if some neighbor `u` has `ω(N(u) \ N(v)) ≤ ω(u)`; the left side
/// contains `v` itself.
pub fn try_basic_single_edge(s: &mut Session, v: VertexId) -> RuleResult {
    let g = &s.graph;
    g.check_active(v)?;
    let nv = g.adjacency(v);
    for &u in nv {
        let private: Weight = g
            .adjacency(u)
            .iter()
            .filter(|x| nv.binary_search(x).is_err())
            .map(|&x| g.weight(x))
            .sum();
        if private <= g.weight(u) {
            return exclude(s, Rule::BasicSingleEdge, &[v]);
        }
    }
    Ok(RuleOutcome::NotApplicable)
}

/// Excludes `N(u) ∩ N(v)` for the first neighbor `u` of `v` with
/// `ω(v) ≥ ω(N(v)) - ω(u)` and a non-empty common neighborhood.
pub fn try_extended_single_edge(s: &mut Session, v: VertexId) -> RuleResult {
    let g = &s.graph;
    g.check_active(v)?;
    let nv = g.adjacency(v);
    let wn: Weight = nv.iter().map(|&x| g.weight(x)).sum();
    let wv = g.weight(v);
    for &u in nv {
        if wv + g.weight(u) < wn {
            continue;
        }
        let common: Vec<VertexId> =
            g.adjacency(u).iter().copied().filter(|x| nv.binary_search(x).is_ok()).collect();
        if !common.is_empty() {
            return exclude(s, Rule::ExtendedSingleEdge, &common);
        }
    }
    Ok(RuleOutcome::NotApplicable)
}
