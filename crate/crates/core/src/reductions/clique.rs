//! Simplicial vertices: `N(v)` is a clique, so at most one of `N[v]` is chosen.

use crate::graph::{VertexId, VertexSet};
use crate::trace::{Lift, LiftCase, Rule};

use super::{include, RuleOutcome, RuleResult, Session};

fn is_simplicial(s: &Session, v: VertexId) -> bool {
    s.graph.is_clique(s.graph.adjacency(v))
}

/// Includes a simplicial `v` that is heaviest in `N[v]`. Otherwise, if `v` is
/// at least as heavy as every simplicial neighbor, moves its weight onto the
/// heavier neighbors and drops it together with the lighter ones.
pub fn try_simplicial(s: &mut Session, v: VertexId) -> RuleResult {
    s.graph.check_active(v)?;
    if !is_simplicial(s, v) {
        return Ok(RuleOutcome::NotApplicable);
    }
    let g = &s.graph;
    let wv = g.weight(v);
    let nbrs = g.adjacency(v).to_vec();
    if nbrs.iter().all(|&u| g.weight(u) <= wv) {
        return include(s, Rule::SimplicialVertex, &[v]);
    }
    if nbrs.iter().any(|&u| g.weight(u) > wv && is_simplicial(s, u)) {
        return Ok(RuleOutcome::NotApplicable);
    }
    let (light, heavy): (Vec<VertexId>, Vec<VertexId>) = nbrs.into_iter().partition(|&u| s.graph.weight(u) <= wv);
    let mut ch = s.change();
    ch.remove(v)?;
    ch.remove_all(light)?;
    for &x in &heavy {
        let w = ch.graph().weight(x);
        ch.set_weight(x, w - wv)?;
    }
    let lift = Lift::Cases { cases: vec![LiftCase::when(vec![], heavy).add([v])] };
    ch.commit(Rule::SimplicialWeightTransfer, wv, lift)
}

/// All simplicial vertices of the graph, ascending.
pub fn simplicial_vertices(s: &Session) -> VertexSet {
    s.graph.vertices().filter(|&v| is_simplicial(s, v)).collect()
}
