//! Non-adjacent vertices with identical independent neighborhoods.

use std::collections::BTreeMap;

use crate::graph::{VertexId, VertexSet, WeightedGraph};
use crate::trace::Rule;

use super::{fold_into_new, include, RuleOutcome, RuleResult, Session};

/// Groups of at least two non-isolated vertices sharing the same neighborhood,
/// each sorted, in ascending order of their first member.
pub fn find_twins(g: &WeightedGraph) -> Vec<Vec<VertexId>> {
    let mut classes: BTreeMap<&[VertexId], Vec<VertexId>> = BTreeMap::new();
    for v in g.vertices() {
        if g.degree(v) > 0 {
            classes.entry(g.adjacency(v)).or_default().push(v);
        }
    }
    let mut groups: Vec<Vec<VertexId>> = classes.into_values().filter(|c| c.len() > 1).collect();
    groups.sort();
    groups
}

/// Finds a twin `u` of `v` whose shared neighborhood `N` is independent. Includes
/// both if `ω(u) + ω(v) ≥ ω(N)`; folds `{u, v} ∪ N` into one vertex if
/// dropping the lightest member of `N` already makes it lighter than the pair.
pub fn try_twin(s: &mut Session, v: VertexId) -> RuleResult {
    let g = &s.graph;
    g.check_active(v)?;
    let nv = g.adjacency(v);
    let Some(&first) = nv.first() else {
        return Ok(RuleOutcome::NotApplicable);
    };
    let Some(u) = g.adjacency(first).iter().copied().find(|&u| u != v && g.adjacency(u) == nv) else {
        return Ok(RuleOutcome::NotApplicable);
    };
    if !g.is_independent(nv) {
        return Ok(RuleOutcome::NotApplicable);
    }
    let pair = if u < v { [u, v] } else { [v, u] };
    let wp = g.weight(u) + g.weight(v);
    let wn = g.weight_of(nv);
    if wp >= wn {
        return include(s, Rule::Twin, &pair);
    }
    let min = nv.iter().map(|&x| g.weight(x)).min().expect("non-empty");
    if wp <= wn - min {
        return Ok(RuleOutcome::NotApplicable);
    }
    let nset: VertexSet = nv.iter().copied().collect();
    let outer: VertexSet = nv
        .iter()
        .flat_map(|&x| g.adjacency(x).iter().copied())
        .filter(|&x| x != u && x != v && !nset.contains(&x))
        .collect();
    let group: Vec<VertexId> = pair.iter().chain(nv).copied().collect();
    let chosen = nv.to_vec();
    fold_into_new(s, Rule::Twin, &group, &outer, wn - wp, wp, chosen, pair.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::testutil::{check_events, graph, vid};

    #[test]
    fn finds_groups() {
        let g = graph(&[1; 5], &[(0, 2), (0, 3), (1, 2), (1, 3), (4, 2)]);
        assert_eq!(find_twins(&g), vec![vec![vid(0), vid(1)]]);
    }

    #[test]
    fn twin_include() {
        let g = graph(&[3, 3, 2, 2, 1], &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 4)]);
        let mut s = Session::new(g.clone());
        let out = try_twin(&mut s, vid(0)).unwrap();
        assert_eq!(out.event().unwrap().delta, 6);
        check_events(&g, &s, 0);
    }

    #[test]
    fn twin_fold() {
        // pair weight 5, N = {2,3,4} weights 2,2,2: 6 > 5 > 4
        let edges = [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 5)];
        let g = graph(&[2, 3, 2, 2, 2, 1], &edges);
        let mut s = Session::new(g.clone());
        let out = try_twin(&mut s, vid(1)).unwrap();
        let ev = out.event().unwrap();
        assert_eq!(ev.delta, 5);
        assert_eq!(s.graph.weight(ev.created[0]), 1);
        assert_eq!(s.graph.adjacency(ev.created[0]), &[vid(5)]);
        check_events(&g, &s, 0);
    }

    #[test]
    fn random_oracle() {
        for seed in 0..3000u64 {
            let g = crate::generate::gen_random(3 + (seed % 8) as usize, 0.3, 1, 10, seed);
            for v in g.vertices() {
                let mut s = Session::new(g.clone());
                if try_twin(&mut s, v).unwrap().applied() {
                    check_events(&g, &s, 0);
                }
            }
        }
    }
}
