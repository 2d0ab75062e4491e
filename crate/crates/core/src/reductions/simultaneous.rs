//! Confining and covering sets: assume a vertex is in every (or no) optimal
//! solution and follow the forced consequences until a contradiction or a
//! fixed point.

use crate::graph::{VertexId, VertexSet, Weight, WeightedGraph};
use crate::solver::alpha_of;
use crate::trace::Rule;

use super::neighborhood::second_neighborhood;
use super::{exclude, fold_into_new, include, Budgets, RuleOutcome, RuleResult, Session};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfiningResult {
    /// Some optimal solution avoids the vertex.
    Unconfined,
    /// Every optimal solution containing the vertex contains this set.
    ConfinedBy(VertexSet),
    /// Extension budget ran out.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoveringResult {
    /// Some optimal solution contains the vertex.
    Uncovered,
    /// Every optimal solution avoiding the vertex avoids this set.
    CoveredBy(VertexSet),
    /// Extension or subgraph-solve budget ran out.
    Inconclusive,
}

pub fn compute_confining_set(g: &WeightedGraph, v: VertexId, budgets: &Budgets) -> ConfiningResult {
    let mut set: VertexSet = [v].into();
    let mut closed: VertexSet = g.adjacency(v).iter().copied().chain([v]).collect();
    for _ in 0..=budgets.max_extensions {
        let mut satellite: Option<VertexId> = None;
        for &x in closed.iter().filter(|x| !set.contains(x)) {
            let inside: Weight = g.adjacency(x).iter().filter(|y| set.contains(y)).map(|&y| g.weight(y)).sum();
            if g.weight(x) < inside {
                continue;
            }
            let mut outside = g.adjacency(x).iter().filter(|y| !closed.contains(y));
            match (outside.next(), outside.next()) {
                (None, _) => return ConfiningResult::Unconfined,
                (Some(&y), None) if satellite.is_none() => satellite = Some(y),
                _ => {}
            }
        }
        let Some(y) = satellite else {
            return ConfiningResult::ConfinedBy(set);
        };
        set.insert(y);
        closed.insert(y);
        closed.extend(g.adjacency(y).iter().copied());
    }
    ConfiningResult::Inconclusive
}

/// `α_ω(G[verts])` if small enough to solve within the budget.
fn bounded_alpha(g: &WeightedGraph, verts: &[VertexId], budgets: &Budgets) -> Option<Weight> {
    if verts.len() > budgets.cover_solve_bound {
        return None;
    }
    alpha_of(g, verts)
}

pub fn compute_covering_set(g: &WeightedGraph, v: VertexId, budgets: &Budgets) -> CoveringResult {
    let mut cover: VertexSet = [v].into();
    let mut order = vec![v];
    let mut extensions = 0;
    loop {
        for &y in &order {
            let rest: Vec<VertexId> = g.adjacency(y).iter().copied().filter(|u| !cover.contains(u)).collect();
            match bounded_alpha(g, &rest, budgets) {
                Some(a) if g.weight(y) >= a => return CoveringResult::Uncovered,
                Some(_) => {}
                None => return CoveringResult::Inconclusive,
            }
        }
        let mut mirror = None;
        'search: for &x in &order {
            for y in second_neighborhood(g, x) {
                if cover.contains(&y) {
                    continue;
                }
                let rest: Vec<VertexId> = g
                    .adjacency(x)
                    .iter()
                    .copied()
                    .filter(|u| !cover.contains(u) && !g.has_edge(*u, y))
                    .collect();
                match bounded_alpha(g, &rest, budgets) {
                    Some(a) if g.weight(x) >= a => {
                        mirror = Some(y);
                        break 'search;
                    }
                    Some(_) => {}
                    None => return CoveringResult::Inconclusive,
                }
            }
        }
        let Some(y) = mirror else {
            return CoveringResult::CoveredBy(cover);
        };
        if extensions == budgets.max_extensions {
            return CoveringResult::Inconclusive;
        }
        extensions += 1;
        cover.insert(y);
        order.push(y);
    }
}

/// Excludes `v` when its confining set search ends in a contradiction.
pub fn try_unconfined(s: &mut Session, v: VertexId, budgets: &Budgets) -> RuleResult {
    s.graph.check_active(v)?;
    if compute_confining_set(&s.graph, v, budgets) == ConfiningResult::Unconfined {
        return exclude(s, Rule::Unconfined, &[v]);
    }
    Ok(RuleOutcome::NotApplicable)
}

/// Includes `v` when its covering set search ends in a contradiction.
pub fn try_uncovered(s: &mut Session, v: VertexId, budgets: &Budgets) -> RuleResult {
    s.graph.check_active(v)?;
    if compute_covering_set(&s.graph, v, budgets) == CoveringResult::Uncovered {
        return include(s, Rule::Uncovered, &[v]);
    }
    Ok(RuleOutcome::NotApplicable)
}

fn fold_pair(s: &mut Session, rule: Rule, u: VertexId, v: VertexId) -> RuleResult {
    let g = &s.graph;
    let pair = if u < v { [u, v] } else { [v, u] };
    let nbrs = g.set_neighborhood(&pair.iter().copied().collect())?;
    let w = g.weight(u) + g.weight(v);
    fold_into_new(s, rule, &pair, &nbrs, w, 0, pair.to_vec(), Vec::new())
}

/// Folds `v` with the first `u` such that each lies in the other's confining set.
pub fn try_simultaneous_confined(s: &mut Session, v: VertexId, budgets: &Budgets) -> RuleResult {
    s.graph.check_active(v)?;
    let ConfiningResult::ConfinedBy(sv) = compute_confining_set(&s.graph, v, budgets) else {
        return Ok(RuleOutcome::NotApplicable);
    };
    for &u in sv.iter().filter(|&&u| u != v) {
        if let ConfiningResult::ConfinedBy(su) = compute_confining_set(&s.graph, u, budgets) {
            if su.contains(&v) {
                return fold_pair(s, Rule::SimultaneousConfined, u, v);
            }
        }
    }
    Ok(RuleOutcome::NotApplicable)
}

/// Folds `v` with the first non-adjacent `u` such that each lies in the
/// other's covering set.
pub fn try_simultaneous_cover(s: &mut Session, v: VertexId, budgets: &Budgets) -> RuleResult {
    s.graph.check_active(v)?;
    let CoveringResult::CoveredBy(cv) = compute_covering_set(&s.graph, v, budgets) else {
        return Ok(RuleOutcome::NotApplicable);
    };
    for &u in cv.iter().filter(|&&u| u != v && !s.graph.has_edge(u, v)) {
        if let CoveringResult::CoveredBy(cu) = compute_covering_set(&s.graph, u, budgets) {
            if cu.contains(&v) {
                return fold_pair(s, Rule::SimultaneousCover, u, v);
            }
        }
    }
    Ok(RuleOutcome::NotApplicable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::testutil::{check_events, graph, vid};

    #[test]
    fn light_vertex_next_to_leaf_is_unconfined() {
        // 1 is a child of {0} with no neighbors outside N[0]
        let g = graph(&[2, 3, 1], &[(0, 1), (0, 2)]);
        let b = Budgets::default();
        assert_eq!(compute_confining_set(&g, vid(0), &b), ConfiningResult::Unconfined);
        let mut s = Session::new(g.clone());
        assert!(try_unconfined(&mut s, vid(0), &b).unwrap().applied());
        check_events(&g, &s, 0);
    }

    #[test]
    fn path_confines_through_satellite() {
        // 1 is an extending child of {0} with satellite 2; the leaves of 2
        // are too light to be children
        let g = graph(&[2, 2, 2, 1, 1], &[(0, 1), (1, 2), (2, 3), (2, 4)]);
        let b = Budgets::default();
        match compute_confining_set(&g, vid(0), &b) {
            ConfiningResult::ConfinedBy(set) => assert_eq!(set, [vid(0), vid(2)].into()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn heavy_vertex_is_uncovered() {
        let g = graph(&[5, 2, 2], &[(0, 1), (0, 2)]);
        let b = Budgets::default();
        assert_eq!(compute_covering_set(&g, vid(0), &b), CoveringResult::Uncovered);
    }

    #[test]
    fn random_oracle() {
        let b = Budgets::default();
        type F = fn(&mut Session, VertexId, &Budgets) -> RuleResult;
        let rules: [F; 4] = [try_unconfined, try_uncovered, try_simultaneous_confined, try_simultaneous_cover];
        let mut fired = [0usize; 4];
        for seed in 0..1500u64 {
            let g = crate::generate::gen_random(3 + (seed % 8) as usize, 0.3, 1, 10, seed);
            for v in g.vertices() {
                for (k, f) in rules.iter().enumerate() {
                    let mut s = Session::new(g.clone());
                    if f(&mut s, v, &b).unwrap().applied() {
                        fired[k] += 1;
                        check_events(&g, &s, 0);
                    }
                }
            }
        }
        assert!(fired.iter().all(|&c| c > 0), "{fired:?}");
    }
}
