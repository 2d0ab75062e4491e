//! Degree one, degree two (triangle / V-shape), and the path and cycle
//! patterns built from degree-two vertices.

use crate::graph::{VertexId, VertexSet, Weight};
use crate::trace::{Lift, LiftCase, Rule};

use super::{fold_into_new, include, RuleOutcome, RuleResult, Session};

pub fn try_degree_one(s: &mut Session, v: VertexId) -> RuleResult {
    let g = &s.graph;
    g.check_active(v)?;
    if g.degree(v) != 1 {
        return Ok(RuleOutcome::NotApplicable);
    }
    let u = g.adjacency(v)[0];
    let (wv, wu) = (g.weight(v), g.weight(u));
    if wv >= wu {
        return include(s, Rule::DegreeOne, &[v]);
    }
    let nbrs: VertexSet = g.adjacency(u).iter().copied().filter(|&x| x != v).collect();
    fold_into_new(s, Rule::DegreeOne, &[u, v], &nbrs, wu - wv, wv, vec![u], vec![v])
}

/// Lighter of two vertices first; ties go to the lower id.
fn order_by_weight(s: &Session, a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    let (wa, wb) = (s.graph.weight(a), s.graph.weight(b));
    if wa < wb || (wa == wb && a < b) {
        (a, b)
    } else {
        (b, a)
    }
}

/// Triangle when the two neighbors of `v` are adjacent, V-shape otherwise.
pub fn try_degree_two(s: &mut Session, v: VertexId) -> RuleResult {
    s.graph.check_active(v)?;
    if s.graph.degree(v) != 2 {
        return Ok(RuleOutcome::NotApplicable);
    }
    let nb = s.graph.adjacency(v);
    let (x, y) = order_by_weight(s, nb[0], nb[1]);
    let g = &s.graph;
    let (wv, wx, wy) = (g.weight(v), g.weight(x), g.weight(y));
    let if_free = Lift::Cases { cases: vec![LiftCase::when(vec![], vec![x, y]).add([v])] };

    if g.has_edge(x, y) {
        if wv < wx {
            let mut ch = s.change();
            ch.remove(v)?;
            ch.set_weight(x, wx - wv)?;
            ch.set_weight(y, wy - wv)?;
            return ch.commit(Rule::Triangle, wv, if_free);
        }
        if wv < wy {
            let mut ch = s.change();
            ch.remove(v)?;
            ch.remove(x)?;
            ch.set_weight(y, wy - wv)?;
            let lift = Lift::Cases { cases: vec![LiftCase::when(vec![], vec![y]).add([v])] };
            return ch.commit(Rule::Triangle, wv, lift);
        }
        return include(s, Rule::Triangle, &[v]);
    }

    let outer: VertexSet = g
        .adjacency(x)
        .iter()
        .chain(g.adjacency(y))
        .copied()
        .filter(|&u| u != v)
        .collect();
    if wv < wx {
        // v' stands for taking both x and y; it carries ω(v) while x and y
        // each give up ω(v)
        let mut ch = s.change();
        ch.remove(v)?;
        ch.set_weight(x, wx - wv)?;
        ch.set_weight(y, wy - wv)?;
        let folded = ch.create(wv, outer)?;
        // x and y are free whenever v' is chosen
        let lift = Lift::Cases {
            cases: vec![
                LiftCase::when(vec![folded], vec![]).add([x, y]),
                LiftCase::when(vec![], vec![x, y]).add([v]),
            ],
        };
        return ch.commit(Rule::VShape, wv, lift);
    }
    if wv < wy {
        let mut ch = s.change();
        ch.remove(v)?;
        for &u in &outer {
            if u != x {
                ch.add_edge(x, u)?;
            }
        }
        ch.set_weight(y, wy - wv)?;
        // x now sees all of N(y) \ {v}, so y is free whenever x is chosen
        let lift = Lift::Cases {
            cases: vec![
                LiftCase::when(vec![x], vec![y]).add([y]),
                LiftCase::when(vec![], vec![x, y]).add([v]),
            ],
        };
        return ch.commit(Rule::VShape, wv, lift);
    }
    if wx + wy <= wv {
        return include(s, Rule::VShape, &[v]);
    }
    fold_into_new(s, Rule::VShape, &[v, x, y], &outer, wx + wy - wv, wv, vec![x, y], vec![v])
}

struct Pattern {
    len: usize,
    deg2: &'static [usize],
    cyclic: bool,
}

const PATH3: Pattern = Pattern { len: 4, deg2: &[1, 2], cyclic: false };
const PATH4: Pattern = Pattern { len: 5, deg2: &[1, 2, 3], cyclic: false };
const CYCLE4: Pattern = Pattern { len: 4, deg2: &[1, 2], cyclic: true };
const CYCLE5: Pattern = Pattern { len: 5, deg2: &[1, 2, 4], cyclic: true };
const CYCLE6: Pattern = Pattern { len: 6, deg2: &[1, 2, 4, 5], cyclic: true };

/// First embedding of `pat` with `v` on one of its degree-two positions that
/// satisfies `accept`, in a deterministic order.
fn find_pattern(
    s: &Session,
    v: VertexId,
    pat: &Pattern,
    accept: &dyn Fn(&[VertexId]) -> bool,
) -> Option<Vec<VertexId>> {
    for &start in pat.deg2 {
        // fill forward from `start`, then backward; each slot hangs off an
        // already filled neighbor in the sequence
        let order: Vec<(usize, usize)> = (start + 1..pat.len)
            .map(|i| (i, i - 1))
            .chain((0..start).rev().map(|i| (i, i + 1)))
            .collect();
        let mut seq = vec![v; pat.len];
        if fill(s, pat, start, &order, 0, &mut seq, accept) {
            return Some(seq);
        }
    }
    None
}

fn fill(
    s: &Session,
    pat: &Pattern,
    start: usize,
    order: &[(usize, usize)],
    k: usize,
    seq: &mut Vec<VertexId>,
    accept: &dyn Fn(&[VertexId]) -> bool,
) -> bool {
    let g = &s.graph;
    if k == order.len() {
        if pat.cyclic && !g.has_edge(seq[pat.len - 1], seq[0]) {
            return false;
        }
        return accept(seq);
    }
    let (slot, anchor) = order[k];
    let candidates = g.adjacency(seq[anchor]).to_vec();
    for c in candidates {
        if c == seq[start] || order[..k].iter().any(|&(i, _)| seq[i] == c) {
            continue;
        }
        if pat.deg2.contains(&slot) && g.degree(c) != 2 {
            continue;
        }
        seq[slot] = c;
        if fill(s, pat, start, order, k + 1, seq, accept) {
            return true;
        }
    }
    false
}

/// Tries 3-path, 4-path, 4-cycle, 5-cycle and 6-cycle in that order, with `v`
/// as one of the pattern's degree-two vertices.
pub fn try_path_cycle(s: &mut Session, v: VertexId) -> RuleResult {
    s.graph.check_active(v)?;
    if s.graph.degree(v) != 2 {
        return Ok(RuleOutcome::NotApplicable);
    }
    let w = |s: &Session, p: &[VertexId]| -> Vec<Weight> { p.iter().map(|&x| s.graph.weight(x)).collect() };

    if let Some(p) = find_pattern(s, v, &PATH3, &|p| {
        let w = w(s, p);
        w[0] >= w[1] && w[1] >= w[2] && w[2] >= w[3]
    }) {
        let w = w(s, &p);
        let mut ch = s.change();
        ch.remove(p[1])?;
        ch.remove(p[2])?;
        ch.add_edge(p[0], p[3])?;
        ch.set_weight(p[0], w[0] + w[2] - w[1])?;
        let lift = Lift::Cases {
            cases: vec![LiftCase::when(vec![p[0]], vec![]).add([p[2]]), LiftCase::otherwise().add([p[1]])],
        };
        return ch.commit(Rule::Path3, w[1], lift);
    }

    if let Some(p) = find_pattern(s, v, &PATH4, &|p| {
        let w = w(s, p);
        w[0] >= w[1] && w[1] >= w[2] && w[2] <= w[3] && w[3] <= w[4]
    }) {
        let w = w(s, &p);
        let mut ch = s.change();
        ch.remove(p[1])?;
        ch.remove(p[3])?;
        ch.add_edge(p[0], p[2])?;
        ch.add_edge(p[2], p[4])?;
        ch.set_weight(p[0], w[0] + w[2] - w[1])?;
        ch.set_weight(p[4], w[4] + w[2] - w[3])?;
        let lift = Lift::Cases {
            cases: vec![
                LiftCase::when(vec![p[2]], vec![]).remove([p[2]]).add([p[1], p[3]]),
                LiftCase::when(vec![p[0]], vec![p[4]]).add([p[3]]),
                LiftCase::when(vec![p[4]], vec![p[0]]).add([p[1]]),
                LiftCase::when(vec![], vec![p[0], p[4]]).add([p[1], p[3]]),
                LiftCase::otherwise().add([p[2]]),
            ],
        };
        return ch.commit(Rule::Path4, w[1] + w[3] - w[2], lift);
    }

    if let Some(p) = find_pattern(s, v, &CYCLE4, &|p| {
        let w = w(s, p);
        w[0] >= w[1] && w[1] >= w[2]
    }) {
        let w = w(s, &p);
        let mut ch = s.change();
        ch.remove(p[1])?;
        ch.remove(p[2])?;
        ch.set_weight(p[0], w[0] + w[2] - w[1])?;
        let lift = Lift::Cases {
            cases: vec![LiftCase::when(vec![p[0]], vec![]).add([p[2]]), LiftCase::otherwise().add([p[1]])],
        };
        return ch.commit(Rule::Cycle4, w[1], lift);
    }

    if let Some(p) = find_pattern(s, v, &CYCLE5, &|p| {
        let w = w(s, p);
        s.graph.degree(p[0]) >= 3 && s.graph.degree(p[3]) >= 3 && w[0] >= w[1] && w[1] >= w[2] && w[2] <= w[3]
    }) {
        let w = w(s, &p);
        let mut ch = s.change();
        if w[2] > w[4] {
            ch.remove(p[4])?;
            for i in 0..4 {
                ch.set_weight(p[i], w[i] - w[4])?;
            }
            let lift = Lift::Cases {
                cases: vec![
                    LiftCase::when(vec![p[0]], vec![p[2], p[3]]).add([p[2]]),
                    LiftCase::when(vec![p[3]], vec![p[0], p[1]]).add([p[1]]),
                    LiftCase::when(vec![], vec![p[0], p[1], p[2], p[3]]).add([p[1], p[4]]),
                    LiftCase::when(vec![], vec![p[0], p[3]]).add([p[4]]),
                ],
            };
            return ch.commit(Rule::Cycle5, 2 * w[4], lift);
        }
        ch.remove(p[1])?;
        ch.remove(p[2])?;
        ch.set_weight(p[0], w[0] - w[1])?;
        ch.set_weight(p[3], w[3] - w[2])?;
        ch.set_weight(p[4], w[4] - w[2])?;
        let lift = Lift::Cases {
            cases: vec![
                LiftCase::when(vec![p[0], p[3]], vec![]),
                LiftCase::when(vec![p[0]], vec![p[3]]).add([p[2]]),
                LiftCase::when(vec![p[3]], vec![p[0]]).add([p[1]]),
                // p4 keeps only its cycle neighbors
                LiftCase::when(vec![], vec![p[0], p[3], p[4]]).add([p[1], p[4]]),
                LiftCase::otherwise().add([p[1]]),
            ],
        };
        return ch.commit(Rule::Cycle5, w[1] + w[2], lift);
    }

    if let Some(p) = find_pattern(s, v, &CYCLE6, &|p| {
        let w = w(s, p);
        w[0] >= w[1].max(w[5]) && w[3] >= w[2].max(w[4]) && w[5] >= w[4]
    }) {
        let w = w(s, &p);
        let mut ch = s.change();
        if w[1] >= w[2] {
            ch.remove(p[4])?;
            ch.remove(p[5])?;
            ch.set_weight(p[1], w[1] + w[5])?;
            ch.set_weight(p[2], w[2] + w[4])?;
            let lift = Lift::Cases {
                cases: vec![
                    LiftCase::when(vec![p[1]], vec![]).add([p[5]]),
                    LiftCase::when(vec![p[2]], vec![]).add([p[4]]),
                ],
            };
            return ch.commit(Rule::Cycle6, 0, lift);
        }
        ch.remove(p[5])?;
        ch.add_edge(p[0], p[4])?;
        ch.set_weight(p[1], w[1] + w[5])?;
        ch.set_weight(p[2], w[2] + w[4])?;
        ch.set_weight(p[4], w[5] + w[2] - (w[1] + w[5]).max(w[2] + w[4]))?;
        let lift = Lift::Cases {
            cases: vec![
                LiftCase::when(vec![p[0], p[2]], vec![]).add([p[4]]),
                LiftCase::when(vec![p[1], p[3]], vec![]).add([p[5]]),
                LiftCase::when(vec![p[0], p[3]], vec![]),
                LiftCase::when(vec![p[1], p[4]], vec![]).remove([p[1], p[4]]).add([p[2], p[5]]),
                LiftCase::when(vec![p[2], p[4]], vec![]).remove([p[4]]).add([p[5]]),
                LiftCase::when(vec![p[0]], vec![]).add([p[2], p[4]]),
                LiftCase::when(vec![p[1]], vec![]).add([p[5]]),
                LiftCase::when(vec![p[2]], vec![]).add([p[4]]),
                LiftCase::when(vec![p[3]], vec![]),
                LiftCase::when(vec![p[4]], vec![]).remove([p[4]]).add([p[2], p[5]]),
                LiftCase::otherwise().add([p[2], p[5]]),
            ],
        };
        return ch.commit(Rule::Cycle6, 0, lift);
    }
    Ok(RuleOutcome::NotApplicable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::testutil::{check_events, graph, vid};

    fn run(
        weights: &[Weight],
        edges: &[(u32, u32)],
        v: u32,
        f: fn(&mut Session, VertexId) -> RuleResult,
    ) -> (Session, RuleOutcome) {
        let g = graph(weights, edges);
        let mut s = Session::new(g.clone());
        let out = f(&mut s, vid(v)).unwrap();
        if out.applied() {
            check_events(&g, &s, 0);
        }
        (s, out)
    }

    #[test]
    fn degree_one_include() {
        let (s, out) = run(&[4, 3], &[(0, 1)], 0, try_degree_one);
        assert_eq!(out.event().unwrap().delta, 4);
        assert_eq!(s.graph.num_vertices(), 0);
    }

    #[test]
    fn degree_one_fold() {
        // v=0 (2), u=1 (5), w=2 (7)
        let (s, out) = run(&[2, 5, 7], &[(0, 1), (1, 2)], 0, try_degree_one);
        let ev = out.event().unwrap();
        assert_eq!(ev.delta, 2);
        let created = ev.created[0];
        assert_eq!(s.graph.weight(created), 3);
        assert!(s.graph.has_edge(created, vid(2)));
        assert_eq!(s.graph.num_vertices(), 2);
    }

    #[test]
    fn degree_one_lift_example() {
        let g = graph(&[2, 5, 7], &[(0, 1), (1, 2)]);
        let mut s = Session::new(g.clone());
        try_degree_one(&mut s, vid(0)).unwrap();
        let kernel_sol = crate::trace::Solution::new(&s.graph, [vid(2)].into());
        assert_eq!(kernel_sol.weight, 7);
        let lifted = s.trace.lift(&kernel_sol, &g).unwrap();
        assert_eq!(lifted.vertices, [vid(0), vid(2)].into());
        assert_eq!(lifted.weight, 9);
    }

    #[test]
    fn degree_one_not_applicable_on_degree_two() {
        let (_, out) = run(&[2, 5, 1], &[(0, 1), (0, 2)], 0, try_degree_one);
        assert_eq!(out, RuleOutcome::NotApplicable);
    }

    #[test]
    fn triangle_include() {
        let (_, out) = run(&[9, 3, 5], &[(0, 1), (0, 2), (1, 2)], 0, try_degree_two);
        let ev = out.event().unwrap();
        assert_eq!((ev.rule, ev.delta), (Rule::Triangle, 9));
    }

    #[test]
    fn triangle_case_one() {
        // v=0 (1), x=1 (3), y=2 (5), z=3 (2)
        let (s, out) = run(&[1, 3, 5, 2], &[(0, 1), (0, 2), (1, 2), (2, 3)], 0, try_degree_two);
        assert_eq!(out.event().unwrap().delta, 1);
        assert_eq!(s.graph.weight(vid(1)), 2);
        assert_eq!(s.graph.weight(vid(2)), 4);
        assert_eq!(s.graph.num_vertices(), 3);
    }

    #[test]
    fn v_shape_fold_three() {
        let (s, out) = run(&[5, 3, 4], &[(0, 1), (0, 2)], 0, try_degree_two);
        let ev = out.event().unwrap();
        assert_eq!((ev.rule, ev.delta), (Rule::VShape, 5));
        assert_eq!(s.graph.num_vertices(), 1);
        assert_eq!(s.graph.weight(ev.created[0]), 2);
    }

    #[test]
    fn v_shape_include() {
        let (_, out) = run(&[8, 3, 4], &[(0, 1), (0, 2)], 0, try_degree_two);
        assert_eq!(out.event().unwrap().delta, 8);
    }

    #[test]
    fn v_shape_light_center() {
        // v lighter than both neighbors: new vertex of weight ω(v)
        let (s, out) = run(&[2, 3, 4, 5, 6], &[(0, 1), (0, 2), (1, 3), (2, 4)], 0, try_degree_two);
        let ev = out.event().unwrap();
        let vp = ev.created[0];
        assert_eq!(s.graph.weight(vp), 2);
        assert_eq!(s.graph.adjacency(vp), &[vid(3), vid(4)]);
    }

    #[test]
    fn path3_example() {
        let (s, out) = run(&[5, 4, 3, 2], &[(0, 1), (1, 2), (2, 3)], 1, try_path_cycle);
        let ev = out.event().unwrap();
        assert_eq!((ev.rule, ev.delta), (Rule::Path3, 4));
        assert_eq!(s.graph.weight(vid(0)), 4);
        assert!(s.graph.has_edge(vid(0), vid(3)));
    }

    #[test]
    fn cycle4_example() {
        // vertex 4 keeps 0 and 3 off the degree-two paths
        let edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (3, 4)];
        let (s, out) = run(&[5, 4, 3, 6, 1], &edges, 1, try_path_cycle);
        let ev = out.event().unwrap();
        assert_eq!((ev.rule, ev.delta), (Rule::Cycle4, 4));
        assert_eq!(s.graph.weight(vid(0)), 4);
        assert_eq!(s.graph.num_vertices(), 3);
    }

    #[test]
    fn path3_ordering_fails() {
        // ω(v3) > ω(v2) in both orientations, and no other pattern fits
        let (_, out) = run(&[5, 3, 4, 9], &[(0, 1), (1, 2), (2, 3)], 1, try_path_cycle);
        assert_eq!(out, RuleOutcome::NotApplicable);
    }

    #[test]
    fn random_oracle() {
        let mut fired = [0usize; 3];
        for seed in 0..2000u64 {
            let g = crate::generate::gen_random(3 + (seed % 8) as usize, 0.3, 1, 10, seed);
            for v in g.vertices() {
                let rules: [fn(&mut Session, VertexId) -> RuleResult; 3] =
                    [try_degree_one, try_degree_two, try_path_cycle];
                for (k, f) in rules.into_iter().enumerate() {
                    let mut s = Session::new(g.clone());
                    if f(&mut s, v).unwrap().applied() {
                        fired[k] += 1;
                        check_events(&g, &s, 0);
                    }
                }
            }
        }
        assert!(fired.iter().all(|&c| c > 50), "{fired:?}");
    }
}
