//! Instance generators and the brute-force application check shared by the
//! integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mwis_kernel::generate::gen_random;
use mwis_kernel::reductions::{Budgets, Session};
use mwis_kernel::scheduler::is_global;
use mwis_kernel::solver::brute_force_mwis;
use mwis_kernel::{try_rule, Rule, Solution, VertexId, WeightedGraph};

pub const EDGE_PROBS: [f64; 4] = [0.1, 0.2, 0.3, 0.5];

/// `n` in `[1, 14]`, edge probability from [`EDGE_PROBS`], weights in `[1, 10]`.
pub fn random_instance(seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=14);
    let p = EDGE_PROBS[rng.gen_range(0..EDGE_PROBS.len())];
    gen_random(n, p, 1, 10, rng.gen())
}

/// A cycle of 3 to 7 vertices with a few extra vertices hanging off some of
/// its vertices, so that paths and cycles of degree-two vertices are common.
pub fn ring_instance(seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.gen_range(3..=7u32);
    let extra = rng.gen_range(0..=6u32);
    let weights: Vec<u64> = (0..len + extra).map(|_| rng.gen_range(1..=10)).collect();
    let mut edges: Vec<(u32, u32)> = (0..len).map(|i| (i, (i + 1) % len)).collect();
    if extra > 0 {
        for i in 0..len {
            if rng.gen_bool(0.4) {
                for _ in 0..rng.gen_range(1..=2) {
                    edges.push((i, len + rng.gen_range(0..extra)));
                }
            }
        }
        for a in len..len + extra {
            for b in a + 1..len + extra {
                if rng.gen_bool(0.3) {
                    edges.push((a, b));
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    WeightedGraph::from_edges(&weights, &edges).expect("valid planted graph")
}

/// Random graph with weights in `[0, 4]`, so zero weights are frequent.
pub fn zero_weight_instance(seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_random(rng.gen_range(2..=12), EDGE_PROBS[rng.gen_range(0..4)], 0, 4, rng.gen())
}

/// Candidate instance number `seed` for firing searches.
pub fn search_instance(rule: Rule, seed: u64) -> WeightedGraph {
    if rule == Rule::ExcludeZeroWeight {
        zero_weight_instance(seed)
    } else if seed % 3 == 2 {
        ring_instance(seed)
    } else {
        random_instance(seed)
    }
}

/// Checks everything recorded in `s` (one rule application plus the zero-weight
/// exclusions it triggered) against brute force on `before`: the α identity,
/// and that lifting an optimal solution of the result gives an independent
/// set of weight `α(before)`.
pub fn check_application(before: &WeightedGraph, s: &Session) -> Result<(), String> {
    let delta: u64 = s.trace.events().iter().map(|e| e.delta).sum();
    let a_before = brute_force_mwis(before).map_err(|e| e.to_string())?;
    let a_after = brute_force_mwis(&s.graph).map_err(|e| e.to_string())?;
    if a_before.weight != a_after.weight + delta {
        return Err(format!("alpha {} != {} + offset {}", a_before.weight, a_after.weight, delta));
    }
    let lifted = s.trace.lift(&a_after, before).map_err(|e| e.to_string())?;
    check_solution(before, &lifted, a_before.weight)
}

pub fn check_solution(g: &WeightedGraph, sol: &Solution, expected: u64) -> Result<(), String> {
    if !g.is_independent(&sol.vertices) {
        return Err("lifted set is not independent".into());
    }
    if g.weight_of(&sol.vertices) != expected {
        return Err(format!("lifted weight {} != {}", g.weight_of(&sol.vertices), expected));
    }
    Ok(())
}

#[derive(Debug, Default)]
pub struct Firings {
    pub found: usize,
    pub failures: Vec<String>,
    /// Applications by a sibling tag of the same implementation (not counted).
    pub siblings: usize,
    pub instances: u64,
}

/// Searches generated instances until `rule` has fired `target` times (or
/// `max_instances` were tried), checking every application with
/// [`check_application`]. `check` may add rule-specific assertions.
pub fn collect_firings(
    rule: Rule,
    budgets: &Budgets,
    target: usize,
    max_instances: u64,
    mut check: impl FnMut(&WeightedGraph, &Session) -> Result<(), String>,
) -> Firings {
    let mut out = Firings::default();
    for seed in 0..max_instances {
        if out.found >= target {
            break;
        }
        out.instances += 1;
        let g = search_instance(rule, seed);
        let candidates: Vec<VertexId> = if is_global(rule) || rule == Rule::ExcludeZeroWeight {
            g.vertices().take(1).collect()
        } else {
            g.vertices().collect()
        };
        for v in candidates {
            if out.found >= target {
                break;
            }
            let mut s = Session::new(g.clone());
            let outcome = match try_rule(&mut s, rule, v, budgets) {
                Ok(o) => o,
                Err(e) => {
                    out.failures.push(format!("seed {seed} v {}: error {e}", v.0));
                    continue;
                }
            };
            let Some(ev) = outcome.event() else { continue };
            if ev.rule != rule {
                out.siblings += 1;
                continue;
            }
            out.found += 1;
            if let Err(e) = check_application(&g, &s).and_then(|_| check(&g, &s)) {
                out.failures.push(format!("seed {seed} v {}: {e}", v.0));
            }
        }
    }
    out
}
