//! Every single-rule application must lift *any* independent set of the
//! reduced graph to at least its weight plus the event's offset, not only
//! maximal or optimal ones. Events compose, so a non-maximal set can reach
//! an earlier event even when the kernel solution was maximal.
mod common;

use mwis_kernel::reductions::{Budgets, Session};
use mwis_kernel::scheduler::is_global;
use mwis_kernel::solver::enumerate_independent_sets;
use mwis_kernel::{try_rule, Rule, Solution};

#[test]
fn every_independent_set_lifts() {
    let budgets = Budgets::default();
    let mut failures = Vec::new();
    for seed in 0..600u64 {
        let g = common::search_instance(Rule::DegreeOne, seed);
        for rule in Rule::ALL {
            let candidates: Vec<_> =
                if is_global(rule) { g.vertices().take(1).collect() } else { g.vertices().collect() };
            for v in candidates {
                let mut s = Session::new(g.clone());
                let Ok(outcome) = try_rule(&mut s, rule, v, &budgets) else { continue };
                let Some(ev) = outcome.event() else { continue };
                let fired = ev.rule;
                for set in enumerate_independent_sets(&s.graph, 1 << 16).unwrap() {
                    let sol = Solution::new(&s.graph, set);
                    if let Err(e) = s.trace.lift(&sol, &g) {
                        failures.push(format!("seed {seed} {fired:?} at {}: {e}", v.0));
                    }
                }
            }
        }
    }
    assert!(failures.is_empty(), "{} failures, first: {:?}", failures.len(), &failures[..failures.len().min(5)]);
}
