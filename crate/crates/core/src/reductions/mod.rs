//! Exact data reduction rules.
//!
//! Every rule takes a [`Session`] (graph plus trace) and candidate vertices.
//! It either reports [`RuleOutcome::NotApplicable`] without touching the graph,
//! or mutates the graph, records one [`TraceEvent`] and returns it. Vertices
//! whose weight drops to zero during an application are excluded right after
//! it by separate `exclude_zero_weight` events.

use serde::{Deserialize, Serialize};

use crate::error::{GraphError, ReduceError};
use crate::graph::{VertexId, Weight, WeightedGraph};
use crate::trace::{Lift, ReductionTrace, Rule, TraceEvent};

pub mod clique;
pub mod cut;
pub mod domination;
pub mod flow;
pub mod low_degree;
pub mod neighborhood;
pub mod simultaneous;
pub mod struction;
pub mod twin;

pub use clique::{simplicial_vertices, try_simplicial};
pub use domination::{try_basic_single_edge, try_domination, try_extended_single_edge};
pub use simultaneous::{
    compute_confining_set, compute_covering_set, try_simultaneous_confined, try_simultaneous_cover,
    try_uncovered, try_unconfined, ConfiningResult, CoveringResult,
};
pub use flow::{critical_set, critical_weight_value, try_cwis, FlowNetwork, MaxFlow};
pub use cut::{articulation_points, try_one_vertex_cut, try_two_vertex_cut, two_vertex_cuts};
pub use twin::{find_twins, try_twin};
pub use low_degree::{try_degree_one, try_degree_two, try_path_cycle};
pub use neighborhood::{
    try_clique_neighborhood_removal, try_generalized_fold, try_heavy_set, try_heavy_vertex,
    try_neighborhood_folding, try_neighborhood_removal, try_two_vertex_neighborhood_removal,
};
pub use struction::{
    try_struction_extended, try_struction_extended_reduced, try_struction_modified, try_struction_original,
    StructionBudget,
};

pub type RuleResult = Result<RuleOutcome, ReduceError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleOutcome {
    NotApplicable,
    Applied(TraceEvent),
}

impl RuleOutcome {
    pub fn applied(&self) -> bool {
        matches!(self, RuleOutcome::Applied(_))
    }

    pub fn event(&self) -> Option<&TraceEvent> {
        match self {
            RuleOutcome::Applied(ev) => Some(ev),
            RuleOutcome::NotApplicable => None,
        }
    }
}

/// Size limits for rules that solve or enumerate subproblems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budgets {
    /// Max `|N(v)|` for which heavy vertex solves `α(G[N(v)])` exactly.
    pub subgraph_vertex_bound: usize,
    /// Max `|N(v)|` for generalized neighborhood folding.
    pub generalized_fold_bound: usize,
    /// Max `|N({u,v})|` for heavy set.
    pub heavy_set_bound: usize,
    /// Max component size for one- and two-vertex cuts.
    pub component_bound: usize,
    /// Max number of independent sets enumerated in one neighborhood.
    pub enumeration_cap: usize,
    /// Max satellite / mirror extensions when growing confining or covering sets.
    pub max_extensions: usize,
    /// Max vertices of a subgraph solved exactly while growing covering sets.
    pub cover_solve_bound: usize,
    /// Max number of first vertices tried when searching for two-vertex cuts.
    pub two_cut_candidates: usize,
    pub struction: StructionBudget,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            subgraph_vertex_bound: 12,
            generalized_fold_bound: 12,
            heavy_set_bound: 8,
            component_bound: 20,
            enumeration_cap: 4096,
            max_extensions: 32,
            cover_solve_bound: 12,
            two_cut_candidates: 64,
            struction: StructionBudget::default(),
        }
    }
}

/// A graph being reduced together with the trace of everything applied to it.
#[derive(Debug, Clone, Default)]
pub struct Session {
    pub graph: WeightedGraph,
    pub trace: ReductionTrace,
    dirty: Vec<VertexId>,
}

impl Session {
    pub fn new(graph: WeightedGraph) -> Self {
        Session { graph, trace: ReductionTrace::new(), dirty: Vec::new() }
    }

    pub fn into_parts(self) -> (WeightedGraph, ReductionTrace) {
        (self.graph, self.trace)
    }

    /// Vertices whose surroundings changed since the last call.
    pub fn take_dirty(&mut self) -> Vec<VertexId> {
        std::mem::take(&mut self.dirty)
    }

    pub(crate) fn change(&mut self) -> Change<'_> {
        Change { session: self, removed: Vec::new(), created: Vec::new(), reweighted: Vec::new() }
    }

    /// Excludes every active zero-weight vertex. Returns the number removed.
    pub fn exclude_zero_weights(&mut self) -> Result<usize, ReduceError> {
        let zeros: Vec<VertexId> = self.graph.vertices().filter(|&v| self.graph.weight(v) == 0).collect();
        let mut count = 0;
        for z in zeros {
            if self.graph.is_active(z) && self.graph.weight(z) == 0 {
                self.exclude_zero(z)?;
                count += 1;
            }
        }
        Ok(count)
    }

    fn exclude_zero(&mut self, z: VertexId) -> Result<(), ReduceError> {
        let neighbors = self.graph.adjacency(z).to_vec();
        self.dirty.extend(neighbors.iter().copied());
        self.graph.remove_vertex(z)?;
        self.trace.record(TraceEvent {
            rule: Rule::ExcludeZeroWeight,
            delta: 0,
            removed: vec![(z, 0)],
            created: Vec::new(),
            payload: Lift::AddIfFree { vertex: z, neighbors },
        })?;
        Ok(())
    }
}

/// Staged mutation of a session that ends in exactly one trace event.
pub(crate) struct Change<'s> {
    session: &'s mut Session,
    removed: Vec<(VertexId, Weight)>,
    created: Vec<VertexId>,
    reweighted: Vec<VertexId>,
}

impl Change<'_> {
    pub fn graph(&self) -> &WeightedGraph {
        &self.session.graph
    }

    pub fn remove(&mut self, v: VertexId) -> Result<(), GraphError> {
        let g = &mut self.session.graph;
        g.check_active(v)?;
        self.removed.push((v, g.weight(v)));
        self.session.dirty.extend(g.adjacency(v).iter().copied());
        g.remove_vertex(v)
    }

    pub fn remove_all(&mut self, vs: impl IntoIterator<Item = VertexId>) -> Result<(), GraphError> {
        for v in vs {
            self.remove(v)?;
        }
        Ok(())
    }

    pub fn create(&mut self, weight: Weight, nbrs: impl IntoIterator<Item = VertexId>) -> Result<VertexId, GraphError> {
        let id = self.session.graph.add_vertex(weight)?;
        self.created.push(id);
        self.session.dirty.push(id);
        for u in nbrs {
            self.add_edge(id, u)?;
        }
        Ok(id)
    }

    pub fn set_weight(&mut self, v: VertexId, weight: Weight) -> Result<(), GraphError> {
        self.session.graph.set_weight(v, weight)?;
        self.reweighted.push(v);
        self.session.dirty.push(v);
        self.session.dirty.extend(self.session.graph.adjacency(v).iter().copied());
        Ok(())
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        self.session.graph.add_edge(u, v)?;
        self.session.dirty.push(u);
        self.session.dirty.push(v);
        Ok(())
    }

    /// Records the event, then excludes vertices this change left at weight 0.
    pub fn commit(self, rule: Rule, delta: Weight, payload: Lift) -> RuleResult {
        let Change { session, removed, created, reweighted } = self;
        let event = TraceEvent { rule, delta, removed, created, payload };
        session.trace.record(event.clone())?;
        let mut zeros: Vec<VertexId> = event
            .created
            .iter()
            .chain(reweighted.iter())
            .copied()
            .filter(|&v| session.graph.is_active(v) && session.graph.weight(v) == 0)
            .collect();
        zeros.sort_unstable();
        zeros.dedup();
        for z in zeros {
            session.exclude_zero(z)?;
        }
        Ok(RuleOutcome::Applied(event))
    }
}

/// Includes `vs` (an independent set) in the solution: removes `N[vs]`.
pub(crate) fn include(session: &mut Session, rule: Rule, vs: &[VertexId]) -> RuleResult {
    let g = &session.graph;
    let delta = g.weight_of(vs);
    let set: crate::graph::VertexSet = vs.iter().copied().collect();
    let closed = g.closed_set_neighborhood(&set)?;
    let mut ch = session.change();
    ch.remove_all(closed)?;
    ch.commit(rule, delta, Lift::include(vs.iter().copied()))
}

/// Removes `vs` from the graph without touching the solution.
pub(crate) fn exclude(session: &mut Session, rule: Rule, vs: &[VertexId]) -> RuleResult {
    let mut ch = session.change();
    ch.remove_all(vs.iter().copied())?;
    ch.commit(rule, 0, Lift::Exclude)
}

/// Replaces the independent-or-not set `group` by a fresh vertex of weight
/// `weight` adjacent to `N(group)`. Chosen fold vertex means `chosen` joins the
/// solution, otherwise `otherwise` does.
#[allow(clippy::too_many_arguments)]
pub(crate) fn fold_into_new(
    session: &mut Session,
    rule: Rule,
    group: &[VertexId],
    nbrs: &crate::graph::VertexSet,
    weight: Weight,
    delta: Weight,
    chosen: Vec<VertexId>,
    otherwise: Vec<VertexId>,
) -> RuleResult {
    let mut ch = session.change();
    ch.remove_all(group.iter().copied())?;
    let folded = ch.create(weight, nbrs.iter().copied())?;
    ch.commit(rule, delta, Lift::Fold { folded, chosen, otherwise })
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use crate::solver::brute_force_mwis;
    use crate::trace::Solution;

    /// Checks the α identity and lifting of everything recorded since
    /// `trace_len` on `before`.
    pub fn check_events(before: &WeightedGraph, session: &Session, trace_len: usize) {
        let after = &session.graph;
        let events = &session.trace.events()[trace_len..];
        let delta: Weight = events.iter().map(|e| e.delta).sum();
        let a_before = brute_force_mwis(before).unwrap();
        let a_after = brute_force_mwis(after).unwrap();
        assert_eq!(
            a_before.weight,
            a_after.weight + delta,
            "alpha identity fails for {:?}",
            events.iter().map(|e| e.rule).collect::<Vec<_>>()
        );
        let mut sol = a_after.vertices.clone();
        session.trace.lift_range(trace_len, session.trace.len(), &mut sol);
        let lifted = Solution::new(before, sol);
        assert!(before.is_independent(&lifted.vertices), "lifted set not independent");
        assert_eq!(lifted.weight, a_before.weight, "lifted weight");
        after.check_consistency().unwrap();
    }

    pub fn vid(i: u32) -> VertexId {
        VertexId(i)
    }

    pub fn graph(weights: &[Weight], edges: &[(u32, u32)]) -> WeightedGraph {
        WeightedGraph::from_edges(weights, edges).unwrap()
    }
}
