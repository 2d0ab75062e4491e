//! Reduction trace: the ordered record of applied reductions, and the lifting
//! of an optimal kernel solution back to the original graph.
//!
//! Every event carries a [`Lift`] payload describing how to undo it on a
//! solution. Events are undone strictly last-applied-first; after an event is
//! undone, the vertices it created are dropped from the solution.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{FormatError, LiftError};
use crate::graph::{VertexId, VertexSet, Weight, WeightedGraph};

/// Identifier of every reduction rule the engine knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    DegreeOne,
    Triangle,
    VShape,
    Path3,
    Path4,
    Cycle4,
    Cycle5,
    Cycle6,
    HeavyVertex,
    NeighborhoodRemoval,
    CliqueNeighborhoodRemoval,
    NeighborhoodFolding,
    GeneralizedFold,
    TwoVertexNeighborhoodRemoval,
    HeavySet,
    SimplicialVertex,
    SimplicialWeightTransfer,
    Domination,
    BasicSingleEdge,
    ExtendedSingleEdge,
    StructionOriginal,
    StructionModified,
    StructionExtended,
    StructionExtendedReduced,
    Unconfined,
    SimultaneousConfined,
    Uncovered,
    SimultaneousCover,
    OneVertexCut,
    TwoVertexCut,
    Cwis,
    Twin,
    ExcludeZeroWeight,
}

impl Rule {
    pub const ALL: [Rule; 33] = [
        Rule::DegreeOne,
        Rule::Triangle,
        Rule::VShape,
        Rule::Path3,
        Rule::Path4,
        Rule::Cycle4,
        Rule::Cycle5,
        Rule::Cycle6,
        Rule::HeavyVertex,
        Rule::NeighborhoodRemoval,
        Rule::CliqueNeighborhoodRemoval,
        Rule::NeighborhoodFolding,
        Rule::GeneralizedFold,
        Rule::TwoVertexNeighborhoodRemoval,
        Rule::HeavySet,
        Rule::SimplicialVertex,
        Rule::SimplicialWeightTransfer,
        Rule::Domination,
        Rule::BasicSingleEdge,
        Rule::ExtendedSingleEdge,
        Rule::StructionOriginal,
        Rule::StructionModified,
        Rule::StructionExtended,
        Rule::StructionExtendedReduced,
        Rule::Unconfined,
        Rule::SimultaneousConfined,
        Rule::Uncovered,
        Rule::SimultaneousCover,
        Rule::OneVertexCut,
        Rule::TwoVertexCut,
        Rule::Cwis,
        Rule::Twin,
        Rule::ExcludeZeroWeight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::DegreeOne => "degree_one",
            Rule::Triangle => "triangle",
            Rule::VShape => "v_shape",
            Rule::Path3 => "path3",
            Rule::Path4 => "path4",
            Rule::Cycle4 => "cycle4",
            Rule::Cycle5 => "cycle5",
            Rule::Cycle6 => "cycle6",
            Rule::HeavyVertex => "heavy_vertex",
            Rule::NeighborhoodRemoval => "neighborhood_removal",
            Rule::CliqueNeighborhoodRemoval => "clique_neighborhood_removal",
            Rule::NeighborhoodFolding => "neighborhood_folding",
            Rule::GeneralizedFold => "generalized_fold",
            Rule::TwoVertexNeighborhoodRemoval => "two_vertex_neighborhood_removal",
            Rule::HeavySet => "heavy_set",
            Rule::SimplicialVertex => "simplicial_vertex",
            Rule::SimplicialWeightTransfer => "simplicial_weight_transfer",
            Rule::Domination => "domination",
            Rule::BasicSingleEdge => "basic_single_edge",
            Rule::ExtendedSingleEdge => "extended_single_edge",
            Rule::StructionOriginal => "struction_original",
            Rule::StructionModified => "struction_modified",
            Rule::StructionExtended => "struction_extended",
            Rule::StructionExtendedReduced => "struction_extended_reduced",
            Rule::Unconfined => "unconfined",
            Rule::SimultaneousConfined => "simultaneous_confined",
            Rule::Uncovered => "uncovered",
            Rule::SimultaneousCover => "simultaneous_cover",
            Rule::OneVertexCut => "one_vertex_cut",
            Rule::TwoVertexCut => "two_vertex_cut",
            Rule::Cwis => "cwis",
            Rule::Twin => "twin",
            Rule::ExcludeZeroWeight => "exclude_zero_weight",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// One branch of a [`Lift::Cases`] payload. The branch matches when every
/// vertex of `all_in` is in the solution and none of `none_in` is.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftCase {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub all_in: Vec<VertexId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub none_in: Vec<VertexId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub add: Vec<VertexId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub remove: Vec<VertexId>,
}

impl LiftCase {
    pub fn when(all_in: Vec<VertexId>, none_in: Vec<VertexId>) -> Self {
        LiftCase { all_in, none_in, add: Vec::new(), remove: Vec::new() }
    }

    pub fn otherwise() -> Self {
        Self::when(Vec::new(), Vec::new())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(mut self, add: impl IntoIterator<Item = VertexId>) -> Self {
        self.add.extend(add);
        self
    }

    pub fn remove(mut self, remove: impl IntoIterator<Item = VertexId>) -> Self {
        self.remove.extend(remove);
        self
    }

    fn matches(&self, sol: &BTreeSet<VertexId>) -> bool {
        self.all_in.iter().all(|v| sol.contains(v)) && self.none_in.iter().all(|v| !sol.contains(v))
    }
}

/// Rule-specific reconstruction data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Lift {
    /// The vertices always join the solution.
    Include { vertices: Vec<VertexId> },
    /// Excluded vertices never return; nothing to do.
    Exclude,
    /// A zero-weight vertex rejoins the solution when none of its former
    /// neighbors is in it.
    AddIfFree { vertex: VertexId, neighbors: Vec<VertexId> },
    /// `folded` is a created vertex: if chosen, `chosen` joins the solution,
    /// else `otherwise` does.
    Fold { folded: VertexId, chosen: Vec<VertexId>, otherwise: Vec<VertexId> },
    /// First matching case is applied.
    Cases { cases: Vec<LiftCase> },
    /// Each created key vertex in the solution expands into its originals. If no
    /// key is chosen and the solution avoids `watch`, `fallback` joins instead.
    Expand {
        expansions: Vec<(VertexId, Vec<VertexId>)>,
        watch: Vec<VertexId>,
        fallback: Vec<VertexId>,
    },
}

impl Lift {
    pub fn include(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        Lift::Include { vertices: vertices.into_iter().collect() }
    }

    fn apply(&self, sol: &mut BTreeSet<VertexId>) {
        match self {
            Lift::Include { vertices } => sol.extend(vertices.iter().copied()),
            Lift::Exclude => {}
            Lift::AddIfFree { vertex, neighbors } => {
                if neighbors.iter().all(|u| !sol.contains(u)) {
                    sol.insert(*vertex);
                }
            }
            Lift::Fold { folded, chosen, otherwise } => {
                if sol.remove(folded) {
                    sol.extend(chosen.iter().copied());
                } else {
                    sol.extend(otherwise.iter().copied());
                }
            }
            Lift::Cases { cases } => {
                if let Some(case) = cases.iter().find(|c| c.matches(sol)) {
                    for v in &case.remove {
                        sol.remove(v);
                    }
                    sol.extend(case.add.iter().copied());
                }
            }
            Lift::Expand { expansions, watch, fallback } => {
                let mut any = false;
                let mut add = Vec::new();
                for (key, originals) in expansions {
                    if sol.contains(key) {
                        any = true;
                        add.extend(originals.iter().copied());
                    }
                }
                if any {
                    sol.extend(add);
                } else if watch.iter().all(|v| !sol.contains(v)) {
                    sol.extend(fallback.iter().copied());
                }
            }
        }
    }
}

/// One applied reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub rule: Rule,
    pub delta: Weight,
    /// Removed vertices with their weight at removal time.
    pub removed: Vec<(VertexId, Weight)>,
    pub created: Vec<VertexId>,
    pub payload: Lift,
}

impl TraceEvent {
    pub fn removed_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.removed.iter().map(|&(v, _)| v)
    }

    /// Undo this event on `sol`, a solution of the graph right after the event.
    pub fn lift_into(&self, sol: &mut BTreeSet<VertexId>) {
        self.payload.apply(sol);
        for v in &self.created {
            sol.remove(v);
        }
    }
}

/// An independent set together with its weight.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Solution {
    pub vertices: VertexSet,
    pub weight: Weight,
}

impl Solution {
    pub fn new(g: &WeightedGraph, vertices: VertexSet) -> Self {
        let weight = g.weight_of(&vertices);
        Solution { vertices, weight }
    }

    pub fn empty() -> Self {
        Solution::default()
    }

    pub fn is_valid_for(&self, g: &WeightedGraph) -> bool {
        g.is_independent(&self.vertices) && g.weight_of(&self.vertices) == self.weight
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    events: Vec<TraceEvent>,
    offset: Weight,
}

impl ReductionTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, event: TraceEvent) -> Result<(), crate::error::GraphError> {
        self.offset = self
            .offset
            .checked_add(event.delta)
            .ok_or(crate::error::GraphError::WeightOverflow)?;
        self.events.push(event);
        Ok(())
    }

    pub fn offset(&self) -> Weight {
        self.offset
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Lift the solution set of the graph reached after `events[..end]` down to
    /// the graph before `events[start..]`, without any checks.
    pub fn lift_range(&self, start: usize, end: usize, sol: &mut BTreeSet<VertexId>) {
        for ev in self.events[start..end].iter().rev() {
            ev.lift_into(sol);
        }
    }

    /// Maps a kernel solution back to `original`. The result weighs at least
    /// `kernel weight + offset`, with equality when the kernel solution is
    /// optimal (then the result is optimal too). This holds for any
    /// independent kernel set, maximal or not.
    pub fn lift(&self, kernel_solution: &Solution, original: &WeightedGraph) -> Result<Solution, LiftError> {
        let mut sol = kernel_solution.vertices.clone();
        self.lift_range(0, self.events.len(), &mut sol);
        let lifted: Vec<VertexId> = sol.iter().copied().collect();
        for &v in &lifted {
            if !original.is_active(v) {
                return Err(LiftError::UnknownVertex(v));
            }
        }
        for &u in &lifted {
            if let Some(&v) = original.adjacency(u).iter().find(|&&v| v > u && sol.contains(&v)) {
                return Err(LiftError::NotIndependent(u, v));
            }
        }
        let weight = original.weight_of(&sol);
        let expected = kernel_solution.weight + self.offset;
        if weight < expected {
            return Err(LiftError::WeightMismatch { expected, actual: weight });
        }
        Ok(Solution { vertices: sol, weight })
    }

    /// Checks that the kernel solution is independent in `kernel`, greedily
    /// extends it to a maximal one (ascending ids), then lifts.
    pub fn lift_checked(
        &self,
        kernel: &WeightedGraph,
        kernel_solution: &Solution,
        original: &WeightedGraph,
    ) -> Result<Solution, LiftError> {
        if kernel_solution.vertices.iter().any(|&v| !kernel.is_active(v)) {
            return Err(LiftError::KernelNotIndependent);
        }
        if !kernel.is_independent(&kernel_solution.vertices) {
            return Err(LiftError::KernelNotIndependent);
        }
        let mut vertices = kernel_solution.vertices.clone();
        for v in kernel.vertices() {
            if !vertices.contains(&v) && kernel.adjacency(v).iter().all(|u| !vertices.contains(u)) {
                vertices.insert(v);
            }
        }
        self.lift(&Solution::new(kernel, vertices), original)
    }

    /// JSON-lines serialization, one event per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for ev in &self.events {
            out.push_str(&serde_json::to_string(ev).expect("trace events serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_json_lines(text: &str) -> Result<Self, FormatError> {
        let mut trace = ReductionTrace::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let ev: TraceEvent =
                serde_json::from_str(line).map_err(|e| FormatError::at(i + 1, e.to_string()))?;
            trace.record(ev).map_err(|e| FormatError::at(i + 1, e.to_string()))?;
        }
        Ok(trace)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn include(vs: &[u32], delta: Weight) -> TraceEvent {
        TraceEvent {
            rule: Rule::NeighborhoodRemoval,
            delta,
            removed: vs.iter().map(|&i| (v(i), delta)).collect(),
            created: vec![],
            payload: Lift::include(vs.iter().map(|&i| v(i))),
        }
    }

    #[test]
    fn offsets_accumulate() {
        let mut t = ReductionTrace::new();
        assert_eq!(t.offset(), 0);
        t.record(include(&[0], 5)).unwrap();
        assert_eq!(t.offset(), 5);
        t.record(include(&[1], 3)).unwrap();
        assert_eq!(t.offset(), 8);
    }

    #[test]
    fn negative_delta_is_rejected_on_parse() {
        let line = r#"{"rule":"twin","delta":-1,"removed":[],"created":[],"payload":{"kind":"exclude"}}"#;
        assert!(ReductionTrace::from_json_lines(line).is_err());
    }

    #[test]
    fn empty_trace_lift_is_identity() {
        let g = WeightedGraph::from_edges(&[1, 2], &[]).unwrap();
        let s = Solution::new(&g, [v(0), v(1)].into());
        let t = ReductionTrace::new();
        assert_eq!(t.lift(&s, &g).unwrap(), s);
    }

    #[test]
    fn include_event_readds_vertex() {
        let g = WeightedGraph::from_edges(&[5, 1, 2], &[(0, 1)]).unwrap();
        let mut t = ReductionTrace::new();
        t.record(include(&[0], 5)).unwrap();
        let kernel_sol = Solution { vertices: [v(2)].into(), weight: 2 };
        let lifted = t.lift(&kernel_sol, &g).unwrap();
        assert_eq!(lifted.vertices, [v(0), v(2)].into());
        assert_eq!(lifted.weight, 7);
    }

    #[test]
    fn lift_detects_conflicts() {
        let g = WeightedGraph::from_edges(&[5, 1], &[(0, 1)]).unwrap();
        let mut t = ReductionTrace::new();
        t.record(include(&[0], 5)).unwrap();
        let bad = Solution { vertices: [v(1)].into(), weight: 1 };
        assert!(matches!(t.lift(&bad, &g), Err(LiftError::NotIndependent(_, _))));
    }

    #[test]
    fn rule_names_round_trip() {
        for r in Rule::ALL {
            assert_eq!(r.name().parse::<Rule>().unwrap(), r);
            let json = serde_json::to_string(&r).unwrap();
            assert_eq!(json, format!("\"{}\"", r.name()));
        }
    }

    #[test]
    fn json_lines_round_trip() {
        let mut t = ReductionTrace::new();
        t.record(include(&[0, 2], 4)).unwrap();
        t.record(TraceEvent {
            rule: Rule::DegreeOne,
            delta: 2,
            removed: vec![(v(1), 5), (v(3), 2)],
            created: vec![v(7)],
            payload: Lift::Fold { folded: v(7), chosen: vec![v(1)], otherwise: vec![v(3)] },
        })
        .unwrap();
        let text = t.to_json_lines();
        let back = ReductionTrace::from_json_lines(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json_lines(), text);
    }
}
