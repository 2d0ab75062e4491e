//! Dynamic vertex-weighted undirected graph.
//!
//! Vertex identities are stable for the lifetime of a graph: removing a vertex
//! never frees its id, and vertices created by folds always receive a fresh id.
//! Adjacency lists are kept sorted so that every neighborhood query is
//! deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Vertex weight. All reductions only add, subtract and compare weights.
pub type Weight = u64;

/// Ordered set of vertex ids.
pub type VertexSet = BTreeSet<VertexId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

/// Equality is structural: same active ids, weights and edges. Removed ids
/// and the weight-overflow guard are ignored.
#[derive(Debug, Clone, Default)]
pub struct WeightedGraph {
    weights: Vec<Weight>,
    active: Vec<bool>,
    adj: Vec<Vec<VertexId>>,
    num_active: usize,
    num_edges: usize,
    // sum of every weight ever assigned; guards against overflow in offsets
    weight_budget: Weight,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.num_active == other.num_active
            && self.num_edges == other.num_edges
            && self.vertices().eq(other.vertices())
            && self.vertices().all(|v| self.weights[v.index()] == other.weights[v.index()] && self.adj[v.index()] == other.adj[v.index()])
    }
}

impl Eq for WeightedGraph {}

impl WeightedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with `weights.len()` vertices (ids `0..n`) and no edges.
    pub fn with_weights(weights: &[Weight]) -> Result<Self, GraphError> {
        let mut g = Self::new();
        for &w in weights {
            g.add_vertex(w)?;
        }
        Ok(g)
    }

    /// Convenience constructor used throughout tests and examples.
    pub fn from_edges(weights: &[Weight], edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let mut g = Self::with_weights(weights)?;
        for &(u, v) in edges {
            g.add_edge(VertexId(u), VertexId(v))?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, weight: Weight) -> Result<VertexId, GraphError> {
        self.weight_budget = self
            .weight_budget
            .checked_add(weight)
            .ok_or(GraphError::WeightOverflow)?;
        let id = u32::try_from(self.weights.len()).map_err(|_| GraphError::TooManyVertices)?;
        self.weights.push(weight);
        self.active.push(true);
        self.adj.push(Vec::new());
        self.num_active += 1;
        Ok(VertexId(id))
    }

    pub fn remove_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        self.check_active(v)?;
        let nbrs = std::mem::take(&mut self.adj[v.index()]);
        for u in &nbrs {
            let list = &mut self.adj[u.index()];
            if let Ok(pos) = list.binary_search(&v) {
                list.remove(pos);
            }
        }
        self.num_edges -= nbrs.len();
        self.active[v.index()] = false;
        self.num_active -= 1;
        Ok(())
    }

    /// Inserts the undirected edge `{u, v}`. Inserting an existing edge is a no-op.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.check_active(u)?;
        self.check_active(v)?;
        let list = &mut self.adj[u.index()];
        match list.binary_search(&v) {
            Ok(_) => return Ok(()),
            Err(pos) => list.insert(pos, v),
        }
        let list = &mut self.adj[v.index()];
        if let Err(pos) = list.binary_search(&u) {
            list.insert(pos, u);
        }
        self.num_edges += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        self.check_active(u)?;
        self.check_active(v)?;
        let list = &mut self.adj[u.index()];
        let Ok(pos) = list.binary_search(&v) else {
            return Ok(false);
        };
        list.remove(pos);
        let list = &mut self.adj[v.index()];
        if let Ok(pos) = list.binary_search(&u) {
            list.remove(pos);
        }
        self.num_edges -= 1;
        Ok(true)
    }

    /// Sets the weight of an active vertex.
    pub fn set_weight(&mut self, v: VertexId, weight: Weight) -> Result<(), GraphError> {
        self.check_active(v)?;
        if weight > self.weights[v.index()] {
            let extra = weight - self.weights[v.index()];
            self.weight_budget = self
                .weight_budget
                .checked_add(extra)
                .ok_or(GraphError::WeightOverflow)?;
        }
        self.weights[v.index()] = weight;
        Ok(())
    }

    #[inline]
    pub fn is_active(&self, v: VertexId) -> bool {
        self.active.get(v.index()).copied().unwrap_or(false)
    }

    pub fn check_active(&self, v: VertexId) -> Result<(), GraphError> {
        if self.is_active(v) {
            Ok(())
        } else {
            Err(GraphError::InactiveVertex(v))
        }
    }

    /// Weight of a vertex. Panics on ids that were never allocated.
    #[inline]
    pub fn weight(&self, v: VertexId) -> Weight {
        self.weights[v.index()]
    }

    /// Sorted neighbor list of an active vertex (empty for inactive ids).
    #[inline]
    pub fn adjacency(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v.index()]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v.index()].len()
    }

    #[inline]
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.adj[a.index()].binary_search(&b).is_ok()
    }

    pub fn num_vertices(&self) -> usize {
        self.num_active
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    /// Number of ids ever allocated (active or not).
    pub fn id_bound(&self) -> usize {
        self.weights.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.active
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices().flat_map(move |u| {
            self.adj[u.index()]
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn neighbors(&self, v: VertexId) -> Result<VertexSet, GraphError> {
        self.check_active(v)?;
        Ok(self.adj[v.index()].iter().copied().collect())
    }

    pub fn closed_neighborhood(&self, v: VertexId) -> Result<VertexSet, GraphError> {
        let mut s = self.neighbors(v)?;
        s.insert(v);
        Ok(s)
    }

    /// `N(U)`: union of the neighborhoods of `U`, minus `U` itself.
    pub fn set_neighborhood(&self, set: &VertexSet) -> Result<VertexSet, GraphError> {
        let mut out = VertexSet::new();
        for &v in set {
            self.check_active(v)?;
            out.extend(self.adj[v.index()].iter().copied().filter(|u| !set.contains(u)));
        }
        Ok(out)
    }

    /// `N[U] = N(U) ∪ U`.
    pub fn closed_set_neighborhood(&self, set: &VertexSet) -> Result<VertexSet, GraphError> {
        let mut out = self.set_neighborhood(set)?;
        out.extend(set.iter().copied());
        Ok(out)
    }

    pub fn is_independent<'a>(&self, set: impl IntoIterator<Item = &'a VertexId>) -> bool {
        let set: Vec<VertexId> = set.into_iter().copied().collect();
        for (i, &u) in set.iter().enumerate() {
            if !self.is_active(u) {
                return false;
            }
            for &v in &set[i + 1..] {
                if u == v || self.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_clique<'a>(&self, set: impl IntoIterator<Item = &'a VertexId>) -> bool {
        let set: Vec<VertexId> = set.into_iter().copied().collect();
        for (i, &u) in set.iter().enumerate() {
            for &v in &set[i + 1..] {
                if !self.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }

    pub fn weight_of<'a>(&self, set: impl IntoIterator<Item = &'a VertexId>) -> Weight {
        set.into_iter().map(|&v| self.weights[v.index()]).sum()
    }

    pub fn total_weight(&self) -> Weight {
        self.vertices().map(|v| self.weight(v)).sum()
    }

    /// Induced subgraph on `set` with dense ids `0..|set|` in ascending order of
    /// the original ids. The returned vector maps new ids to original ids.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<(WeightedGraph, Vec<VertexId>), GraphError> {
        let mapping: Vec<VertexId> = set.iter().copied().collect();
        let index: BTreeMap<VertexId, u32> = mapping
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        let mut sub = WeightedGraph::new();
        for &v in &mapping {
            self.check_active(v)?;
            sub.add_vertex(self.weight(v))?;
        }
        for (i, &v) in mapping.iter().enumerate() {
            for u in &self.adj[v.index()] {
                if let Some(&j) = index.get(u) {
                    if (i as u32) < j {
                        sub.add_edge(VertexId(i as u32), VertexId(j))?;
                    }
                }
            }
        }
        Ok((sub, mapping))
    }

    /// Connected components in ascending order of their smallest vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.id_bound()];
        let mut comps = Vec::new();
        for s in self.vertices() {
            if seen[s.index()] {
                continue;
            }
            seen[s.index()] = true;
            let mut comp = VertexSet::new();
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for &u in &self.adj[v.index()] {
                    if !seen[u.index()] {
                        seen[u.index()] = true;
                        stack.push(u);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// Copy with only active vertices, renumbered densely in ascending id order.
    pub fn compacted(&self) -> (WeightedGraph, Vec<VertexId>) {
        let all: VertexSet = self.vertices().collect();
        self.induced_subgraph(&all).expect("all vertices are active")
    }

    /// Full rescan of the bookkeeping invariants. Used by tests.
    pub fn check_consistency(&self) -> Result<(), String> {
        let mut edges = 0;
        let mut active = 0;
        for (i, list) in self.adj.iter().enumerate() {
            let v = VertexId(i as u32);
            if !self.active[i] {
                if !list.is_empty() {
                    return Err(format!("inactive {v} has neighbors"));
                }
                continue;
            }
            active += 1;
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("adjacency of {v} not strictly sorted"));
            }
            for &u in list {
                if u == v {
                    return Err(format!("self loop at {v}"));
                }
                if !self.is_active(u) {
                    return Err(format!("{v} adjacent to inactive {u}"));
                }
                if self.adj[u.index()].binary_search(&v).is_err() {
                    return Err(format!("asymmetric edge {v}-{u}"));
                }
            }
            edges += list.len();
        }
        if edges % 2 != 0 || edges / 2 != self.num_edges {
            return Err(format!("edge count {} vs {}", edges / 2, self.num_edges));
        }
        if active != self.num_active {
            return Err(format!("active count {active} vs {}", self.num_active));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn add_vertex_gives_fresh_ids() {
        let mut g = WeightedGraph::new();
        let a = g.add_vertex(5).unwrap();
        assert_eq!(a, v(0));
        assert_eq!(g.degree(a), 0);
        let b = g.add_vertex(3).unwrap();
        assert_ne!(a, b);
        g.remove_vertex(a).unwrap();
        let c = g.add_vertex(1).unwrap();
        assert_ne!(c, a);
    }

    #[test]
    fn remove_vertex_clears_adjacency() {
        let mut g = WeightedGraph::from_edges(&[1, 1], &[(0, 1)]).unwrap();
        g.remove_vertex(v(0)).unwrap();
        assert_eq!(g.degree(v(1)), 0);
        assert!(matches!(g.remove_vertex(v(0)), Err(GraphError::InactiveVertex(_))));

        let mut g = WeightedGraph::from_edges(&[1, 1, 1], &[(0, 1), (1, 2)]).unwrap();
        g.remove_vertex(v(1)).unwrap();
        assert_eq!(g.num_edges(), 0);
        assert_eq!(g.degree(v(0)), 0);
        assert_eq!(g.degree(v(2)), 0);
    }

    #[test]
    fn add_edge_is_idempotent_and_rejects_loops() {
        let mut g = WeightedGraph::with_weights(&[1, 1]).unwrap();
        g.add_edge(v(0), v(1)).unwrap();
        assert!(g.has_edge(v(1), v(0)));
        g.add_edge(v(0), v(1)).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert!(matches!(g.add_edge(v(0), v(0)), Err(GraphError::SelfLoop(_))));
    }

    #[test]
    fn neighborhoods() {
        let g = WeightedGraph::from_edges(&[1, 1, 1], &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.neighbors(v(1)).unwrap(), [v(0), v(2)].into());
        let u: VertexSet = [v(0), v(2)].into();
        assert_eq!(g.closed_set_neighborhood(&u).unwrap(), [v(0), v(1), v(2)].into());
        assert_eq!(g.set_neighborhood(&u).unwrap(), [v(1)].into());
    }

    #[test]
    fn independence_and_weight() {
        let g = WeightedGraph::from_edges(&[2, 1, 3], &[(0, 1), (1, 2)]).unwrap();
        assert!(g.is_independent(&[v(0), v(2)]));
        assert!(!g.is_independent(&[v(0), v(1)]));
        assert_eq!(g.weight_of(&[v(0), v(2)]), 5);
    }

    #[test]
    fn induced_subgraph_maps_ids() {
        let g = WeightedGraph::from_edges(&[1, 2, 3], &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let (sub, map) = g.induced_subgraph(&[v(0), v(2)].into()).unwrap();
        assert_eq!(sub.num_vertices(), 2);
        assert_eq!(sub.num_edges(), 1);
        assert_eq!(map, vec![v(0), v(2)]);
        assert_eq!(sub.weight(v(1)), 3);
        let (empty, map) = g.induced_subgraph(&VertexSet::new()).unwrap();
        assert_eq!(empty.num_vertices(), 0);
        assert!(map.is_empty());
    }

    #[test]
    fn components() {
        let g = WeightedGraph::from_edges(&[1; 4], &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.connected_components().len(), 2);
        assert!(WeightedGraph::new().connected_components().is_empty());
        let p = WeightedGraph::from_edges(&[1; 3], &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.connected_components().len(), 1);
    }

    #[test]
    fn overflow_is_an_error() {
        let mut g = WeightedGraph::new();
        g.add_vertex(u64::MAX).unwrap();
        assert!(matches!(g.add_vertex(1), Err(GraphError::WeightOverflow)));
    }
}
