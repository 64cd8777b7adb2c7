//! Finite simple undirected graphs over [`VertexId`]s.
//!
//! Graph values are immutable: every structural operation (join, disjoint
//! union, merge, split, edge surgery) returns a new graph. Iteration order is
//! the sorted order of canonical ids everywhere.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vertex::{Half, VertexId, VertexIdError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} would be joined to itself (loop)")]
    Loop(VertexId),
    #[error("edge {0} would appear twice (parallel edge)")]
    ParallelEdge(Edge),
    #[error("vertex {0} occurs in both operands")]
    Overlap(VertexId),
    #[error("vertex {0} is not in the graph")]
    MissingVertex(VertexId),
    #[error("edge {0} is not in the graph")]
    MissingEdge(Edge),
    #[error("edge {0} already exists")]
    EdgeExists(Edge),
    #[error("vertex {0} appears in more than one merge group")]
    OverlappingGroups(VertexId),
    #[error("invalid split of {vertex}: {reason}")]
    BadSplit { vertex: VertexId, reason: String },
    #[error("delete/add lists differ in length ({deleted} vs {added})")]
    UnbalancedSurgery { deleted: usize, added: usize },
    #[error("graph has {order} vertices, limit is {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error(transparent)]
    Id(#[from] VertexIdError),
}

/// Unordered pair of distinct vertices, stored with the smaller id first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "(VertexId, VertexId)", into = "(VertexId, VertexId)")]
pub struct Edge(VertexId, VertexId);

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Result<Self, GraphError> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge(a, b)),
            std::cmp::Ordering::Greater => Ok(Edge(b, a)),
            std::cmp::Ordering::Equal => Err(GraphError::Loop(a)),
        }
    }

    pub fn ends(&self) -> (&VertexId, &VertexId) {
        (&self.0, &self.1)
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        &self.0 == v || &self.1 == v
    }

    /// The endpoint that is not `v`, if `v` is an endpoint.
    pub fn other(&self, v: &VertexId) -> Option<&VertexId> {
        if &self.0 == v {
            Some(&self.1)
        } else if &self.1 == v {
            Some(&self.0)
        } else {
            None
        }
    }
}

impl TryFrom<(VertexId, VertexId)> for Edge {
    type Error = GraphError;
    fn try_from((a, b): (VertexId, VertexId)) -> Result<Self, Self::Error> {
        Edge::new(a, b)
    }
}

impl From<Edge> for (VertexId, VertexId) {
    fn from(e: Edge) -> Self {
        (e.0, e.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0, self.1)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// A vertex to split with the neighbours for its `y` and `z` halves.
pub type SplitSpec = (VertexId, BTreeSet<VertexId>, BTreeSet<VertexId>);

/// Bipartition of one connected component, or `None` if it has an odd cycle.
pub type Sides = Option<(BTreeSet<VertexId>, BTreeSet<VertexId>)>;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    edges: BTreeSet<Edge>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(order={}, size={})", self.order(), self.size())
    }
}

impl Graph {
    pub fn empty() -> Self {
        Graph::default()
    }

    /// Build a graph, rejecting loops, repeated edges and dangling endpoints.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = Edge>,
    {
        let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> =
            vertices.into_iter().map(|v| (v, BTreeSet::new())).collect();
        let mut set = BTreeSet::new();
        for e in edges {
            let (a, b) = e.ends();
            if !adj.contains_key(a) {
                return Err(GraphError::MissingVertex(a.clone()));
            }
            if !adj.contains_key(b) {
                return Err(GraphError::MissingVertex(b.clone()));
            }
            adj.get_mut(a).unwrap().insert(b.clone());
            adj.get_mut(b).unwrap().insert(a.clone());
            if !set.insert(e.clone()) {
                return Err(GraphError::ParallelEdge(e));
            }
        }
        Ok(Graph { adj, edges: set })
    }

    /// `P_2` on `u_i`, `v_i`.
    pub fn p2(i: u32) -> Self {
        let (u, v) = (VertexId::u(i), VertexId::v(i));
        let e = Edge::new(u.clone(), v.clone()).unwrap();
        Graph::new([u, v], [e]).unwrap()
    }

    /// Edgeless graph on the given vertices.
    pub fn null<I: IntoIterator<Item = VertexId>>(vertices: I) -> Self {
        Graph::new(vertices, []).unwrap()
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> + '_ {
        self.adj.keys()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter()
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.adj.contains_key(v)
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn has_edge(&self, a: &VertexId, b: &VertexId) -> bool {
        self.adj.get(a).is_some_and(|n| n.contains(b))
    }

    pub fn neighbors(&self, v: &VertexId) -> Option<&BTreeSet<VertexId>> {
        self.adj.get(v)
    }

    pub fn degree(&self, v: &VertexId) -> usize {
        self.adj.get(v).map_or(0, BTreeSet::len)
    }

    /// Edges incident to `v`, in sorted order.
    pub fn incident(&self, v: &VertexId) -> Vec<Edge> {
        self.adj
            .get(v)
            .into_iter()
            .flatten()
            .map(|w| Edge::new(v.clone(), w.clone()).unwrap())
            .collect()
    }

    /// Degrees in non-increasing order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.values().map(BTreeSet::len).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    pub fn is_regular(&self, degree: usize) -> bool {
        self.adj.values().all(|n| n.len() == degree)
    }

    /// Join product: both graphs plus every edge between them.
    pub fn join(&self, other: &Graph) -> Result<Graph, GraphError> {
        if let Some(v) = self.vertices().find(|v| other.contains_vertex(v)) {
            return Err(GraphError::Overlap(v.clone()));
        }
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .chain(other.edges.iter())
            .cloned()
            .collect();
        for a in self.vertices() {
            for b in other.vertices() {
                edges.push(Edge::new(a.clone(), b.clone())?);
            }
        }
        Graph::new(self.vertices().chain(other.vertices()).cloned(), edges)
    }

    /// Disjoint union. Copy `c` is re-indexed by the sum of the largest copy
    /// indices of the graphs before it, so unioning graphs that each use
    /// index 1 turns copy `c` of `u_1` into `u_c`.
    pub fn disjoint_union(graphs: &[Graph]) -> Graph {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut offset = 0;
        for g in graphs {
            vertices.extend(g.vertices().map(|v| v.shifted(offset)));
            edges.extend(g.edges().map(|e| {
                let (a, b) = e.ends();
                Edge::new(a.shifted(offset), b.shifted(offset)).unwrap()
            }));
            offset += g.vertices().map(VertexId::max_index).max().unwrap_or(0);
        }
        Graph::new(vertices, edges).expect("shifted copies are disjoint")
    }

    /// Map from each grouped vertex to its merged id. Singleton groups map to
    /// themselves.
    pub fn merge_map(
        &self,
        groups: &[Vec<VertexId>],
    ) -> Result<BTreeMap<VertexId, VertexId>, GraphError> {
        let mut map = BTreeMap::new();
        for group in groups {
            for v in group {
                if !self.contains_vertex(v) {
                    return Err(GraphError::MissingVertex(v.clone()));
                }
            }
            let merged = VertexId::merged(group.iter().cloned())?;
            for v in group {
                if map.insert(v.clone(), merged.clone()).is_some() {
                    return Err(GraphError::OverlappingGroups(v.clone()));
                }
            }
        }
        for (v, m) in &map {
            if v != m && self.contains_vertex(m) && !map.contains_key(m) {
                return Err(GraphError::Overlap(m.clone()));
            }
        }
        Ok(map)
    }

    /// Merge each group into one vertex. Every edge is kept with its
    /// endpoints rewritten; a group whose members are adjacent gives a
    /// [`GraphError::Loop`], two edges collapsing onto one gives a
    /// [`GraphError::ParallelEdge`].
    pub fn merge_vertices(&self, groups: &[Vec<VertexId>]) -> Result<Graph, GraphError> {
        let map = self.merge_map(groups)?;
        self.rename(&map)
    }

    /// Rewrite vertex ids through `map` (unmapped ids are kept).
    pub fn rename(&self, map: &BTreeMap<VertexId, VertexId>) -> Result<Graph, GraphError> {
        let f = |v: &VertexId| map.get(v).cloned().unwrap_or_else(|| v.clone());
        let vertices: BTreeSet<VertexId> = self.vertices().map(f).collect();
        let mut edges = Vec::with_capacity(self.size());
        for e in &self.edges {
            let (a, b) = e.ends();
            edges.push(Edge::new(f(a), f(b))?);
        }
        Graph::new(vertices, edges)
    }

    /// Replace `v` by `y(v)` and `z(v)`; `y(v)` takes the edges to `y_side`,
    /// `z(v)` the edges to `z_side`. The two sides must partition the
    /// neighbourhood of `v` and both be non-empty.
    pub fn split_vertex(
        &self,
        v: &VertexId,
        y_side: &BTreeSet<VertexId>,
        z_side: &BTreeSet<VertexId>,
    ) -> Result<Graph, GraphError> {
        self.split_vertices(&[(v.clone(), y_side.clone(), z_side.clone())])
    }

    /// [`Graph::split_vertex`] for several vertices at once. The split
    /// vertices must be pairwise non-adjacent.
    pub fn split_vertices(&self, splits: &[SplitSpec]) -> Result<Graph, GraphError> {
        let mut redirect: BTreeMap<(&VertexId, &VertexId), VertexId> = BTreeMap::new();
        let mut removed = BTreeSet::new();
        let mut added = Vec::new();
        for (v, y_side, z_side) in splits {
            let nbrs = self
                .neighbors(v)
                .ok_or_else(|| GraphError::MissingVertex(v.clone()))?;
            let bad = |reason: &str| GraphError::BadSplit {
                vertex: v.clone(),
                reason: reason.to_string(),
            };
            if y_side.is_empty() || z_side.is_empty() {
                return Err(bad("both parts must be non-empty"));
            }
            if !y_side.is_disjoint(z_side) {
                return Err(bad("parts overlap"));
            }
            if y_side.len() + z_side.len() != nbrs.len()
                || !y_side.iter().chain(z_side).all(|w| nbrs.contains(w))
            {
                return Err(bad("parts do not cover the incident edges exactly"));
            }
            if !removed.insert(v) {
                return Err(bad("vertex split twice"));
            }
            let y = VertexId::split(v.clone(), Half::Y);
            let z = VertexId::split(v.clone(), Half::Z);
            for id in [&y, &z] {
                if self.contains_vertex(id) {
                    return Err(GraphError::Overlap(id.clone()));
                }
            }
            for w in y_side {
                redirect.insert((v, w), y.clone());
            }
            for w in z_side {
                redirect.insert((v, w), z.clone());
            }
            added.push(y);
            added.push(z);
        }
        let mut edges = Vec::with_capacity(self.size());
        for e in &self.edges {
            let (a, b) = e.ends();
            if removed.contains(a) && removed.contains(b) {
                return Err(GraphError::BadSplit {
                    vertex: a.clone(),
                    reason: format!("adjacent to {b}, which is split too"),
                });
            }
            let a2 = redirect.get(&(a, b)).unwrap_or(a);
            let b2 = redirect.get(&(b, a)).unwrap_or(b);
            edges.push(Edge::new(a2.clone(), b2.clone())?);
        }
        let vertices = self
            .vertices()
            .filter(|w| !removed.contains(w))
            .cloned()
            .chain(added);
        Graph::new(vertices, edges)
    }

    /// Remove `del` and insert `add`; the vertex set is unchanged.
    pub fn delete_add_edges(&self, del: &[Edge], add: &[Edge]) -> Result<Graph, GraphError> {
        if del.len() != add.len() {
            return Err(GraphError::UnbalancedSurgery {
                deleted: del.len(),
                added: add.len(),
            });
        }
        let mut edges = self.edges.clone();
        for e in del {
            if !edges.remove(e) {
                return Err(GraphError::MissingEdge(e.clone()));
            }
        }
        for e in add {
            let (a, b) = e.ends();
            for w in [a, b] {
                if !self.contains_vertex(w) {
                    return Err(GraphError::MissingVertex(w.clone()));
                }
            }
            if !edges.insert(e.clone()) {
                return Err(GraphError::EdgeExists(e.clone()));
            }
        }
        Graph::new(self.vertices().cloned(), edges)
    }

    /// Vertex sets of the connected components, ordered by smallest id.
    pub fn component_vertex_sets(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen: BTreeSet<&VertexId> = BTreeSet::new();
        let mut out = Vec::new();
        // Keys iterate in sorted order, so each new component starts at its
        // smallest vertex and components come out sorted.
        for start in self.adj.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(v) = queue.pop_front() {
                comp.insert(v.clone());
                for w in &self.adj[v] {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<Graph> {
        self.component_vertex_sets()
            .into_iter()
            .map(|vs| self.induced(&vs))
            .collect()
    }

    pub fn component_count(&self) -> usize {
        self.component_vertex_sets().len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Subgraph induced on `vs`.
    pub fn induced(&self, vs: &BTreeSet<VertexId>) -> Graph {
        let adj = vs
            .iter()
            .filter_map(|v| {
                self.adj
                    .get(v)
                    .map(|n| (v.clone(), n.intersection(vs).cloned().collect()))
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| {
                let (a, b) = e.ends();
                vs.contains(a) && vs.contains(b)
            })
            .cloned()
            .collect();
        Graph { adj, edges }
    }

    /// Two-colouring of each component (in [`Graph::components`] order). The
    /// side containing the component's smallest vertex comes first.
    pub fn bipartition(&self) -> Vec<Sides> {
        self.component_vertex_sets()
            .into_iter()
            .map(|comp| {
                let start = comp.iter().next().unwrap().clone();
                let mut side: BTreeMap<VertexId, bool> = BTreeMap::from([(start.clone(), false)]);
                let mut queue = VecDeque::from([start]);
                while let Some(v) = queue.pop_front() {
                    let s = side[&v];
                    for w in &self.adj[&v] {
                        match side.get(w) {
                            Some(&t) if t == s => return None,
                            Some(_) => {}
                            None => {
                                side.insert(w.clone(), !s);
                                queue.push_back(w.clone());
                            }
                        }
                    }
                }
                let (a, b): (Vec<_>, Vec<_>) = side.into_iter().partition(|(_, s)| !*s);
                Some((
                    a.into_iter().map(|(v, _)| v).collect(),
                    b.into_iter().map(|(v, _)| v).collect(),
                ))
            })
            .collect()
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().iter().all(Option::is_some)
    }

    /// True when every component is bipartite with equal part sizes.
    pub fn has_equal_bipartition(&self) -> bool {
        self.bipartition()
            .iter()
            .all(|s| matches!(s, Some((a, b)) if a.len() == b.len()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: VertexId, b: VertexId) -> Edge {
        Edge::new(a, b).unwrap()
    }

    fn k3() -> Graph {
        Graph::p2(1)
            .join(&Graph::null([VertexId::x(1, 1)]))
            .unwrap()
    }

    #[test]
    fn join_p2_o1_is_triangle() {
        let g = k3();
        assert_eq!((g.order(), g.size()), (3, 3));
        assert!(g.is_regular(2));
    }

    #[test]
    fn join_2p2_o2() {
        let two = Graph::disjoint_union(&[Graph::p2(1), Graph::p2(1)]);
        let o2 = Graph::null([VertexId::x(1, 1), VertexId::x(1, 2)]);
        let g = two.join(&o2).unwrap();
        assert_eq!((g.order(), g.size()), (6, 10));
    }

    #[test]
    fn join_null_null_is_k22() {
        let a = Graph::null([VertexId::u(1), VertexId::u(2)]);
        let b = Graph::null([VertexId::v(1), VertexId::v(2)]);
        let g = a.join(&b).unwrap();
        assert_eq!(g.size(), 4);
        assert!(g.is_regular(2));
        assert!(g.has_equal_bipartition());
    }

    #[test]
    fn join_rejects_overlap() {
        assert_eq!(
            Graph::p2(1).join(&Graph::p2(1)),
            Err(GraphError::Overlap(VertexId::u(1)))
        );
    }

    #[test]
    fn disjoint_union_reindexes() {
        let g = Graph::disjoint_union(&[Graph::p2(1), Graph::p2(1)]);
        assert!(g.has_edge(&VertexId::u(2), &VertexId::v(2)));
        assert_eq!(g.size(), 2);
        assert_eq!(g.component_count(), 2);
        assert_eq!(Graph::disjoint_union(&[]), Graph::empty());
    }

    #[test]
    fn disjoint_union_of_eight_joins() {
        let one = Graph::p2(1)
            .join(&Graph::null((1..=4).map(|j| VertexId::x(1, j))))
            .unwrap();
        let g = Graph::disjoint_union(&vec![one; 8]);
        assert_eq!((g.order(), g.size()), (48, 72));
        assert_eq!(g.component_count(), 8);
    }

    #[test]
    fn merge_x_column_of_eight_copies() {
        let one = Graph::p2(1)
            .join(&Graph::null((1..=4).map(|j| VertexId::x(1, j))))
            .unwrap();
        let g = Graph::disjoint_union(&vec![one; 8]);
        let group: Vec<_> = (1..=8).map(|i| VertexId::x(i, 1)).collect();
        let m = g.merge_vertices(&[group.clone()]).unwrap();
        let id = VertexId::merged(group).unwrap();
        assert_eq!(m.degree(&id), 16);
        assert_eq!(m.size(), g.size());
    }

    #[test]
    fn merge_singleton_is_identity() {
        let g = k3();
        assert_eq!(g.merge_vertices(&[vec![VertexId::u(1)]]).unwrap(), g);
    }

    #[test]
    fn merge_two_v_gives_p3() {
        let g = Graph::disjoint_union(&[Graph::p2(1), Graph::p2(1)]);
        let m = g
            .merge_vertices(&[vec![VertexId::v(1), VertexId::v(2)]])
            .unwrap();
        assert_eq!((m.order(), m.size()), (3, 2));
        assert!(m.is_connected());
    }

    #[test]
    fn merge_errors() {
        let g = k3();
        assert!(matches!(
            g.merge_vertices(&[vec![VertexId::u(1), VertexId::v(1)]]),
            Err(GraphError::Loop(_))
        ));
        // u1 and v1 of two triangles share nothing, but x1.1 and ... build a
        // path u1-v1-u2 style conflict: two vertices with a common neighbour.
        let c4 = Graph::null([VertexId::u(1), VertexId::u(2)])
            .join(&Graph::null([VertexId::v(1), VertexId::v(2)]))
            .unwrap();
        assert!(matches!(
            c4.merge_vertices(&[vec![VertexId::u(1), VertexId::u(2)]]),
            Err(GraphError::ParallelEdge(_))
        ));
        assert!(matches!(
            c4.merge_vertices(&[vec![VertexId::u(1)], vec![VertexId::u(1), VertexId::u(7)]]),
            Err(GraphError::MissingVertex(_))
        ));
    }

    #[test]
    fn split_then_merge_restores() {
        let one = Graph::p2(1)
            .join(&Graph::null([VertexId::x(1, 1), VertexId::x(1, 2)]))
            .unwrap();
        let g = Graph::disjoint_union(&[one.clone(), one]);
        let x = VertexId::merged([VertexId::x(1, 1), VertexId::x(2, 1)]).unwrap();
        let g = g
            .merge_vertices(&[vec![VertexId::x(1, 1), VertexId::x(2, 1)]])
            .unwrap();
        assert_eq!(g.degree(&x), 4);
        let y_side = BTreeSet::from([VertexId::u(1), VertexId::v(2)]);
        let z_side = BTreeSet::from([VertexId::v(1), VertexId::u(2)]);
        let s = g.split_vertex(&x, &y_side, &z_side).unwrap();
        assert_eq!((s.order(), s.size()), (g.order() + 1, g.size()));
        let back = s
            .merge_vertices(&[vec![
                VertexId::split(x.clone(), Half::Y),
                VertexId::split(x.clone(), Half::Z),
            ]])
            .unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn split_degree_two_into_pendants() {
        let path = Graph::new(
            [VertexId::u(1), VertexId::v(1), VertexId::x(1, 1)],
            [
                e(VertexId::u(1), VertexId::x(1, 1)),
                e(VertexId::v(1), VertexId::x(1, 1)),
            ],
        )
        .unwrap();
        let x = VertexId::x(1, 1);
        let s = path
            .split_vertex(
                &x,
                &BTreeSet::from([VertexId::u(1)]),
                &BTreeSet::from([VertexId::v(1)]),
            )
            .unwrap();
        assert_eq!(s.component_count(), 2);
        assert_eq!(s.degree_sequence(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn split_rejects_bad_parts() {
        let g = k3();
        let x = VertexId::x(1, 1);
        let all = BTreeSet::from([VertexId::u(1), VertexId::v(1)]);
        assert!(g.split_vertex(&x, &all, &BTreeSet::new()).is_err());
        assert!(g
            .split_vertex(&x, &BTreeSet::from([VertexId::u(1)]), &all)
            .is_err());
        assert!(g
            .split_vertex(
                &x,
                &BTreeSet::from([VertexId::u(1)]),
                &BTreeSet::from([VertexId::u(9)])
            )
            .is_err());
    }

    #[test]
    fn delete_add_identity_cases() {
        let g = k3();
        assert_eq!(g.delete_add_edges(&[], &[]).unwrap(), g);
        let uv = e(VertexId::u(1), VertexId::v(1));
        assert_eq!(g.delete_add_edges(&[uv.clone()], &[uv.clone()]).unwrap(), g);
        assert!(matches!(
            g.delete_add_edges(&[], &[uv]),
            Err(GraphError::UnbalancedSurgery { .. })
        ));
    }

    #[test]
    fn delete_add_rejects_existing_edge() {
        let g = Graph::disjoint_union(&[k3(), k3()]);
        let del = e(VertexId::u(1), VertexId::v(1));
        let add = e(VertexId::u(1), VertexId::x(1, 1));
        assert_eq!(
            g.delete_add_edges(&[del], &[add.clone()]),
            Err(GraphError::EdgeExists(add))
        );
    }

    #[test]
    fn components_and_bipartition() {
        let g = Graph::disjoint_union(&[Graph::p2(1), Graph::p2(1)]);
        assert_eq!(g.components().len(), 2);
        assert!(g.has_equal_bipartition());
        assert_eq!(k3().bipartition(), vec![None]);
    }
}
