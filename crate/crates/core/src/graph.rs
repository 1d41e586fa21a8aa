//! Simple undirected graphs with stable vertex ids.
//!
//! Vertex ids are opaque `u32`s assigned at construction. Deleting vertices
//! never renumbers the survivors, so reduction traces can always refer back
//! to vertices of the original input.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.order(), self.edges())
    }
}

/// Length of a shortest cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn at_least(self, bound: usize) -> bool {
        match self {
            Girth::Finite(g) => g >= bound,
            Girth::Infinite => true,
        }
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

/// Degeneracy value together with the elimination order that witnesses it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degeneracy {
    pub value: usize,
    pub order: Vec<VertexId>,
}

/// One step of the series-parallel reduction used to decide K4-minor-freeness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ReductionStep {
    /// Removed a vertex of degree at most one.
    Delete { v: VertexId },
    /// Removed a degree-2 vertex and joined its neighbors; `merged` is true
    /// when the joining edge already existed.
    Suppress {
        v: VertexId,
        a: VertexId,
        b: VertexId,
        merged: bool,
    },
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Edgeless graph on ids `0..n`.
    pub fn with_vertices(n: usize) -> Self {
        let adj = (0..n as VertexId).map(|v| (v, BTreeSet::new())).collect();
        Graph { adj }
    }

    /// Graph on ids `0..n` with the given edges.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut g = Self::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        if self.adj.contains_key(&v) {
            return Err(GraphError::DuplicateVertex(v));
        }
        self.adj.insert(v, BTreeSet::new());
        Ok(())
    }

    /// Smallest id larger than every id in use.
    pub fn next_id(&self) -> VertexId {
        self.adj.keys().next_back().map_or(0, |&v| v + 1)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.check(u)?;
        self.check(v)?;
        if !self.adj.get_mut(&u).unwrap().insert(v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj.get_mut(&v).unwrap().insert(u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        let removed = self.adj.get_mut(&u).is_some_and(|s| s.remove(&v));
        if removed {
            self.adj.get_mut(&v).unwrap().remove(&u);
        }
        removed
    }

    fn check(&self, v: VertexId) -> Result<(), GraphError> {
        if self.adj.contains_key(&v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Neighbor set of `v`. Panics on an unknown id; see [`Graph::try_neighbors`].
    pub fn neighbors(&self, v: VertexId) -> &BTreeSet<VertexId> {
        &self.adj[&v]
    }

    pub fn try_neighbors(&self, v: VertexId) -> Result<&BTreeSet<VertexId>, GraphError> {
        self.adj.get(&v).ok_or(GraphError::UnknownVertex(v))
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, GraphError> {
        self.try_neighbors(v).map(BTreeSet::len)
    }

    /// Unchecked degree; panics on an unknown id.
    pub fn deg(&self, v: VertexId) -> usize {
        self.adj[&v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.values().map(BTreeSet::len).min().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.adj
            .iter()
            .flat_map(|(&u, ns)| ns.range(u + 1..).map(move |&v| (u, v)))
            .collect()
    }

    /// True when the ids are exactly `0..n`.
    pub fn has_contiguous_ids(&self) -> bool {
        self.adj.keys().enumerate().all(|(i, &v)| i as VertexId == v)
    }

    /// Induced subgraph on `V \ removed`. Survivors keep their ids.
    pub fn delete_vertices(&self, removed: &[VertexId]) -> Result<Graph, GraphError> {
        for &v in removed {
            self.check(v)?;
        }
        let removed: BTreeSet<VertexId> = removed.iter().copied().collect();
        let adj = self
            .adj
            .iter()
            .filter(|(v, _)| !removed.contains(v))
            .map(|(&v, ns)| (v, ns.difference(&removed).copied().collect()))
            .collect();
        Ok(Graph { adj })
    }

    /// Induced subgraph on `keep` (ids not in the graph are ignored).
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> Graph {
        let adj = self
            .adj
            .iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(&v, ns)| (v, ns.intersection(keep).copied().collect()))
            .collect();
        Graph { adj }
    }

    /// Connected components, each sorted, ordered by smallest id.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.contains(&v) {
                continue;
            }
            let mut comp = vec![v];
            seen.insert(v);
            let mut queue = VecDeque::from([v]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[&x] {
                    if seen.insert(y) {
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Connected, 2-regular, at least three vertices.
    pub fn is_cycle(&self) -> bool {
        self.order() >= 3 && self.adj.values().all(|s| s.len() == 2) && self.is_connected()
    }

    /// Shortest cycle length, by BFS from every vertex.
    pub fn girth(&self) -> Girth {
        let mut best = usize::MAX;
        for root in self.vertices() {
            let mut dist: HashMap<VertexId, usize> = HashMap::from([(root, 0)]);
            let mut parent: HashMap<VertexId, VertexId> = HashMap::new();
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let du = dist[&u];
                if 2 * du + 1 >= best {
                    break;
                }
                for &w in &self.adj[&u] {
                    match dist.get(&w) {
                        None => {
                            dist.insert(w, du + 1);
                            parent.insert(w, u);
                            queue.push_back(w);
                        }
                        Some(&dw) => {
                            if parent.get(&u) != Some(&w) {
                                best = best.min(du + dw + 1);
                            }
                        }
                    }
                }
            }
        }
        if best == usize::MAX {
            Girth::Infinite
        } else {
            Girth::Finite(best)
        }
    }

    /// Smallest `d` such that repeatedly removing a minimum-degree vertex
    /// never removes a vertex of degree above `d`.
    pub fn degeneracy(&self) -> Degeneracy {
        let mut deg: BTreeMap<VertexId, usize> = self.adj.iter().map(|(&v, s)| (v, s.len())).collect();
        let mut buckets: BTreeSet<(usize, VertexId)> = deg.iter().map(|(&v, &d)| (d, v)).collect();
        let mut order = Vec::with_capacity(self.order());
        let mut value = 0;
        while let Some((d, v)) = buckets.pop_first() {
            value = value.max(d);
            order.push(v);
            deg.remove(&v);
            for w in &self.adj[&v] {
                if let Some(dw) = deg.get_mut(w) {
                    buckets.remove(&(*dw, *w));
                    *dw -= 1;
                    buckets.insert((*dw, *w));
                }
            }
        }
        Degeneracy { value, order }
    }

    /// Decides K4-minor-freeness by series-parallel reduction: delete
    /// vertices of degree at most one and suppress degree-2 vertices
    /// (collapsing parallel edges) until nothing applies. The graph has no
    /// K4 minor exactly when everything is reduced away.
    pub fn k4_minor_reduction(&self) -> (bool, Vec<ReductionStep>) {
        let mut adj = self.adj.clone();
        let mut steps = Vec::new();
        let mut queue: BTreeSet<VertexId> = adj.keys().copied().collect();
        while let Some(v) = queue.pop_first() {
            let Some(ns) = adj.get(&v) else { continue };
            match ns.len() {
                0 | 1 => {
                    let ns = adj.remove(&v).unwrap();
                    for w in ns {
                        adj.get_mut(&w).unwrap().remove(&v);
                        queue.insert(w);
                    }
                    steps.push(ReductionStep::Delete { v });
                }
                2 => {
                    let mut it = ns.iter().copied();
                    let (a, b) = (it.next().unwrap(), it.next().unwrap());
                    adj.remove(&v);
                    adj.get_mut(&a).unwrap().remove(&v);
                    adj.get_mut(&b).unwrap().remove(&v);
                    let merged = !adj.get_mut(&a).unwrap().insert(b);
                    adj.get_mut(&b).unwrap().insert(a);
                    queue.insert(a);
                    queue.insert(b);
                    steps.push(ReductionStep::Suppress { v, a, b, merged });
                }
                _ => {}
            }
        }
        (adj.is_empty(), steps)
    }

    pub fn is_k4_minor_free(&self) -> bool {
        self.k4_minor_reduction().0
    }

    /// Copy with ids renumbered to `0..n` in increasing order, plus the map
    /// from old to new ids.
    pub fn relabeled(&self) -> (Graph, BTreeMap<VertexId, VertexId>) {
        let map: BTreeMap<VertexId, VertexId> = self.vertices().enumerate().map(|(i, v)| (v, i as VertexId)).collect();
        let adj = self
            .adj
            .iter()
            .map(|(v, ns)| (map[v], ns.iter().map(|w| map[w]).collect()))
            .collect();
        (Graph { adj }, map)
    }

    pub(crate) fn dense(&self) -> DenseGraph {
        DenseGraph::new(self)
    }
}

/// Index-based adjacency for inner loops. `ids[i]` is the vertex id of
/// local index `i`; neighbor lists are sorted by id.
#[derive(Clone, Debug)]
pub(crate) struct DenseGraph {
    pub ids: Vec<VertexId>,
    pub adj: Vec<Vec<usize>>,
}

impl DenseGraph {
    fn new(g: &Graph) -> Self {
        let ids: Vec<VertexId> = g.vertices().collect();
        let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = ids
            .iter()
            .map(|v| g.neighbors(*v).iter().map(|w| index[w]).collect())
            .collect();
        DenseGraph { ids, adj }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::named;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n as u32).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn degrees_of_named_graphs() {
        let c5 = named::cycle(5).unwrap();
        assert!(c5.vertices().all(|v| c5.degree(v) == Ok(2)));
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(star.degree(0), Ok(4));
        let sk4 = named::subdivided_complete(4).unwrap();
        for v in 0..4 {
            assert_eq!(sk4.degree(v), Ok(3));
        }
        assert_eq!(c5.degree(17), Err(GraphError::UnknownVertex(17)));
    }

    #[test]
    fn edge_errors() {
        let mut g = Graph::with_vertices(3);
        assert_eq!(g.add_edge(1, 1), Err(GraphError::SelfLoop(1)));
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.add_edge(1, 0), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(g.add_edge(0, 9), Err(GraphError::UnknownVertex(9)));
    }

    #[test]
    fn girth_examples() {
        assert_eq!(named::cycle(12).unwrap().girth(), Girth::Finite(12));
        assert_eq!(path(7).girth(), Girth::Infinite);
        assert_eq!(named::complete(4).unwrap().girth(), Girth::Finite(3));
        let k4_sub3 = named::subdivide_edges(&named::complete(4).unwrap(), 3);
        assert_eq!(k4_sub3.girth(), Girth::Finite(12));
    }

    #[test]
    fn k4_minor_examples() {
        assert!(!named::complete(4).unwrap().is_k4_minor_free());
        assert!(path(6).is_k4_minor_free());
        assert!(named::cycle(7).unwrap().is_k4_minor_free());
        // triangle x u w sharing edge xw with the 4-cycle x w v y
        let (x, u, w, v, y) = (0, 1, 2, 3, 4);
        let t13 = Graph::from_edges(5, &[(x, u), (u, w), (w, x), (w, v), (v, y), (y, x)]).unwrap();
        assert!(t13.is_k4_minor_free());
        assert!(!named::subdivided_complete(4).unwrap().is_k4_minor_free());
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(path(5).degeneracy().value, 1);
        assert_eq!(named::cycle(5).unwrap().degeneracy().value, 2);
        assert_eq!(named::complete(5).unwrap().degeneracy().value, 4);
        let d = named::cycle(6).unwrap().degeneracy();
        assert_eq!(d.order.len(), 6);
    }

    #[test]
    fn delete_vertices_examples() {
        let c6 = named::cycle(6).unwrap();
        let p5 = c6.delete_vertices(&[0]).unwrap();
        assert_eq!(p5.order(), 5);
        assert_eq!(p5.size(), 4);
        assert!(p5.vertices().all(|v| v != 0));
        assert_eq!(c6.delete_vertices(&[]).unwrap(), c6);
        // host C6 with u,v,w,p = 1,2,3,4 removed leaves the edge 5-0
        let rest = c6.delete_vertices(&[1, 2, 3, 4]).unwrap();
        assert_eq!(rest.edges(), vec![(0, 5)]);
        assert!(c6.delete_vertices(&[42]).is_err());
    }

    #[test]
    fn components_and_cycles() {
        let g = Graph::from_edges(5, &[(0, 1), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
        assert!(named::cycle(3).unwrap().is_cycle());
        assert!(!path(3).is_cycle());
    }
}
