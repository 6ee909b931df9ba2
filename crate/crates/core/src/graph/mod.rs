//! Finite simple undirected graphs with string vertex ids.
//!
//! Every collection is kept sorted by vertex id, so iteration order (and with
//! it every algorithm built on top) is reproducible across runs.

mod connectivity;
pub(crate) mod flow;
mod indexed;
mod path;

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use connectivity::{
    combine_path_systems, edge_connectivity, girth, min_edge_cut, vertex_connectivity, EdgeConnectivity,
};
pub(crate) use indexed::Indexed;
pub(crate) use path::loop_erase;
pub use path::Path;

/// Opaque, totally ordered vertex identifier. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(Arc<str>);

impl Vertex {
    pub fn new(name: impl AsRef<str>) -> Self {
        Vertex(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Vertex {
    fn from(s: &str) -> Self {
        Vertex::new(s)
    }
}

impl From<String> for Vertex {
    fn from(s: String) -> Self {
        Vertex(Arc::from(s))
    }
}

impl Borrow<str> for Vertex {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Undirected edge stored with its endpoints in ascending order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "(Vertex, Vertex)", into = "(Vertex, Vertex)")]
pub struct Edge(Vertex, Vertex);

impl Edge {
    /// Panics on a loop; use [`Edge::try_new`] for untrusted input.
    pub fn new(a: impl Into<Vertex>, b: impl Into<Vertex>) -> Self {
        Self::try_new(a.into(), b.into()).expect("edge endpoints must differ")
    }

    pub fn try_new(a: Vertex, b: Vertex) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge(a, b)),
            std::cmp::Ordering::Greater => Ok(Edge(b, a)),
            std::cmp::Ordering::Equal => Err(Error::Loop(a)),
        }
    }

    pub fn low(&self) -> &Vertex {
        &self.0
    }

    pub fn high(&self) -> &Vertex {
        &self.1
    }

    pub fn endpoints(&self) -> (&Vertex, &Vertex) {
        (&self.0, &self.1)
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        &self.0 == v || &self.1 == v
    }

    pub fn other(&self, v: &Vertex) -> Option<&Vertex> {
        if &self.0 == v {
            Some(&self.1)
        } else if &self.1 == v {
            Some(&self.0)
        } else {
            None
        }
    }
}

impl TryFrom<(Vertex, Vertex)> for Edge {
    type Error = Error;
    fn try_from((a, b): (Vertex, Vertex)) -> Result<Self> {
        Edge::try_new(a, b)
    }
}

impl From<Edge> for (Vertex, Vertex) {
    fn from(e: Edge) -> Self {
        (e.0, e.1)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// A finite simple undirected graph.
#[derive(Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    adj: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: Vec<Vertex>,
    edges: Vec<(Vertex, Vertex)>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;
    fn try_from(repr: GraphRepr) -> Result<Self> {
        let mut g = Graph::new();
        for v in repr.vertices {
            g.add_vertex(v);
        }
        for (a, b) in repr.edges {
            for v in [&a, &b] {
                if !g.has_vertex(v) {
                    return Err(Error::UnknownVertex(v.clone()));
                }
            }
            g.add_edge(a, b)?;
        }
        Ok(g)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            vertices: g.vertices().cloned().collect(),
            edges: g.edges().map(Into::into).collect(),
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.adj.keys().collect::<Vec<_>>())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from an edge list; endpoints are added as vertices.
    pub fn from_edges<I, A, B>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<Vertex>,
        B: Into<Vertex>,
    {
        let mut g = Graph::new();
        for (a, b) in edges {
            g.add_edge(a.into(), b.into())?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: impl Into<Vertex>) -> bool {
        let v = v.into();
        if self.adj.contains_key(&v) {
            return false;
        }
        self.adj.insert(v, BTreeSet::new());
        true
    }

    /// Adds `ab`, inserting missing endpoints. Returns whether the edge is new.
    pub fn add_edge(&mut self, a: impl Into<Vertex>, b: impl Into<Vertex>) -> Result<bool> {
        let e = Edge::try_new(a.into(), b.into())?;
        Ok(self.insert_edge(e))
    }

    pub fn insert_edge(&mut self, e: Edge) -> bool {
        let Edge(a, b) = e;
        let fresh = self.adj.entry(a.clone()).or_default().insert(b.clone());
        self.adj.entry(b).or_default().insert(a);
        fresh
    }

    pub fn remove_edge(&mut self, e: &Edge) -> bool {
        let removed = self.adj.get_mut(e.low()).map(|n| n.remove(e.high())).unwrap_or(false);
        if removed {
            if let Some(n) = self.adj.get_mut(e.high()) {
                n.remove(e.low());
            }
        }
        removed
    }

    pub fn remove_vertex(&mut self, v: &Vertex) -> bool {
        let Some(nbrs) = self.adj.remove(v) else {
            return false;
        };
        for u in nbrs {
            if let Some(n) = self.adj.get_mut(&u) {
                n.remove(v);
            }
        }
        true
    }

    pub fn has_vertex(&self, v: &Vertex) -> bool {
        self.adj.contains_key(v)
    }

    pub fn has_edge(&self, a: &Vertex, b: &Vertex) -> bool {
        self.adj.get(a).is_some_and(|n| n.contains(b))
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.has_edge(e.low(), e.high())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> + '_ {
        self.adj.keys()
    }

    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        self.adj.keys().cloned().collect()
    }

    /// Edges in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().flat_map(|(a, nbrs)| {
            nbrs.range::<Vertex, _>((std::ops::Bound::Excluded(a), std::ops::Bound::Unbounded))
                .map(move |b| Edge(a.clone(), b.clone()))
        })
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges().collect()
    }

    pub fn neighbors(&self, v: &Vertex) -> impl Iterator<Item = &Vertex> + '_ {
        self.adj.get(v).into_iter().flatten()
    }

    pub fn degree(&self, v: &Vertex) -> usize {
        self.adj.get(v).map_or(0, BTreeSet::len)
    }

    pub fn require_vertex(&self, v: &Vertex) -> Result<()> {
        if self.has_vertex(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.clone()))
        }
    }

    /// `G[X]`: all of `X` plus every edge of `G` with both ends in `X`.
    pub fn induced_subgraph<'a, I>(&self, xs: I) -> Result<Graph>
    where
        I: IntoIterator<Item = &'a Vertex>,
    {
        let keep: BTreeSet<&Vertex> = xs.into_iter().collect();
        let mut g = Graph::new();
        for &v in &keep {
            self.require_vertex(v)?;
            let nbrs = self.adj[v].iter().filter(|u| keep.contains(u)).cloned().collect();
            g.adj.insert(v.clone(), nbrs);
        }
        Ok(g)
    }

    /// Copy of the graph without the given vertices (unknown ids are ignored).
    pub fn without_vertices<'a, I>(&self, xs: I) -> Graph
    where
        I: IntoIterator<Item = &'a Vertex>,
    {
        let mut g = self.clone();
        for v in xs {
            g.remove_vertex(v);
        }
        g
    }

    pub fn without_edges<'a, I>(&self, es: I) -> Graph
    where
        I: IntoIterator<Item = &'a Edge>,
    {
        let mut g = self.clone();
        for e in es {
            g.remove_edge(e);
        }
        g
    }

    /// Union of vertex and edge sets.
    pub fn union(&self, other: &Graph) -> Graph {
        let mut g = self.clone();
        for v in other.vertices() {
            g.add_vertex(v.clone());
        }
        for e in other.edges() {
            g.insert_edge(e);
        }
        g
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.vertices().all(|v| other.has_vertex(v)) && self.edges().all(|e| other.contains_edge(&e))
    }

    /// Vertices reachable from `start` (inclusive).
    pub fn reachable_from(&self, start: &Vertex) -> BTreeSet<Vertex> {
        let mut seen = BTreeSet::new();
        if !self.has_vertex(start) {
            return seen;
        }
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start.clone());
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(&v) {
                if seen.insert(u.clone()) {
                    queue.push_back(u.clone());
                }
            }
        }
        seen
    }

    /// Connected components, each sorted, listed by smallest member.
    pub fn components(&self) -> Vec<BTreeSet<Vertex>> {
        let mut seen: BTreeSet<Vertex> = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.contains(v) {
                continue;
            }
            let comp = self.reachable_from(v);
            seen.extend(comp.iter().cloned());
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        match self.vertices().next() {
            None => true,
            Some(v) => self.reachable_from(v).len() == self.vertex_count(),
        }
    }

    /// `E(A, B)`: edges with one end in `a` and the other in `b`.
    pub fn edges_between(&self, a: &BTreeSet<Vertex>, b: &BTreeSet<Vertex>) -> BTreeSet<Edge> {
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        let mut out = BTreeSet::new();
        for v in small {
            for u in self.neighbors(v) {
                if large.contains(u) {
                    out.insert(Edge::new(v.clone(), u.clone()));
                }
            }
        }
        out
    }
}

/// A cut `E(A, B)` of a graph with `A ∪ B = V`, `A ∩ B = ∅`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub side_a: BTreeSet<Vertex>,
    pub side_b: BTreeSet<Vertex>,
    pub cross_edges: BTreeSet<Edge>,
}

impl Cut {
    /// Builds the cut with `side_a` on one side and everything else on the other.
    pub fn from_side(g: &Graph, side_a: BTreeSet<Vertex>) -> Cut {
        let side_b: BTreeSet<Vertex> = g.vertices().filter(|v| !side_a.contains(*v)).cloned().collect();
        let cross_edges = g.edges_between(&side_a, &side_b);
        Cut {
            side_a,
            side_b,
            cross_edges,
        }
    }

    pub fn size(&self) -> usize {
        self.cross_edges.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        Vertex::new(s)
    }

    #[test]
    fn induced_subgraph_of_triangle() {
        let g = Graph::from_edges([("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        let h = g.induced_subgraph(&[v("a"), v("b")]).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_set(), BTreeSet::from([Edge::new("a", "b")]));
        assert_eq!(g.induced_subgraph(g.vertex_set().iter()).unwrap(), g);
    }

    #[test]
    fn induced_subgraph_rejects_unknown() {
        let g = Graph::from_edges([("a", "b")]).unwrap();
        assert_eq!(g.induced_subgraph(&[v("z")]), Err(Error::UnknownVertex(v("z"))));
    }

    #[test]
    fn loops_are_rejected() {
        assert_eq!(Graph::from_edges([("a", "a")]), Err(Error::Loop(v("a"))));
    }

    #[test]
    fn parallel_edges_collapse() {
        let mut g = Graph::new();
        assert!(g.add_edge("a", "b").unwrap());
        assert!(!g.add_edge("b", "a").unwrap());
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn json_shape() {
        let g = Graph::from_edges([("b", "a"), ("b", "c")]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"]]}"#);
        let back: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        let bad = r#"{"vertices":["a"],"edges":[["a","q"]]}"#;
        assert!(serde_json::from_str::<Graph>(bad).is_err());
    }
}
