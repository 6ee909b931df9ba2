use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Edge, Graph, Vertex};
use crate::error::{Error, Result};

/// A path `v_0 v_1 … v_k` without repeated vertices. `k = 0` is the trivial path.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct Path {
    vertices: Vec<Vertex>,
}

impl TryFrom<Vec<Vertex>> for Path {
    type Error = Error;
    fn try_from(vertices: Vec<Vertex>) -> Result<Self> {
        Path::new(vertices)
    }
}

impl From<Path> for Vec<Vertex> {
    fn from(p: Path) -> Self {
        p.vertices
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.vertices.iter().map(Vertex::as_str).collect();
        write!(f, "Path[{}]", names.join(" "))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.vertices.iter().map(Vertex::as_str).collect();
        f.write_str(&names.join(" "))
    }
}

impl Path {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidPath("a path needs at least one vertex".into()));
        }
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v) {
                return Err(Error::InvalidPath(format!("vertex `{v}` repeated")));
            }
        }
        Ok(Path { vertices })
    }

    /// Convenience constructor from string ids; panics on repeated vertices.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        Path::new(names.iter().map(Vertex::new).collect()).expect("valid path")
    }

    pub(crate) fn from_vec_unchecked(vertices: Vec<Vertex>) -> Self {
        debug_assert!(Path::new(vertices.clone()).is_ok());
        Path { vertices }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn start(&self) -> &Vertex {
        &self.vertices[0]
    }

    pub fn end(&self) -> &Vertex {
        &self.vertices[self.vertices.len() - 1]
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_trivial(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_empty(&self) -> bool {
        self.is_trivial()
    }

    pub fn inner_vertices(&self) -> &[Vertex] {
        if self.vertices.len() <= 2 {
            &[]
        } else {
            &self.vertices[1..self.vertices.len() - 1]
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices.windows(2).map(|w| Edge::new(w[0].clone(), w[1].clone()))
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges().collect()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.vertices.contains(v)
    }

    pub fn position(&self, v: &Vertex) -> Option<usize> {
        self.vertices.iter().position(|u| u == v)
    }

    pub fn positions(&self) -> HashMap<Vertex, usize> {
        self.vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect()
    }

    pub fn reversed(&self) -> Path {
        let mut vs = self.vertices.clone();
        vs.reverse();
        Path { vertices: vs }
    }

    /// `uPv`; if `v` precedes `u` the subpath is returned from `u` back to `v`.
    pub fn subpath(&self, u: &Vertex, v: &Vertex) -> Option<Path> {
        let i = self.position(u)?;
        let j = self.position(v)?;
        Some(self.slice(i, j))
    }

    /// Subpath between two positions, oriented from `i` to `j`.
    pub fn slice(&self, i: usize, j: usize) -> Path {
        if i <= j {
            Path {
                vertices: self.vertices[i..=j].to_vec(),
            }
        } else {
            let mut vs = self.vertices[j..=i].to_vec();
            vs.reverse();
            Path { vertices: vs }
        }
    }

    /// Checks that consecutive vertices are adjacent in `host`.
    pub fn validate_in(&self, host: &Graph) -> Result<()> {
        for v in &self.vertices {
            host.require_vertex(v)?;
        }
        for w in self.vertices.windows(2) {
            if !host.has_edge(&w[0], &w[1]) {
                return Err(Error::InvalidPath(format!(
                    "`{}` and `{}` are not adjacent",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    /// Appends `other`, which must start where `self` ends, and erases loops
    /// by keeping the first visit to every vertex.
    pub fn concat_loop_erased(&self, other: &Path) -> Result<Path> {
        if self.end() != other.start() {
            return Err(Error::InvalidPath(format!(
                "cannot join path ending at `{}` with path starting at `{}`",
                self.end(),
                other.start()
            )));
        }
        let walk = self.vertices.iter().chain(other.vertices[1..].iter());
        Ok(loop_erase(walk))
    }
}

/// Chronological loop erasure of a walk: whenever the walk returns to a vertex
/// already on the current path, the closed detour is cut out.
pub(crate) fn loop_erase<'a, I>(walk: I) -> Path
where
    I: IntoIterator<Item = &'a Vertex>,
{
    let mut out: Vec<Vertex> = Vec::new();
    let mut index: HashMap<Vertex, usize> = HashMap::new();
    for v in walk {
        if let Some(&i) = index.get(v) {
            for u in out.drain(i + 1..) {
                index.remove(&u);
            }
        } else {
            index.insert(v.clone(), out.len());
            out.push(v.clone());
        }
    }
    Path { vertices: out }
}
