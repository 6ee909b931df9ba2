//! Grain lines: a linear order `(L, ≤_L)` between endpoints `x`, `y` plus a
//! finite sequence `P_0, …, P_m` of pairwise edge-disjoint `x`–`y` paths.
//!
//! Everything here works at a finite horizon `m`. "Final segment of ℕ"
//! becomes "final segment of `0..=m`".

mod check;
mod extract;
mod structure;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Edge, Graph, Path, Vertex};

pub use check::{check_grain_line, check_prime_axioms, GrainLineReport, PrimeAxioms, Violation};
pub use extract::extract_grain_line;
pub use structure::{
    density_report, is_free, is_well_structured, is_wildly_presented, separation_at_vertex, DensityReport, GapReport,
    VertexSeparation,
};

#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "GrainLineRepr", into = "GrainLineRepr")]
pub struct GrainLine {
    x: Vertex,
    y: Vertex,
    order: Vec<Vertex>,
    paths: Vec<Path>,
    index: Index,
}

#[derive(Serialize, Deserialize)]
struct GrainLineRepr {
    x: Vertex,
    y: Vertex,
    #[serde(rename = "L")]
    order: Vec<Vertex>,
    paths: Vec<Path>,
}

impl TryFrom<GrainLineRepr> for GrainLine {
    type Error = Error;
    fn try_from(r: GrainLineRepr) -> Result<Self> {
        GrainLine::new(r.x, r.y, r.order, r.paths)
    }
}

impl From<GrainLine> for GrainLineRepr {
    fn from(g: GrainLine) -> Self {
        GrainLineRepr {
            x: g.x,
            y: g.y,
            order: g.order,
            paths: g.paths,
        }
    }
}

impl PartialEq for GrainLine {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y && self.order == other.order && self.paths == other.paths
    }
}

impl Eq for GrainLine {}

impl std::fmt::Debug for GrainLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GrainLine")
            .field("x", &self.x)
            .field("y", &self.y)
            .field("L", &self.order)
            .field("paths", &self.paths)
            .finish()
    }
}

#[derive(Clone, Debug, Default)]
struct Index {
    l_pos: HashMap<Vertex, usize>,
    vertex_depth: HashMap<Vertex, usize>,
    edge_depth: HashMap<Edge, usize>,
    path_pos: Vec<HashMap<Vertex, usize>>,
    occurrences: HashMap<Vertex, Vec<usize>>,
}

/// A 𝒫-segment `u P_d v`: `u`, `v` are consecutive in `≤_L` restricted to
/// `L_{<d}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub depth: usize,
    pub u: Vertex,
    pub v: Vertex,
    pub path: Path,
}

impl GrainLine {
    /// Builds a candidate grain line. Only shape is checked here (no repeated
    /// `L` entries, at least one path); the axioms are left to
    /// [`check_grain_line`], so invalid candidates can still be inspected.
    pub fn new(x: Vertex, y: Vertex, order: Vec<Vertex>, paths: Vec<Path>) -> Result<Self> {
        if x == y {
            return Err(Error::SameEndpoints(x));
        }
        if paths.is_empty() {
            return Err(invalid("a grain line needs at least one path"));
        }
        let mut l_pos = HashMap::new();
        for (i, v) in order.iter().enumerate() {
            if l_pos.insert(v.clone(), i).is_some() {
                return Err(invalid(format!("`{v}` listed twice in L")));
            }
        }
        let mut vertex_depth = HashMap::new();
        let mut edge_depth = HashMap::new();
        let mut occurrences: HashMap<Vertex, Vec<usize>> = HashMap::new();
        let mut path_pos = Vec::with_capacity(paths.len());
        for (n, p) in paths.iter().enumerate() {
            for v in p.vertices() {
                vertex_depth.entry(v.clone()).or_insert(n);
                occurrences.entry(v.clone()).or_default().push(n);
            }
            for e in p.edges() {
                edge_depth.entry(e).or_insert(n);
            }
            path_pos.push(p.positions());
        }
        let index = Index {
            l_pos,
            vertex_depth,
            edge_depth,
            path_pos,
            occurrences,
        };
        Ok(GrainLine {
            x,
            y,
            order,
            paths,
            index,
        })
    }

    pub fn x(&self) -> &Vertex {
        &self.x
    }

    pub fn y(&self) -> &Vertex {
        &self.y
    }

    /// `L` listed in `≤_L` order.
    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn path(&self, n: usize) -> &Path {
        &self.paths[n]
    }

    /// Index `m` of the last path.
    pub fn horizon(&self) -> usize {
        self.paths.len() - 1
    }

    /// The graph `⋃𝒫` defined by the grain line.
    pub fn host(&self) -> Graph {
        let mut g = Graph::new();
        for p in &self.paths {
            for v in p.vertices() {
                g.add_vertex(v.clone());
            }
            for e in p.edges() {
                g.insert_edge(e);
            }
        }
        g
    }

    pub fn in_l(&self, v: &Vertex) -> bool {
        self.index.l_pos.contains_key(v)
    }

    /// Position of `v` in `≤_L`.
    pub fn l_position(&self, v: &Vertex) -> Option<usize> {
        self.index.l_pos.get(v).copied()
    }

    /// `u <_L v`; `None` if either is outside `L`.
    pub fn l_less(&self, u: &Vertex, v: &Vertex) -> Option<bool> {
        Some(self.l_position(u)? < self.l_position(v)?)
    }

    pub fn on_path(&self, n: usize, v: &Vertex) -> bool {
        self.index.path_pos[n].contains_key(v)
    }

    pub fn position_on_path(&self, n: usize, v: &Vertex) -> Option<usize> {
        self.index.path_pos[n].get(v).copied()
    }

    /// Indices of the paths through `v`, ascending.
    pub fn occurrences(&self, v: &Vertex) -> &[usize] {
        self.index.occurrences.get(v).map_or(&[], Vec::as_slice)
    }

    /// 𝒫-depth of a vertex: the first path containing it.
    pub fn vertex_depth(&self, v: &Vertex) -> Result<usize> {
        self.index
            .vertex_depth
            .get(v)
            .copied()
            .ok_or_else(|| invalid(format!("`{v}` lies on no path")))
    }

    /// 𝒫-depth of an edge: the first path using it.
    pub fn edge_depth(&self, e: &Edge) -> Result<usize> {
        self.index
            .edge_depth
            .get(e)
            .copied()
            .ok_or_else(|| invalid(format!("edge {e} lies on no path")))
    }

    /// `L_{<n}` in `≤_L` order.
    pub fn l_below(&self, n: usize) -> Vec<Vertex> {
        self.order
            .iter()
            .filter(|v| self.index.vertex_depth.get(*v).is_some_and(|&d| d < n))
            .cloned()
            .collect()
    }

    /// The 𝒫-segments in depth `d`, in `≤_L` order of their first endpoint.
    pub fn p_segments(&self, d: usize) -> Result<Vec<Segment>> {
        if d == 0 || d > self.horizon() {
            return Err(invalid(format!("segment depth {d} outside 1..={}", self.horizon())));
        }
        let below = self.l_below(d);
        let mut out = Vec::new();
        for w in below.windows(2) {
            let (u, v) = (&w[0], &w[1]);
            let (Some(i), Some(j)) = (self.position_on_path(d, u), self.position_on_path(d, v)) else {
                return Err(invalid(format!(
                    "`{u}` or `{v}` missing from P_{d}; the grain line violates its axioms"
                )));
            };
            out.push(Segment {
                depth: d,
                u: u.clone(),
                v: v.clone(),
                path: self.paths[d].slice(i, j),
            });
        }
        Ok(out)
    }

    /// The grain line on the chosen paths (ascending indices) with `L`
    /// restricted to vertices on those paths.
    pub fn subsequence(&self, indices: &[usize]) -> Result<GrainLine> {
        if indices.is_empty() {
            return Err(invalid("empty subsequence"));
        }
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(invalid("subsequence indices must increase"));
            }
        }
        if let Some(&bad) = indices.iter().find(|&&i| i > self.horizon()) {
            return Err(invalid(format!("path index {bad} beyond horizon {}", self.horizon())));
        }
        let paths: Vec<Path> = indices.iter().map(|&i| self.paths[i].clone()).collect();
        let order = self
            .order
            .iter()
            .filter(|v| indices.iter().any(|&i| self.on_path(i, v)))
            .cloned()
            .collect();
        GrainLine::new(self.x.clone(), self.y.clone(), order, paths)
    }

    /// Same grain line read from `y` to `x`.
    pub fn reversed(&self) -> GrainLine {
        let mut order = self.order.clone();
        order.reverse();
        let paths = self.paths.iter().map(Path::reversed).collect();
        GrainLine::new(self.y.clone(), self.x.clone(), order, paths).expect("reversal keeps shape")
    }

    /// Edges of depth at most `d`, ascending.
    pub fn edges_up_to_depth(&self, d: usize) -> BTreeSet<Edge> {
        self.index
            .edge_depth
            .iter()
            .filter(|(_, &k)| k <= d)
            .map(|(e, _)| e.clone())
            .collect()
    }

    /// Depth of every vertex on some path, keyed by vertex.
    pub fn vertex_depths(&self) -> BTreeMap<Vertex, usize> {
        self.index.vertex_depth.iter().map(|(v, &d)| (v.clone(), d)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_paths() -> GrainLine {
        GrainLine::new(
            "x".into(),
            "y".into(),
            vec!["x".into(), "y".into()],
            vec![Path::from_names(&["x", "a", "y"]), Path::from_names(&["x", "b", "y"])],
        )
        .unwrap()
    }

    #[test]
    fn depths() {
        let gl = two_paths();
        assert_eq!(gl.vertex_depth(&"x".into()).unwrap(), 0);
        assert_eq!(gl.vertex_depth(&"b".into()).unwrap(), 1);
        assert_eq!(gl.edge_depth(&Edge::new("b", "y")).unwrap(), 1);
        assert!(gl.vertex_depth(&"q".into()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let gl = two_paths();
        let s = serde_json::to_string(&gl).unwrap();
        assert_eq!(
            s,
            r#"{"x":"x","y":"y","L":["x","y"],"paths":[["x","a","y"],["x","b","y"]]}"#
        );
        let back: GrainLine = serde_json::from_str(&s).unwrap();
        assert_eq!(back, gl);
    }

    #[test]
    fn single_segment_at_depth_one() {
        let gl = two_paths();
        let segs = gl.p_segments(1).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].path, Path::from_names(&["x", "b", "y"]));
        assert!(gl.p_segments(0).is_err());
    }
}
