//! Finite truncations of the halved Farey graph, the Farey graph and the
//! generalised halved Farey graphs `F̆(ℓ)`.
//!
//! Vertex names: the level-0 path runs `x, 0/1, …, 0/(ℓ(0)−1), y`; the path
//! replacing the `j`-th blue edge of `P_{k−1}` (counting from `x`, from 0)
//! has inner vertices `k/j/1, …, k/j/(ℓ(k)−1)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grainline::GrainLine;
use crate::graph::{Edge, Graph, Path, Vertex};

/// Path lengths `ℓ(0), …, ℓ(n)` with `ℓ(0) ≥ 1` and `ℓ(k) ≥ 2` for `k ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct LengthFunction(Vec<usize>);

impl LengthFunction {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        match values.first() {
            None => return Err(invalid("length function needs ℓ(0)")),
            Some(0) => return Err(invalid("ℓ(0) must be at least 1")),
            _ => {}
        }
        if let Some((k, l)) = values.iter().enumerate().skip(1).find(|(_, &l)| l < 2) {
            return Err(invalid(format!(
                "ℓ({k}) = {l}, but levels above 0 need length at least 2"
            )));
        }
        Ok(LengthFunction(values))
    }

    /// `(1, 2, 2, …, 2)` up to `order`: the halved Farey graph.
    pub fn halved(order: usize) -> Self {
        let mut v = vec![2; order + 1];
        v[0] = 1;
        LengthFunction(v)
    }

    pub fn get(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// Largest level the function is defined on.
    pub fn max_order(&self) -> usize {
        self.0.len() - 1
    }

    /// `∏_{i ≤ k} ℓ(i)`, the length of `P_k`.
    pub fn path_length(&self, k: usize) -> usize {
        self.0[..=k].iter().product()
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }
}

impl TryFrom<Vec<usize>> for LengthFunction {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        LengthFunction::new(v)
    }
}

impl From<LengthFunction> for Vec<usize> {
    fn from(l: LengthFunction) -> Self {
        l.0
    }
}

impl FromStr for LengthFunction {
    type Err = Error;
    /// Parses `"1,2,3"`.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| invalid(format!("bad length `{t}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        LengthFunction::new(values)
    }
}

impl fmt::Display for LengthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// A generalised halved Farey graph with its construction record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeveledFareyGraph {
    graph: Graph,
    x: Vertex,
    y: Vertex,
    lengths: LengthFunction,
    vertex_level: BTreeMap<Vertex, usize>,
    edge_level: BTreeMap<Edge, usize>,
    order: Vec<Vertex>,
    paths: Vec<Path>,
}

/// The construction record written next to a generated graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub levels: Levels,
    pub order: Vec<Vertex>,
    pub paths: Vec<Path>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Levels {
    pub vertices: BTreeMap<Vertex, usize>,
    /// `[a, b, level]`
    pub edges: Vec<(Vertex, Vertex, usize)>,
}

impl LeveledFareyGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn x(&self) -> &Vertex {
        &self.x
    }

    pub fn y(&self) -> &Vertex {
        &self.y
    }

    pub fn lengths(&self) -> &LengthFunction {
        &self.lengths
    }

    /// Number of construction steps `n`.
    pub fn order_n(&self) -> usize {
        self.paths.len() - 1
    }

    pub fn vertex_level(&self, v: &Vertex) -> Option<usize> {
        self.vertex_level.get(v).copied()
    }

    pub fn edge_level(&self, e: &Edge) -> Option<usize> {
        self.edge_level.get(e).copied()
    }

    pub fn edge_levels(&self) -> &BTreeMap<Edge, usize> {
        &self.edge_level
    }

    pub fn vertex_levels(&self) -> &BTreeMap<Vertex, usize> {
        &self.vertex_level
    }

    /// Blue edges of the top level; all others are black.
    pub fn blue(&self) -> BTreeSet<Edge> {
        let top = self.order_n();
        self.edge_level
            .iter()
            .filter(|(_, &k)| k == top)
            .map(|(e, _)| e.clone())
            .collect()
    }

    /// `≤_L`: every vertex in the order of the last blue path.
    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    /// The grain line `(L = V, ≤_L, P_0, …, P_n)`.
    pub fn grain_line(&self) -> GrainLine {
        GrainLine::new(self.x.clone(), self.y.clone(), self.order.clone(), self.paths.clone())
            .expect("generator output has grain-line shape")
    }

    pub fn metadata(&self) -> Metadata {
        Metadata {
            levels: Levels {
                vertices: self.vertex_level.clone(),
                edges: self
                    .edge_level
                    .iter()
                    .map(|(e, &k)| (e.low().clone(), e.high().clone(), k))
                    .collect(),
            },
            order: self.order.clone(),
            paths: self.paths.clone(),
        }
    }

    /// Checks the outerplanarity certificate: `≤_L` placed on a circle
    /// with every edge drawn as a chord gives no crossing.
    pub fn outerplanar_certificate(&self) -> bool {
        is_outerplanar_layout(&self.graph, &self.order)
    }
}

/// `F̆(ℓ)` truncated after `n` steps.
pub fn generalised_halved_farey(lengths: &LengthFunction, n: usize) -> Result<LeveledFareyGraph> {
    if lengths.max_order() < n {
        return Err(invalid(format!(
            "length function defined up to {} but order {n} requested",
            lengths.max_order()
        )));
    }
    let x = Vertex::new("x");
    let y = Vertex::new("y");
    let mut graph = Graph::new();
    let mut vertex_level = BTreeMap::new();
    let mut edge_level = BTreeMap::new();
    let mut paths = Vec::with_capacity(n + 1);

    let mut p0 = vec![x.clone()];
    p0.extend((1..lengths.get(0)).map(|i| Vertex::new(format!("0/{i}"))));
    p0.push(y.clone());
    paths.push(p0);

    for k in 1..=n {
        let prev = &paths[k - 1];
        let mut next = Vec::with_capacity((prev.len() - 1) * lengths.get(k) + 1);
        for (j, w) in prev.windows(2).enumerate() {
            next.push(w[0].clone());
            next.extend((1..lengths.get(k)).map(|i| Vertex::new(format!("{k}/{j}/{i}"))));
        }
        next.push(y.clone());
        paths.push(next);
    }

    for (k, p) in paths.iter().enumerate() {
        for v in p {
            if graph.add_vertex(v.clone()) {
                vertex_level.insert(v.clone(), k);
            }
        }
        for w in p.windows(2) {
            let e = Edge::new(w[0].clone(), w[1].clone());
            graph.insert_edge(e.clone());
            edge_level.insert(e, k);
        }
    }

    let paths: Vec<Path> = paths.into_iter().map(Path::from_vec_unchecked).collect();
    Ok(LeveledFareyGraph {
        graph,
        x,
        y,
        lengths: lengths.clone(),
        vertex_level,
        edge_level,
        order: paths[n].vertices().to_vec(),
        paths,
    })
}

/// The halved Farey graph `F̆_n`.
pub fn halved_farey(n: usize) -> LeveledFareyGraph {
    generalised_halved_farey(&LengthFunction::halved(n), n).expect("halved lengths are valid")
}

/// The Farey graph `F_n` with a cyclic order certifying outerplanarity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FareyGraph {
    pub graph: Graph,
    /// `x`, the first copy's inner vertices in `≤_L` order, `y`, then the
    /// second copy's inner vertices in reverse.
    pub cyclic_order: Vec<Vertex>,
}

/// Two copies of `F̆_n` glued along `F̆_0` (the edge `xy`). Inner vertices of
/// the copies are prefixed `a:` and `b:`.
pub fn farey_with_order(n: usize) -> FareyGraph {
    let half = halved_farey(n);
    let rename = |prefix: &str, v: &Vertex| {
        if v == half.x() || v == half.y() {
            v.clone()
        } else {
            Vertex::new(format!("{prefix}:{v}"))
        }
    };
    let mut graph = Graph::new();
    for prefix in ["a", "b"] {
        for v in half.graph().vertices() {
            graph.add_vertex(rename(prefix, v));
        }
        for e in half.graph().edges() {
            graph.insert_edge(Edge::new(rename(prefix, e.low()), rename(prefix, e.high())));
        }
    }
    let inner = &half.order()[1..half.order().len() - 1];
    let mut cyclic_order = vec![half.x().clone()];
    cyclic_order.extend(inner.iter().map(|v| rename("a", v)));
    cyclic_order.push(half.y().clone());
    cyclic_order.extend(inner.iter().rev().map(|v| rename("b", v)));
    FareyGraph { graph, cyclic_order }
}

pub fn farey(n: usize) -> Graph {
    farey_with_order(n).graph
}

/// The blue Hamilton paths `P_0, …, P_n` recorded by the generator.
pub fn blue_hamilton_paths(g: &LeveledFareyGraph) -> Result<Vec<Path>> {
    if g.paths.is_empty() {
        return Err(invalid("graph carries no path metadata"));
    }
    Ok(g.paths.clone())
}

/// `ℓ(k) = 1 + max len(Q_j^(i))` over `0 ≤ i, j ≤ 2k` (families beyond the
/// list are ignored), for `k = 0..=horizon`.
pub fn adversarial_length_function(families: &[GrainLine], horizon: usize) -> Result<LengthFunction> {
    if families.is_empty() {
        return Err(invalid("no grain-line families given"));
    }
    let needed = 2 * horizon + 1;
    for (i, f) in families.iter().enumerate() {
        if f.paths().len() < needed {
            return Err(invalid(format!(
                "family {i} has {} paths; horizon {horizon} needs {needed}",
                f.paths().len()
            )));
        }
    }
    let mut values = Vec::with_capacity(horizon + 1);
    for k in 0..=horizon {
        let longest = families
            .iter()
            .take(2 * k + 1)
            .flat_map(|f| f.paths()[..=2 * k].iter().map(Path::len))
            .max()
            .unwrap_or(0);
        values.push(1 + longest);
    }
    if values.len() > 1 {
        values[1] = values[1].max(2);
    }
    LengthFunction::new(values)
}

/// `circle` lists every vertex once; edges as chords of the circle must
/// pairwise not cross (touching at an endpoint is fine).
pub fn is_outerplanar_layout(g: &Graph, circle: &[Vertex]) -> bool {
    let pos: BTreeMap<&Vertex, usize> = circle.iter().enumerate().map(|(i, v)| (v, i)).collect();
    if pos.len() != circle.len() || pos.len() != g.vertex_count() || !g.vertices().all(|v| pos.contains_key(v)) {
        return false;
    }
    let mut chords: Vec<(usize, usize)> = g
        .edges()
        .map(|e| {
            let (a, b) = (pos[e.low()], pos[e.high()]);
            (a.min(b), a.max(b))
        })
        .collect();
    // Nested-or-disjoint intervals: scan by left end, longer chords first.
    chords.sort_by(|p, q| p.0.cmp(&q.0).then(q.1.cmp(&p.1)));
    let mut stack: Vec<usize> = Vec::new();
    for (a, b) in chords {
        while stack.last().is_some_and(|&end| end <= a) {
            stack.pop();
        }
        if stack.last().is_some_and(|&end| end < b) {
            return false;
        }
        stack.push(b);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_halved_farey() {
        let f0 = halved_farey(0);
        assert_eq!((f0.graph().vertex_count(), f0.graph().edge_count()), (2, 1));
        let f1 = halved_farey(1);
        assert_eq!((f1.graph().vertex_count(), f1.graph().edge_count()), (3, 3));
        let f3 = halved_farey(3);
        assert_eq!((f3.graph().vertex_count(), f3.graph().edge_count()), (9, 15));
    }

    #[test]
    fn small_farey() {
        assert_eq!(farey(0).edge_count(), 1);
        let f1 = farey(1);
        assert_eq!((f1.vertex_count(), f1.edge_count()), (4, 5));
        let f2 = farey(2);
        assert_eq!((f2.vertex_count(), f2.edge_count()), (8, 13));
        assert!(is_outerplanar_layout(&f2, &farey_with_order(2).cyclic_order));
    }

    #[test]
    fn length_function_validation() {
        assert!(LengthFunction::new(vec![0]).is_err());
        assert!(LengthFunction::new(vec![1, 1]).is_err());
        assert!("1,2,3".parse::<LengthFunction>().is_ok());
        assert!("1,x".parse::<LengthFunction>().is_err());
    }

    #[test]
    fn growing_lengths() {
        let l: LengthFunction = "1,2,3".parse().unwrap();
        let g = generalised_halved_farey(&l, 2).unwrap();
        assert_eq!((g.graph().vertex_count(), g.graph().edge_count()), (7, 9));
        let lens: Vec<usize> = g.paths().iter().map(Path::len).collect();
        assert_eq!(lens, vec![1, 2, 6]);
        assert!(g.outerplanar_certificate());
    }

    #[test]
    fn crossing_chords_detected() {
        let c4 = Graph::from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("a", "c"), ("b", "d")]).unwrap();
        let circle: Vec<Vertex> = ["a", "b", "c", "d"].iter().map(|s| Vertex::new(*s)).collect();
        assert!(!is_outerplanar_layout(&c4, &circle));
    }

    #[test]
    fn adversarial_examples() {
        assert!(adversarial_length_function(&[], 1).is_err());
    }
}
