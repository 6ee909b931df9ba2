//! Compound-separations with explicit budgets: a separator of at most `s`
//! vertices and at most `f` edges running between the two strict sides.
//! Edge-blocks use a threshold `c` in place of "not separable by finitely
//! many edges".

mod blocks;
mod clique;
mod fan;
mod nested;
mod peel;

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::flow::FlowNetwork;
use crate::graph::{Edge, Graph, Indexed, Vertex};

pub use blocks::{edge_blocks, tree_cut_decomposition, TreeCutDecomposition};
pub(crate) use blocks::{CutTree, UnionFind};
pub use clique::{complete_immersion_from_blocks, CliqueOutcome};
pub use fan::{separates_minimally, u_to_separator_fan, FanReport};
pub use nested::{check_faithful, faithful_set, nested, star_orientation, FaithfulReport};
pub use peel::{iterated_split, PeelReport, PeelStep};

/// A proper separation `{A, B}` of the vertex set, stored with the sides in
/// the order given; the cross edges are those between `A∖B` and `B∖A`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CompoundSeparation {
    a: BTreeSet<Vertex>,
    b: BTreeSet<Vertex>,
    separator: BTreeSet<Vertex>,
    cross: BTreeSet<Edge>,
}

impl CompoundSeparation {
    /// Validates `A ∪ B = V(G)` and properness, and computes the cross edges.
    pub fn new(g: &Graph, a: BTreeSet<Vertex>, b: BTreeSet<Vertex>) -> Result<Self> {
        for v in a.iter().chain(&b) {
            g.require_vertex(v)?;
        }
        if a.union(&b).count() != g.vertex_count() {
            return Err(invalid("the sides do not cover every vertex"));
        }
        let only_a: BTreeSet<Vertex> = a.difference(&b).cloned().collect();
        let only_b: BTreeSet<Vertex> = b.difference(&a).cloned().collect();
        if only_a.is_empty() || only_b.is_empty() {
            return Err(invalid("separation is not proper"));
        }
        let separator = a.intersection(&b).cloned().collect();
        let cross = g.edges_between(&only_a, &only_b);
        Ok(CompoundSeparation { a, b, separator, cross })
    }

    pub fn a(&self) -> &BTreeSet<Vertex> {
        &self.a
    }

    pub fn b(&self) -> &BTreeSet<Vertex> {
        &self.b
    }

    pub fn separator(&self) -> &BTreeSet<Vertex> {
        &self.separator
    }

    pub fn cross(&self) -> &BTreeSet<Edge> {
        &self.cross
    }

    pub fn order(&self) -> usize {
        self.separator.len()
    }

    pub fn is_unitary(&self) -> bool {
        self.separator.len() == 1
    }

    /// The separator vertex of a unitary separation.
    pub fn unitary_vertex(&self) -> Option<&Vertex> {
        if self.is_unitary() {
            self.separator.iter().next()
        } else {
            None
        }
    }

    pub fn a_only(&self) -> BTreeSet<Vertex> {
        self.a.difference(&self.b).cloned().collect()
    }

    pub fn b_only(&self) -> BTreeSet<Vertex> {
        self.b.difference(&self.a).cloned().collect()
    }

    /// `u` and `v` lie strictly on opposite sides.
    pub fn separates(&self, u: &Vertex, v: &Vertex) -> bool {
        let strictly =
            |side: &BTreeSet<Vertex>, other: &BTreeSet<Vertex>, w: &Vertex| side.contains(w) && !other.contains(w);
        (strictly(&self.a, &self.b, u) && strictly(&self.b, &self.a, v))
            || (strictly(&self.b, &self.a, u) && strictly(&self.a, &self.b, v))
    }

    /// Re-derives the separation from `g`; fails if the stored data disagree.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let fresh = CompoundSeparation::new(g, self.a.clone(), self.b.clone())?;
        if &fresh != self {
            return Err(invalid("separator or cross edges do not match the graph"));
        }
        Ok(())
    }

    /// `(A, B)`
    pub fn oriented(&self) -> OrientedSeparation {
        OrientedSeparation {
            a: self.a.clone(),
            b: self.b.clone(),
        }
    }

    /// The same separation with its sides swapped.
    pub fn flipped(&self) -> CompoundSeparation {
        CompoundSeparation {
            a: self.b.clone(),
            b: self.a.clone(),
            separator: self.separator.clone(),
            cross: self.cross.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrientedSeparation {
    pub a: BTreeSet<Vertex>,
    pub b: BTreeSet<Vertex>,
}

impl OrientedSeparation {
    /// `(A, B) ≤ (C, D)` iff `A ⊆ C` and `B ⊇ D`.
    pub fn le(&self, other: &OrientedSeparation) -> bool {
        self.a.is_subset(&other.a) && self.b.is_superset(&other.b)
    }

    pub fn reversed(&self) -> OrientedSeparation {
        OrientedSeparation {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }
}

/// Minimum `s`–`t` edge cut in `g` minus `blocked`, provided it has at most
/// `f` edges; returns the residual-reachable side of `s`.
pub(crate) fn small_cut(idx: &Indexed, blocked: &[bool], s: usize, t: usize, f: usize) -> Option<Vec<bool>> {
    let mut net = FlowNetwork::from_indexed(idx, blocked, |_, _| false);
    let flow = net.max_flow(s, t, f as i64 + 1) as usize;
    (flow <= f).then(|| net.residual_reachable(s))
}

/// A separation of `u` and `v` with at most `s` separator vertices and at
/// most `f` cross edges. Separators are tried by size, then
/// lexicographically; `None` means no such separation exists.
pub fn find_compound_separation(
    g: &Graph,
    u: &Vertex,
    v: &Vertex,
    s: usize,
    f: usize,
) -> Result<Option<CompoundSeparation>> {
    g.require_vertex(u)?;
    g.require_vertex(v)?;
    if u == v {
        return Err(Error::SameEndpoints(u.clone()));
    }
    let idx = Indexed::new(g);
    let (ui, vi) = (idx.index(u).unwrap(), idx.index(v).unwrap());
    let others: Vec<usize> = (0..idx.len()).filter(|&i| i != ui && i != vi).collect();
    for k in 0..=s.min(others.len()) {
        for sep in others.iter().copied().combinations(k) {
            let mut blocked = vec![false; idx.len()];
            for &w in &sep {
                blocked[w] = true;
            }
            if let Some(side) = small_cut(&idx, &blocked, ui, vi, f) {
                let x: BTreeSet<Vertex> = (0..idx.len())
                    .filter(|&i| side[i] && !blocked[i])
                    .map(|i| idx.name(i).clone())
                    .collect();
                let sep_set: BTreeSet<Vertex> = sep.iter().map(|&i| idx.name(i).clone()).collect();
                let a: BTreeSet<Vertex> = x.union(&sep_set).cloned().collect();
                let b: BTreeSet<Vertex> = g.vertex_set().difference(&x).cloned().collect();
                return CompoundSeparation::new(g, a, b).map(Some);
            }
        }
    }
    Ok(None)
}

/// No two vertices are separated by a separation of order below `k` with at
/// most `f` cross edges.
pub fn is_k_compound_connected(g: &Graph, k: usize, f: usize) -> bool {
    let vertices: Vec<Vertex> = g.vertices().cloned().collect();
    for size in 0..k.min(vertices.len() + 1) {
        for sep in vertices.iter().combinations(size) {
            let rest = g.without_vertices(sep.iter().copied());
            if rest.vertex_count() >= 2 && edge_blocks(&rest, f + 1).len() > 1 {
                return false;
            }
        }
    }
    true
}

/// Both sides of a split, with the least local edge-connectivity between
/// two vertices of each side (`None` for a single vertex).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitReport {
    pub a: Graph,
    pub b: Graph,
    pub min_lambda_a: Option<usize>,
    pub min_lambda_b: Option<usize>,
}

pub fn split(g: &Graph, sep: &CompoundSeparation) -> Result<SplitReport> {
    sep.validate(g)?;
    let a = g.induced_subgraph(sep.a())?;
    let b = g.induced_subgraph(sep.b())?;
    Ok(SplitReport {
        min_lambda_a: min_pairwise_lambda(&a),
        min_lambda_b: min_pairwise_lambda(&b),
        a,
        b,
    })
}

/// Least local edge-connectivity over all pairs, read off the cut tree.
pub fn min_pairwise_lambda(g: &Graph) -> Option<usize> {
    if g.vertex_count() < 2 {
        return None;
    }
    let tree = CutTree::new(g);
    tree.edges().map(|(_, _, w)| w).min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::halved_farey;
    use crate::immersion::complete_pattern;

    fn bridged() -> Graph {
        Graph::from_edges([
            ("a", "b"),
            ("b", "c"),
            ("a", "c"),
            ("c", "d"),
            ("d", "e"),
            ("e", "f"),
            ("d", "f"),
        ])
        .unwrap()
    }

    #[test]
    fn apex_separates_ends() {
        let g = halved_farey(3).graph().clone();
        let sep = find_compound_separation(&g, &"x".into(), &"y".into(), 1, 3)
            .unwrap()
            .unwrap();
        assert_eq!(sep.separator().iter().next().unwrap().as_str(), "1/0/1");
        assert!(sep.cross().len() <= 3);
        sep.validate(&g).unwrap();
    }

    #[test]
    fn complete_graph_resists() {
        let k5 = complete_pattern(5);
        assert!(find_compound_separation(&k5, &"0".into(), &"1".into(), 1, 2)
            .unwrap()
            .is_none());
        let k2 = complete_pattern(2);
        assert!(find_compound_separation(&k2, &"0".into(), &"1".into(), 0, 0)
            .unwrap()
            .is_none());
    }

    #[test]
    fn compound_connectivity() {
        assert!(is_k_compound_connected(&complete_pattern(5), 2, 2));
        assert!(!is_k_compound_connected(&bridged(), 1, 1));
        assert!(!is_k_compound_connected(halved_farey(2).graph(), 2, 7));
    }

    #[test]
    fn split_at_bridge() {
        let g = bridged();
        let a: BTreeSet<Vertex> = ["a", "b", "c"].iter().map(|s| Vertex::new(*s)).collect();
        let b: BTreeSet<Vertex> = ["d", "e", "f"].iter().map(|s| Vertex::new(*s)).collect();
        let sep = CompoundSeparation::new(&g, a, b).unwrap();
        assert_eq!(sep.cross().len(), 1);
        let r = split(&g, &sep).unwrap();
        assert_eq!((r.min_lambda_a, r.min_lambda_b), (Some(2), Some(2)));
    }

    #[test]
    fn improper_rejected() {
        let g = bridged();
        let all = g.vertex_set();
        let one: BTreeSet<Vertex> = ["a"].iter().map(|s| Vertex::new(*s)).collect();
        assert!(CompoundSeparation::new(&g, all, one).is_err());
    }
}
