use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{CompoundSeparation, CutTree, UnionFind};
use crate::error::{invalid, Result};
use crate::graph::{Edge, Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelStep {
    pub separator: Vertex,
    /// Cross edges of the separation; they end up in neither piece.
    pub cross: BTreeSet<Edge>,
    /// `G_n`
    pub piece: Graph,
    /// `H_n`
    pub remainder: Graph,
    /// `G_0, …, G_n, H_n` are pairwise edge-disjoint.
    pub edge_disjoint: bool,
    /// `{V(G_n), V(H_n)}` is a compound-separation of `H_{n−1}`.
    pub separates_previous: bool,
    /// The vertex sets of `G_0, …, G_n` have a connected intersection graph.
    pub pieces_linked: bool,
}

impl PeelStep {
    pub fn holds(&self) -> bool {
        self.edge_disjoint && self.separates_previous && self.pieces_linked
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelReport {
    pub steps: Vec<PeelStep>,
    pub stopped_early: bool,
    pub reason: Option<String>,
}

impl PeelReport {
    pub fn holds(&self) -> bool {
        self.steps.iter().all(PeelStep::holds)
    }
}

/// Repeatedly peels a piece off the remainder `H` (initially `G`) along a
/// unitary compound-separation of `H` with at most `f` cross edges that
/// separates some pair minimally. The side kept as the piece meets the
/// previous piece; the first piece contains the least vertex of `G`.
pub fn iterated_split(g: &Graph, f: usize, steps: usize) -> Result<PeelReport> {
    if steps == 0 {
        return Err(invalid("steps must be at least 1"));
    }
    let mut previous: BTreeSet<Vertex> = g.vertices().take(1).cloned().collect();
    let mut h = g.clone();
    let mut pieces: Vec<Graph> = Vec::new();
    let mut out = Vec::new();
    for n in 0..steps {
        let Some(sep) = minimal_unitary_separation(&h, f) else {
            return Ok(PeelReport {
                steps: out,
                stopped_early: true,
                reason: Some(format!(
                    "step {n}: no unitary compound-separation with at most {f} cross edges separates a pair minimally"
                )),
            });
        };
        let sep = if sep.a().is_disjoint(&previous) {
            sep.flipped()
        } else {
            sep
        };
        let piece = h.induced_subgraph(sep.a())?;
        // A unitary separator spans no edges, so only the cross edges are lost.
        let remainder = h.induced_subgraph(sep.b())?;

        pieces.push(piece.clone());
        let edge_disjoint = pairwise_edge_disjoint(pieces.iter().chain(std::iter::once(&remainder)));
        let separates_previous = CompoundSeparation::new(&h, piece.vertex_set(), remainder.vertex_set())
            .is_ok_and(|s| s.is_unitary() && s.cross().len() <= f);
        let pieces_linked = intersection_graph_connected(&pieces);

        out.push(PeelStep {
            separator: sep.unitary_vertex().unwrap().clone(),
            cross: sep.cross().clone(),
            piece: piece.clone(),
            remainder: remainder.clone(),
            edge_disjoint,
            separates_previous,
            pieces_linked,
        });
        previous = piece.vertex_set();
        h = remainder;
    }
    Ok(PeelReport {
        steps: out,
        stopped_early: false,
        reason: None,
    })
}

/// For `w` in vertex order, the cuts of the cut tree of `H − w` by weight.
/// A cut of weight `k` gives a minimal separation iff some pair across it
/// has `λ_H > k`; if any separation at `w` qualifies, one of these cuts does.
fn minimal_unitary_separation(h: &Graph, f: usize) -> Option<CompoundSeparation> {
    if h.vertex_count() < 3 {
        return None;
    }
    let whole = CutTree::new(h);
    for w in h.vertices() {
        let rest = h.without_vertices([w]);
        let tree = CutTree::new(&rest);
        let mut cuts: Vec<(usize, usize, usize)> = tree.edges().filter(|&(_, _, k)| k <= f).collect();
        cuts.sort_by_key(|&(s, p, k)| (k, s, p));
        for (s, _, k) in cuts {
            let inside = tree.subtree(s);
            let x: BTreeSet<Vertex> = (0..tree.idx.len())
                .filter(|&i| inside[i])
                .map(|i| tree.idx.name(i).clone())
                .collect();
            let class = whole.classes(k + 1);
            let class_of = |v: &Vertex| class[whole.idx.index(v).unwrap()];
            let in_x: BTreeSet<usize> = x.iter().map(class_of).collect();
            let linked = rest
                .vertices()
                .filter(|v| !x.contains(*v))
                .any(|v| in_x.contains(&class_of(v)));
            if !linked {
                continue;
            }
            let mut a = x.clone();
            a.insert(w.clone());
            let b: BTreeSet<Vertex> = h.vertex_set().difference(&x).cloned().collect();
            if let Ok(sep) = CompoundSeparation::new(h, a, b) {
                return Some(sep);
            }
        }
    }
    None
}

fn pairwise_edge_disjoint<'a>(graphs: impl Iterator<Item = &'a Graph>) -> bool {
    let mut seen = BTreeSet::new();
    for g in graphs {
        for e in g.edges() {
            if !seen.insert(e) {
                return false;
            }
        }
    }
    true
}

fn intersection_graph_connected(pieces: &[Graph]) -> bool {
    let sets: Vec<BTreeSet<Vertex>> = pieces.iter().map(Graph::vertex_set).collect();
    let mut uf = UnionFind::new(sets.len());
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !sets[i].is_disjoint(&sets[j]) {
                uf.union(i, j);
            }
        }
    }
    (0..sets.len()).all(|i| uf.find(i) == uf.find(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::halved_farey;
    use crate::immersion::complete_pattern;

    #[test]
    fn halved_farey_peels_three_times() {
        let g = halved_farey(5).graph().clone();
        let r = iterated_split(&g, 16, 3).unwrap();
        assert!(!r.stopped_early, "{:?}", r.reason);
        assert_eq!(r.steps.len(), 3);
        assert!(r.holds());
    }

    #[test]
    fn complete_graph_does_not_peel() {
        let r = iterated_split(&complete_pattern(5), 2, 3).unwrap();
        assert!(r.stopped_early);
        assert!(r.steps.is_empty());
    }

    #[test]
    fn zero_steps_rejected() {
        assert!(iterated_split(&complete_pattern(3), 1, 0).is_err());
    }
}
