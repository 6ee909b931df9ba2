use std::collections::BTreeSet;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use super::{edge_blocks, small_cut, CompoundSeparation, OrientedSeparation};
use crate::error::Result;
use crate::graph::{Graph, Indexed, Vertex};

/// Some orientations of the two separations are comparable.
pub fn nested(s1: &CompoundSeparation, s2: &CompoundSeparation) -> bool {
    let (p, q) = (s1.oriented(), s2.oriented());
    p.le(&q) || p.le(&q.reversed()) || p.reversed().le(&q) || p.reversed().le(&q.reversed())
}

/// An orientation `σ` with `σ(s) ≤ σ(t)*` for all distinct members, where
/// `*` swaps the sides; found by 2-SAT over the two choices per member.
pub fn star_orientation(seps: &[CompoundSeparation]) -> Option<Vec<OrientedSeparation>> {
    let n = seps.len();
    // Literal 2i: member i keeps (A, B); literal 2i + 1: it is flipped.
    let orient = |i: usize, flip: bool| {
        let o = seps[i].oriented();
        if flip {
            o.reversed()
        } else {
            o
        }
    };
    let mut imp = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..2 * n).map(|_| imp.add_node(())).collect();
    for i in 0..n {
        for j in i + 1..n {
            for fi in [false, true] {
                for fj in [false, true] {
                    if orient(i, fi).le(&orient(j, fj).reversed()) {
                        continue;
                    }
                    // Not both: fi ⇒ ¬fj and fj ⇒ ¬fi.
                    let li = 2 * i + usize::from(fi);
                    let lj = 2 * j + usize::from(fj);
                    imp.add_edge(nodes[li], nodes[lj ^ 1], ());
                    imp.add_edge(nodes[lj], nodes[li ^ 1], ());
                }
            }
        }
    }
    let mut comp = vec![0; 2 * n];
    // Components come out in reverse topological order.
    for (k, scc) in tarjan_scc(&imp).into_iter().enumerate() {
        for node in scc {
            comp[node.index()] = k;
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if comp[2 * i] == comp[2 * i + 1] {
            return None;
        }
        let flip = comp[2 * i + 1] < comp[2 * i];
        out.push(orient(i, flip));
    }
    Some(out)
}

/// One unitary separation `{X ∪ {w}, V ∖ X}` per edge-block `X` of `G − w`
/// at threshold `c`. Empty when `G − w` has fewer than two blocks.
pub fn faithful_set(g: &Graph, w: &Vertex, c: usize) -> Result<Vec<CompoundSeparation>> {
    g.require_vertex(w)?;
    let rest = g.without_vertices([w]);
    let blocks = edge_blocks(&rest, c);
    if blocks.len() < 2 || g.degree(w) == 0 {
        return Ok(Vec::new());
    }
    let all = g.vertex_set();
    blocks
        .into_iter()
        .map(|x| {
            let mut a = x.clone();
            a.insert(w.clone());
            let b: BTreeSet<Vertex> = all.difference(&x).cloned().collect();
            CompoundSeparation::new(g, a, b)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaithfulReport {
    pub nested: bool,
    pub star: bool,
    /// Pairs that some unitary separation at `w` with at most `f` cross
    /// edges splits but no member does.
    pub unsplit: Vec<(Vertex, Vertex)>,
}

impl FaithfulReport {
    pub fn is_faithful(&self) -> bool {
        self.nested && self.star && self.unsplit.is_empty()
    }
}

/// Checks nestedness, the star property and, exhaustively over pairs, that
/// the members split everything a unitary separation at `w` with at most
/// `f` cross edges can split.
pub fn check_faithful(g: &Graph, w: &Vertex, seps: &[CompoundSeparation], f: usize) -> Result<FaithfulReport> {
    g.require_vertex(w)?;
    let nested_all = seps
        .iter()
        .enumerate()
        .all(|(i, s)| seps[i + 1..].iter().all(|t| nested(s, t)));
    let star = star_orientation(seps).is_some();
    let idx = Indexed::new(g);
    let wi = idx.index(w).unwrap();
    let mut blocked = vec![false; idx.len()];
    blocked[wi] = true;
    let mut unsplit = Vec::new();
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if a == wi || b == wi {
                continue;
            }
            if small_cut(&idx, &blocked, a, b, f).is_none() {
                continue;
            }
            let (u, v) = (idx.name(a), idx.name(b));
            if !seps.iter().any(|s| s.separates(u, v)) {
                unsplit.push((u.clone(), v.clone()));
            }
        }
    }
    Ok(FaithfulReport {
        nested: nested_all,
        star,
        unsplit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::halved_farey;
    use crate::immersion::complete_pattern;

    fn bowtie() -> Graph {
        Graph::from_edges([("w", "a"), ("a", "b"), ("b", "w"), ("w", "c"), ("c", "d"), ("d", "w")]).unwrap()
    }

    #[test]
    fn bowtie_star() {
        let g = bowtie();
        // G − w is two disjoint edges: two blocks at threshold 1, four at 2.
        assert_eq!(faithful_set(&g, &"w".into(), 2).unwrap().len(), 4);
        let seps = faithful_set(&g, &"w".into(), 1).unwrap();
        assert_eq!(seps.len(), 2);
        assert!(nested(&seps[0], &seps[1]));
        assert!(star_orientation(&seps).is_some());
        let r = check_faithful(&g, &"w".into(), &seps, 0).unwrap();
        assert!(r.is_faithful(), "{r:?}");
    }

    #[test]
    fn crossing_in_four_cycle() {
        let g = Graph::from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]).unwrap();
        let set = |xs: &[&str]| xs.iter().map(|s| Vertex::new(*s)).collect::<BTreeSet<_>>();
        let s1 = CompoundSeparation::new(&g, set(&["a", "b"]), set(&["c", "d"])).unwrap();
        let s2 = CompoundSeparation::new(&g, set(&["a", "d"]), set(&["b", "c"])).unwrap();
        assert!(!nested(&s1, &s2));
        assert!(star_orientation(std::slice::from_ref(&s1)).is_some());
        assert!(star_orientation(&[s1, s2]).is_none());
    }

    #[test]
    fn complete_graph_has_no_faithful_members() {
        assert!(faithful_set(&complete_pattern(4), &"0".into(), 2).unwrap().is_empty());
    }

    #[test]
    fn apex_blocks_stay_in_their_interval() {
        let g = halved_farey(3);
        let w = Vertex::new("1/0/1");
        let seps = faithful_set(g.graph(), &w, 2).unwrap();
        assert!(seps.len() >= 2);
        let pos = |v: &Vertex| g.order().iter().position(|u| u == v).unwrap();
        let pw = pos(&w);
        for s in &seps {
            let block = s.a_only();
            let left = block.iter().all(|v| pos(v) < pw);
            let right = block.iter().all(|v| pos(v) > pw);
            assert!(left || right, "block {block:?} straddles the apex");
        }
        assert!(star_orientation(&seps).is_some());
    }
}
