use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::flow::FlowNetwork;
use crate::graph::{Edge, Graph, Indexed, Vertex};

/// Gomory–Hu cut tree (Gusfield's construction): for every pair, the least
/// weight on the tree path equals their local edge-connectivity, and the two
/// sides of each tree edge form a minimum cut between its ends.
#[derive(Clone, Debug)]
pub(crate) struct CutTree {
    pub idx: Indexed,
    /// `parent[0]` is unused; vertex 0 is the root.
    pub parent: Vec<usize>,
    pub weight: Vec<usize>,
}

impl CutTree {
    pub fn new(g: &Graph) -> Self {
        let idx = Indexed::new(g);
        let n = idx.len();
        let mut parent = vec![0; n];
        let mut weight = vec![0; n];
        for s in 1..n {
            let t = parent[s];
            let mut net = FlowNetwork::from_indexed(&idx, &[], |_, _| false);
            let f = net.max_flow(s, t, i64::MAX) as usize;
            let side = net.residual_reachable(s);
            weight[s] = f;
            for i in 0..n {
                if i != s && side[i] && parent[i] == t {
                    parent[i] = s;
                }
            }
            if side[parent[t]] && t != 0 {
                parent[s] = parent[t];
                parent[t] = s;
                weight[s] = weight[t];
                weight[t] = f;
            }
        }
        CutTree { idx, parent, weight }
    }

    /// Tree edges `(child, parent, weight)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (1..self.idx.len()).map(|s| (s, self.parent[s], self.weight[s]))
    }

    /// Component ids after keeping only tree edges of weight at least `c`.
    pub fn classes(&self, c: usize) -> Vec<usize> {
        let n = self.idx.len();
        let mut uf = UnionFind::new(n);
        for (s, p, w) in self.edges() {
            if w >= c {
                uf.union(s, p);
            }
        }
        (0..n).map(|i| uf.find(i)).collect()
    }

    /// Vertex indices on `child`'s side of the tree edge to its parent.
    pub fn subtree(&self, child: usize) -> Vec<bool> {
        let n = self.idx.len();
        (0..n)
            .map(|i| {
                // Walk up until the root or `child`.
                let mut v = i;
                let mut steps = 0;
                while v != child && v != 0 && steps <= n {
                    v = self.parent[v];
                    steps += 1;
                }
                v == child
            })
            .collect()
    }

    /// Least weight on the tree path between `a` and `b`.
    #[cfg(test)]
    pub fn lambda(&self, a: usize, b: usize) -> usize {
        let n = self.idx.len();
        let mut depth = vec![0usize; n];
        for (i, d) in depth.iter_mut().enumerate() {
            let mut v = i;
            while v != 0 {
                v = self.parent[v];
                *d += 1;
            }
        }
        let (mut a, mut b) = (a, b);
        let mut best = usize::MAX;
        while a != b {
            if depth[a] >= depth[b] {
                best = best.min(self.weight[a]);
                a = self.parent[a];
            } else {
                best = best.min(self.weight[b]);
                b = self.parent[b];
            }
        }
        best
    }
}

pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    pub fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut v = a;
        while self.0[v] != r {
            let next = self.0[v];
            self.0[v] = r;
            v = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // Keep the smaller index as root so ids stay deterministic.
        if ra < rb {
            self.0[rb] = ra;
        } else if rb < ra {
            self.0[ra] = rb;
        }
    }
}

/// Classes of `u ~ v ⟺ λ(u, v) ≥ c`, ordered by their least vertex.
pub fn edge_blocks(g: &Graph, c: usize) -> Vec<BTreeSet<Vertex>> {
    if g.is_empty() {
        return Vec::new();
    }
    let tree = CutTree::new(g);
    group(&tree.idx, &tree.classes(c))
}

fn group(idx: &Indexed, class: &[usize]) -> Vec<BTreeSet<Vertex>> {
    let mut by: BTreeMap<usize, BTreeSet<Vertex>> = BTreeMap::new();
    for (i, &k) in class.iter().enumerate() {
        by.entry(k).or_default().insert(idx.name(i).clone());
    }
    let mut out: Vec<BTreeSet<Vertex>> = by.into_values().collect();
    out.sort();
    out
}

/// A tree whose nodes are the parts of a vertex partition; each tree edge
/// carries the edges of the graph between the two sides it induces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeCutDecomposition {
    pub parts: Vec<BTreeSet<Vertex>>,
    /// Tree edges as part indices.
    pub tree: Vec<(usize, usize)>,
    /// Adhesion set of each tree edge, same order as `tree`.
    pub adhesion: Vec<BTreeSet<Edge>>,
}

impl TreeCutDecomposition {
    pub fn max_adhesion(&self) -> usize {
        self.adhesion.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// Checks partition, tree shape and adhesion exactness against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut seen = BTreeSet::new();
        for p in &self.parts {
            for v in p {
                if !g.has_vertex(v) || !seen.insert(v.clone()) {
                    return Err(invalid(format!("`{v}` is unknown or in two parts")));
                }
            }
        }
        if seen.len() != g.vertex_count() {
            return Err(invalid("parts do not cover the graph"));
        }
        let k = self.parts.len();
        if self.tree.len() + 1 != k || self.adhesion.len() != self.tree.len() {
            return Err(invalid("decomposition tree has the wrong number of edges"));
        }
        let mut uf = UnionFind::new(k);
        for &(a, b) in &self.tree {
            if a >= k || b >= k || uf.find(a) == uf.find(b) {
                return Err(invalid("decomposition tree has a cycle or bad node"));
            }
            uf.union(a, b);
        }
        for (i, &(a, b)) in self.tree.iter().enumerate() {
            let side = self.side(i, a, b);
            let expected = g.edges_between(&side, &g.vertex_set().difference(&side).cloned().collect());
            if expected != self.adhesion[i] {
                return Err(invalid(format!("adhesion of tree edge {a}-{b} is not the induced cut")));
            }
        }
        Ok(())
    }

    /// Union of the parts on `a`'s side of tree edge `i`.
    fn side(&self, i: usize, a: usize, b: usize) -> BTreeSet<Vertex> {
        let k = self.parts.len();
        let mut adj = vec![Vec::new(); k];
        for (j, &(p, q)) in self.tree.iter().enumerate() {
            if j != i {
                adj[p].push(q);
                adj[q].push(p);
            }
        }
        let mut seen = vec![false; k];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(p) = stack.pop() {
            for &q in &adj[p] {
                if !seen[q] && q != b {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        (0..k)
            .filter(|&p| seen[p])
            .flat_map(|p| self.parts[p].iter().cloned())
            .collect()
    }
}

/// Contracts the cut tree along edges of weight at least `c`; parts are the
/// edge-blocks and every adhesion set has fewer than `c` edges.
pub fn tree_cut_decomposition(g: &Graph, c: usize) -> Result<TreeCutDecomposition> {
    if c == 0 {
        return Err(invalid("threshold must be at least 1"));
    }
    if !g.is_connected() {
        return Err(invalid("graph is not connected"));
    }
    if g.is_empty() {
        return Err(invalid("graph is empty"));
    }
    let tree = CutTree::new(g);
    let class = tree.classes(c);
    let parts = group(&tree.idx, &class);
    let part_of_vertex: BTreeMap<&Vertex, usize> = parts
        .iter()
        .enumerate()
        .flat_map(|(k, p)| p.iter().map(move |v| (v, k)))
        .collect();
    let mut tcd = TreeCutDecomposition {
        parts: parts.clone(),
        tree: Vec::new(),
        adhesion: Vec::new(),
    };
    for (s, p, w) in tree.edges() {
        if w >= c {
            continue;
        }
        let a = part_of_vertex[tree.idx.name(s)];
        let b = part_of_vertex[tree.idx.name(p)];
        let inside = tree.subtree(s);
        let side: BTreeSet<Vertex> = (0..tree.idx.len())
            .filter(|&i| inside[i])
            .map(|i| tree.idx.name(i).clone())
            .collect();
        let rest: BTreeSet<Vertex> = g.vertex_set().difference(&side).cloned().collect();
        let cut = g.edges_between(&side, &rest);
        if cut.len() != w {
            return Err(Error::Invariant(format!(
                "cut tree edge of weight {w} induces a cut of size {}",
                cut.len()
            )));
        }
        tcd.tree.push((a.min(b), a.max(b)));
        tcd.adhesion.push(cut);
    }
    let mut order: Vec<usize> = (0..tcd.tree.len()).collect();
    order.sort_by_key(|&i| tcd.tree[i]);
    tcd.adhesion = order.iter().map(|&i| tcd.adhesion[i].clone()).collect();
    tcd.tree = order.iter().map(|&i| tcd.tree[i]).collect();
    Ok(tcd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge_connectivity;

    fn bridged_triangles(n: usize) -> Graph {
        let mut g = Graph::new();
        for t in 0..n {
            let v = |i: usize| format!("t{t}{i}");
            g.add_edge(v(0), v(1)).unwrap();
            g.add_edge(v(1), v(2)).unwrap();
            g.add_edge(v(0), v(2)).unwrap();
            if t > 0 {
                g.add_edge(format!("t{}2", t - 1), v(0)).unwrap();
            }
        }
        g
    }

    #[test]
    fn cut_tree_matches_flows() {
        let g = crate::generators::halved_farey(3).graph().clone();
        let tree = CutTree::new(&g);
        for a in 0..tree.idx.len() {
            for b in a + 1..tree.idx.len() {
                let l = edge_connectivity(&g, tree.idx.name(a), tree.idx.name(b))
                    .unwrap()
                    .lambda;
                assert_eq!(tree.lambda(a, b), l);
            }
        }
    }

    #[test]
    fn bridge_splits_blocks() {
        let g = bridged_triangles(2);
        assert_eq!(edge_blocks(&g, 2).len(), 2);
        assert_eq!(edge_blocks(&g, 1).len(), 1);
    }

    #[test]
    fn triangle_chain_decomposes_into_path() {
        let g = bridged_triangles(3);
        let tcd = tree_cut_decomposition(&g, 2).unwrap();
        assert_eq!(tcd.parts.len(), 3);
        assert_eq!(tcd.tree, vec![(0, 1), (1, 2)]);
        assert!(tcd.adhesion.iter().all(|a| a.len() == 1));
        tcd.validate(&g).unwrap();
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::from_edges([("a", "b"), ("c", "d")]).unwrap();
        assert!(tree_cut_decomposition(&g, 2).is_err());
        assert_eq!(edge_blocks(&g, 1).len(), 2);
    }
}
