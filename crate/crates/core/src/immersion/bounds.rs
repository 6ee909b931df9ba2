//! Counting certificates against strong immersions.
//!
//! Deleting two branch vertices `u`, `v` of a circularly drawn host leaves
//! two arcs; each pair of branch vertices on opposite arcs needs its own
//! route, and each such route crosses between the arcs. Likewise, deleting
//! one branch vertex `w` of a halved Farey graph splits `L` into `[x, w)` and
//! `(w, y]`, and the pattern's edge connectivity between the two preimage
//! sets must fit through the edges joining those intervals.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, precondition, Result};
use crate::grainline::GrainLine;
use crate::graph::flow::FlowNetwork;
use crate::graph::{Graph, Indexed, Vertex};

/// `K^t` on vertices `"0"…"t-1"`.
pub fn complete_pattern(t: usize) -> Graph {
    let mut g = Graph::new();
    for i in 0..t {
        g.add_vertex(i.to_string());
        for j in 0..i {
            g.insert_edge(crate::graph::Edge::new(j.to_string(), i.to_string()));
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSlack {
    pub u: Vertex,
    pub v: Vertex,
    /// Branch vertices on the arc from `u` to `v`.
    pub left: usize,
    /// Branch vertices on the arc from `v` back to `u`.
    pub right: usize,
    pub demand: usize,
    pub available: usize,
    pub slack: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteBound {
    pub pairs: Vec<PairSlack>,
    /// No pair splits the branch set, so nothing is certified.
    pub vacuous: bool,
    pub min_slack: Option<i64>,
    /// Some slack is negative: no strong immersion of the complete graph
    /// on this branch set exists.
    pub certifies_absence: bool,
}

/// Per splitting pair `u, v ∈ U`: demand `|U ∩ (u,v)| · |U ∩ (v,u)|` against
/// the number of edges between the open arcs.
pub fn cut_bound_complete(g: &Graph, cyclic: &[Vertex], u: &BTreeSet<Vertex>) -> Result<CompleteBound> {
    let pos: BTreeMap<&Vertex, usize> = cyclic.iter().enumerate().map(|(i, v)| (v, i)).collect();
    if pos.len() != cyclic.len() || pos.len() != g.vertex_count() || g.vertices().any(|v| !pos.contains_key(v)) {
        return Err(invalid("cyclic order must list every vertex exactly once"));
    }
    if let Some(v) = u.iter().find(|v| !g.has_vertex(v)) {
        return Err(invalid(format!("branch vertex `{v}` is not in the host")));
    }
    let mut branch: Vec<usize> = u.iter().map(|v| pos[v]).collect();
    branch.sort_unstable();
    let mut pairs = Vec::new();
    for (a, &i) in branch.iter().enumerate() {
        for (b, &j) in branch.iter().enumerate().skip(a + 1) {
            let left = b - a - 1;
            let right = branch.len() - 2 - left;
            if left == 0 || right == 0 {
                continue;
            }
            // Arc membership: strictly between i and j going forward.
            let inside = |p: usize| i < p && p < j;
            let available = g
                .edges()
                .filter(|e| {
                    let (p, q) = (pos[e.low()], pos[e.high()]);
                    let off = |r: usize| r != i && r != j;
                    off(p) && off(q) && inside(p) != inside(q)
                })
                .count();
            let demand = left * right;
            pairs.push(PairSlack {
                u: cyclic[i].clone(),
                v: cyclic[j].clone(),
                left,
                right,
                demand,
                available,
                slack: available as i64 - demand as i64,
            });
        }
    }
    let min_slack = pairs.iter().map(|p| p.slack).min();
    Ok(CompleteBound {
        vacuous: pairs.is_empty(),
        certifies_absence: min_slack.is_some_and(|s| s < 0),
        min_slack,
        pairs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchSlack {
    pub pattern_vertex: Vertex,
    pub host_vertex: Vertex,
    /// Branch vertices in `[x, w)_L`.
    pub left: usize,
    /// Branch vertices in `(w, y]_L`.
    pub right: usize,
    /// Edge connectivity between the two preimage sets in the pattern minus
    /// `w`'s preimage.
    pub demand: usize,
    /// Edges of the host minus `w` between `[x, w)` and `(w, y]`.
    pub available: usize,
    pub slack: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalvedBound {
    pub branches: Vec<BranchSlack>,
    pub vacuous: bool,
    pub min_slack: Option<i64>,
    /// Some slack is negative: this placement admits no strong immersion.
    pub certifies_absence: bool,
}

/// Checks a placement of `pattern` into the graph of a free grain line
/// (such as a halved Farey graph with its `≤_L`).
pub fn cut_bound_farey_in_halved(
    host: &GrainLine,
    pattern: &Graph,
    placement: &BTreeMap<Vertex, Vertex>,
) -> Result<HalvedBound> {
    let g = host.host();
    if let Some(v) = g.vertices().find(|v| !host.in_l(v)) {
        return Err(precondition(format!("host vertex `{v}` is outside L")));
    }
    let mut images = BTreeSet::new();
    for h in pattern.vertices() {
        let Some(w) = placement.get(h) else {
            return Err(invalid(format!("pattern vertex `{h}` is not placed")));
        };
        if !g.has_vertex(w) {
            return Err(invalid(format!("`{w}` is not a host vertex")));
        }
        if !images.insert(w) {
            return Err(invalid(format!("`{w}` is used twice")));
        }
    }
    let mut branches = Vec::new();
    for (h, w) in placement.iter().filter(|(h, _)| pattern.has_vertex(h)) {
        let pw = host.l_position(w).expect("host vertices are in L");
        let mut left = BTreeSet::new();
        let mut right = BTreeSet::new();
        for (h2, w2) in placement.iter().filter(|(h2, _)| pattern.has_vertex(h2) && *h2 != h) {
            if host.l_position(w2).expect("in L") < pw {
                left.insert(h2.clone());
            } else {
                right.insert(h2.clone());
            }
        }
        if left.is_empty() || right.is_empty() {
            continue;
        }
        let reduced = pattern.without_vertices([h]);
        let demand = set_connectivity(&reduced, &left, &right);
        let available = g
            .edges()
            .filter(|e| !e.contains(w))
            .filter(|e| {
                let (p, q) = (host.l_position(e.low()).unwrap(), host.l_position(e.high()).unwrap());
                (p < pw) != (q < pw)
            })
            .count();
        branches.push(BranchSlack {
            pattern_vertex: h.clone(),
            host_vertex: w.clone(),
            left: left.len(),
            right: right.len(),
            demand,
            available,
            slack: available as i64 - demand as i64,
        });
    }
    let min_slack = branches.iter().map(|b| b.slack).min();
    Ok(HalvedBound {
        vacuous: branches.is_empty(),
        certifies_absence: min_slack.is_some_and(|s| s < 0),
        min_slack,
        branches,
    })
}

/// [`cut_bound_farey_in_halved`] for the complete graph on `u`, placed on
/// itself.
pub fn cut_bound_complete_in_halved(host: &GrainLine, u: &BTreeSet<Vertex>) -> Result<HalvedBound> {
    let mut pattern = Graph::new();
    for v in u {
        pattern.add_vertex(v.clone());
    }
    let list: Vec<&Vertex> = u.iter().collect();
    for (i, a) in list.iter().enumerate() {
        for b in &list[i + 1..] {
            pattern.insert_edge(crate::graph::Edge::new((*a).clone(), (*b).clone()));
        }
    }
    let placement = u.iter().map(|v| (v.clone(), v.clone())).collect();
    cut_bound_farey_in_halved(host, &pattern, &placement)
}

/// Maximum number of edge-disjoint paths from `a` to `b` (vertex sets).
fn set_connectivity(g: &Graph, a: &BTreeSet<Vertex>, b: &BTreeSet<Vertex>) -> usize {
    let idx = Indexed::new(g);
    let n = idx.len();
    let (s, t) = (n, n + 1);
    let mut net = FlowNetwork::new(n + 2);
    for (p, q) in idx.edge_list() {
        net.add_undirected(p, q);
    }
    let big = g.edge_count() as i64 + 1;
    for v in a {
        net.add_pair(s, idx.index(v).expect("pattern vertex"), big, 0);
    }
    for v in b {
        net.add_pair(idx.index(v).expect("pattern vertex"), t, big, 0);
    }
    net.max_flow(s, t, i64::MAX) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{farey_with_order, halved_farey};

    #[test]
    fn small_sets_are_vacuous() {
        let f = farey_with_order(2);
        let u: BTreeSet<Vertex> = f.cyclic_order[..3].iter().cloned().collect();
        let r = cut_bound_complete(&f.graph, &f.cyclic_order, &u).unwrap();
        assert!(r.vacuous);
    }

    #[test]
    fn four_spread_vertices() {
        let f = farey_with_order(2);
        let u: BTreeSet<Vertex> = f.cyclic_order.iter().step_by(2).cloned().collect();
        let r = cut_bound_complete(&f.graph, &f.cyclic_order, &u).unwrap();
        assert!(!r.vacuous);
        for p in &r.pairs {
            assert_eq!(p.slack, p.available as i64 - p.demand as i64);
        }
    }

    #[test]
    fn central_apex_in_halved() {
        let gl = halved_farey(3).grain_line();
        let apex = Vertex::new("1/0/1");
        let u: BTreeSet<Vertex> = [gl.x().clone(), apex.clone(), gl.y().clone()].into_iter().collect();
        let r = cut_bound_complete_in_halved(&gl, &u).unwrap();
        let b = r.branches.iter().find(|b| b.host_vertex == apex).unwrap();
        // Only the order-0 edge xy joins the two sides of the apex.
        assert_eq!((b.demand, b.available), (1, 1));
    }
}
