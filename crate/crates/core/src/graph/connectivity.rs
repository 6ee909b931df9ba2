use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::flow::FlowNetwork;
use super::path::loop_erase;
use super::{Cut, Edge, Graph, Indexed, Path, Vertex};
use crate::error::{invalid, Error, Result};

/// Local edge-connectivity with a witnessing path system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeConnectivity {
    pub lambda: usize,
    pub paths: Vec<Path>,
}

fn endpoints(g: &Graph, u: &Vertex, v: &Vertex) -> Result<(Indexed, usize, usize)> {
    g.require_vertex(u)?;
    g.require_vertex(v)?;
    if u == v {
        return Err(Error::SameEndpoints(u.clone()));
    }
    let idx = Indexed::new(g);
    let (s, t) = (idx.index(u).unwrap(), idx.index(v).unwrap());
    Ok((idx, s, t))
}

/// Maximum number of pairwise edge-disjoint `u`–`v` paths, together with one
/// such system. Augmenting paths prefer the smallest vertex id at every step.
pub fn edge_connectivity(g: &Graph, u: &Vertex, v: &Vertex) -> Result<EdgeConnectivity> {
    let (idx, s, t) = endpoints(g, u, v)?;
    let mut net = FlowNetwork::from_indexed(&idx, &[], |_, _| false);
    let lambda = net.max_flow(s, t, i64::MAX) as usize;
    let paths = net
        .decompose(s, t)
        .into_iter()
        .map(|p| Path::from_vec_unchecked(p.into_iter().map(|i| idx.name(i).clone()).collect()))
        .collect::<Vec<_>>();
    debug_assert_eq!(paths.len(), lambda);
    Ok(EdgeConnectivity { lambda, paths })
}

/// A minimum `u`–`v` edge cut; `u`'s side is the set reachable in the final
/// residual network.
pub fn min_edge_cut(g: &Graph, u: &Vertex, v: &Vertex) -> Result<Cut> {
    let (idx, s, t) = endpoints(g, u, v)?;
    let mut net = FlowNetwork::from_indexed(&idx, &[], |_, _| false);
    net.max_flow(s, t, i64::MAX);
    let reach = net.residual_reachable(s);
    let side: BTreeSet<Vertex> = (0..idx.len())
        .filter(|&i| reach[i])
        .map(|i| idx.name(i).clone())
        .collect();
    Ok(Cut::from_side(g, side))
}

/// Maximum number of internally vertex-disjoint `a`–`b` paths (an edge `ab`
/// counts as one path).
pub fn vertex_connectivity(g: &Graph, a: &Vertex, b: &Vertex) -> Result<usize> {
    let (idx, s, t) = endpoints(g, a, b)?;
    Ok(vertex_connectivity_indexed(&idx, s, t, usize::MAX))
}

pub(crate) fn vertex_connectivity_indexed(idx: &Indexed, s: usize, t: usize, limit: usize) -> usize {
    // v_in = 2v, v_out = 2v + 1
    let n = idx.len();
    let mut net = FlowNetwork::new(2 * n);
    for v in 0..n {
        let cap = if v == s || v == t { n as i64 } else { 1 };
        net.add_pair(2 * v, 2 * v + 1, cap, 0);
    }
    for (a, b) in idx.edge_list() {
        net.add_pair(2 * a + 1, 2 * b, 1, 0);
        net.add_pair(2 * b + 1, 2 * a, 1, 0);
    }
    net.max_flow(2 * s + 1, 2 * t, limit.min(i64::MAX as usize) as i64) as usize
}

/// Length of a shortest cycle, `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    let idx = Indexed::new(g);
    let n = idx.len();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[v] + 1 >= b) {
                break;
            }
            for &w in &idx.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    parent[w] = v;
                    queue.push_back(w);
                } else if parent[v] != w {
                    let len = dist[v] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// Joins `u`–`w` paths with `a`–`w` paths at `w` into pairwise edge-disjoint
/// `u`–`a` paths.
///
/// Pairs are tried greedily in index order (`P_i` with the reverse of `Q_j`,
/// loops erased by first visit). If the greedy pass falls short of
/// `⌊min(|P|, |Q|) / 2⌋` and the systems are small, every pairing is searched.
pub fn combine_path_systems(p: &[Path], q: &[Path]) -> Result<Vec<Path>> {
    if p.is_empty() || q.is_empty() {
        return Ok(Vec::new());
    }
    let u = p[0].start().clone();
    let a = q[0].start().clone();
    let w = p[0].end().clone();
    if u == a {
        return Err(invalid(format!("both systems start at `{u}`")));
    }
    for path in p {
        if path.start() != &u || path.end() != &w {
            return Err(invalid(format!("{path:?} is not a `{u}`–`{w}` path")));
        }
    }
    for path in q {
        if path.start() != &a || path.end() != &w {
            return Err(invalid(format!("{path:?} is not a `{a}`–`{w}` path")));
        }
    }
    for (name, sys) in [("first", p), ("second", q)] {
        let mut seen = BTreeSet::new();
        for e in sys.iter().flat_map(Path::edges) {
            if !seen.insert(e.clone()) {
                return Err(invalid(format!("{name} system uses edge {e} twice")));
            }
        }
    }

    let joined: Vec<Vec<Option<Path>>> = p
        .iter()
        .map(|pi| {
            q.iter()
                .map(|qj| {
                    let walk = pi.vertices().iter().chain(qj.vertices().iter().rev().skip(1));
                    let path = loop_erase(walk);
                    (path.end() == &a && path.start() == &u).then_some(path)
                })
                .collect()
        })
        .collect();

    let target = p.len().min(q.len()) / 2;
    let greedy = greedy_pairing(&joined);
    if greedy.len() >= target || p.len() * q.len() > 64 {
        return Ok(greedy);
    }
    let mut best = greedy;
    let mut used_p = vec![false; p.len()];
    let mut used_q = vec![false; q.len()];
    let mut chosen = Vec::new();
    let mut edges = BTreeSet::new();
    exhaustive_pairing(&joined, 0, &mut used_p, &mut used_q, &mut chosen, &mut edges, &mut best);
    Ok(best)
}

fn greedy_pairing(joined: &[Vec<Option<Path>>]) -> Vec<Path> {
    let mut used_q = vec![false; joined.first().map_or(0, Vec::len)];
    let mut edges: BTreeSet<Edge> = BTreeSet::new();
    let mut out = Vec::new();
    for row in joined {
        for (j, cand) in row.iter().enumerate() {
            let Some(path) = cand else { continue };
            if used_q[j] || path.edges().any(|e| edges.contains(&e)) {
                continue;
            }
            used_q[j] = true;
            edges.extend(path.edges());
            out.push(path.clone());
            break;
        }
    }
    out
}

fn exhaustive_pairing(
    joined: &[Vec<Option<Path>>],
    i: usize,
    used_p: &mut Vec<bool>,
    used_q: &mut Vec<bool>,
    chosen: &mut Vec<Path>,
    edges: &mut BTreeSet<Edge>,
    best: &mut Vec<Path>,
) {
    if chosen.len() > best.len() {
        *best = chosen.clone();
    }
    if i == joined.len() || chosen.len() + (joined.len() - i) <= best.len() {
        return;
    }
    for (j, cand) in joined[i].iter().enumerate() {
        let Some(path) = cand else { continue };
        if used_q[j] || path.edges().any(|e| edges.contains(&e)) {
            continue;
        }
        used_p[i] = true;
        used_q[j] = true;
        edges.extend(path.edges());
        chosen.push(path.clone());
        exhaustive_pairing(joined, i + 1, used_p, used_q, chosen, edges, best);
        chosen.pop();
        for e in path.edges() {
            edges.remove(&e);
        }
        used_q[j] = false;
        used_p[i] = false;
    }
    exhaustive_pairing(joined, i + 1, used_p, used_q, chosen, edges, best);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        Vertex::new(s)
    }

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new();
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(format!("{i}"), format!("{j}")).unwrap();
            }
        }
        g
    }

    #[test]
    fn path_graph_connectivity() {
        let g = Graph::from_edges([("u", "w"), ("w", "v")]).unwrap();
        let res = edge_connectivity(&g, &v("u"), &v("v")).unwrap();
        assert_eq!(res.lambda, 1);
        assert_eq!(res.paths, vec![Path::from_names(&["u", "w", "v"])]);
        assert_eq!(min_edge_cut(&g, &v("u"), &v("v")).unwrap().size(), 1);
    }

    #[test]
    fn k4_has_three_paths() {
        let g = complete(4);
        let res = edge_connectivity(&g, &v("0"), &v("3")).unwrap();
        assert_eq!(res.lambda, 3);
        let mut all = BTreeSet::new();
        for p in &res.paths {
            p.validate_in(&g).unwrap();
            for e in p.edges() {
                assert!(all.insert(e));
            }
        }
    }

    #[test]
    fn same_endpoints_rejected() {
        let g = complete(3);
        assert!(edge_connectivity(&g, &v("0"), &v("0")).is_err());
    }

    #[test]
    fn disconnected_pair_is_zero() {
        let mut g = Graph::from_edges([("a", "b")]).unwrap();
        g.add_vertex("c");
        let res = edge_connectivity(&g, &v("a"), &v("c")).unwrap();
        assert_eq!(res.lambda, 0);
        assert!(res.paths.is_empty());
    }

    #[test]
    fn bridge_cut() {
        let g = Graph::from_edges([
            ("a1", "a2"),
            ("a2", "a3"),
            ("a1", "a3"),
            ("b1", "b2"),
            ("b2", "b3"),
            ("b1", "b3"),
            ("a3", "b1"),
        ])
        .unwrap();
        let cut = min_edge_cut(&g, &v("a1"), &v("b2")).unwrap();
        assert_eq!(cut.cross_edges, BTreeSet::from([Edge::new("a3", "b1")]));
        assert!(cut.side_a.contains(&v("a1")) && cut.side_b.contains(&v("b2")));
    }

    #[test]
    fn girth_small_cases() {
        assert_eq!(girth(&complete(3)), Some(3));
        assert_eq!(girth(&Graph::from_edges([("a", "b"), ("b", "c")]).unwrap()), None);
        let c5 = Graph::from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")]).unwrap();
        assert_eq!(girth(&c5), Some(5));
    }

    #[test]
    fn vertex_connectivity_of_k4() {
        assert_eq!(vertex_connectivity(&complete(4), &v("0"), &v("1")).unwrap(), 3);
        let g = Graph::from_edges([("a", "m"), ("m", "b"), ("a", "n"), ("n", "m")]).unwrap();
        assert_eq!(vertex_connectivity(&g, &v("a"), &v("b")).unwrap(), 1);
    }

    #[test]
    fn combine_single_pair() {
        let p = [Path::from_names(&["u", "p", "w"])];
        let q = [Path::from_names(&["a", "q", "w"])];
        let out = combine_path_systems(&p, &q).unwrap();
        assert_eq!(out, vec![Path::from_names(&["u", "p", "w", "q", "a"])]);
    }

    #[test]
    fn combine_rejects_same_start() {
        let p = [Path::from_names(&["u", "w"])];
        let q = [Path::from_names(&["u", "x", "w"])];
        assert!(combine_path_systems(&p, &q).is_err());
        assert!(combine_path_systems(&[], &q).unwrap().is_empty());
    }
}
