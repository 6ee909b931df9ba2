//! Slow, direct reference implementations used to cross-check the fast
//! algorithms. Nothing here shares code with flows, cut trees or the
//! embedding search.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;

use crate::graph::{Edge, Graph, Path, Vertex};

/// Halved Farey graph grown by the textbook rule: start from one edge, and
/// at each step put a new common neighbour on every edge added last step.
pub fn spawned_halved_farey(n: usize) -> Graph {
    let mut g = Graph::from_edges([("x", "y")]).unwrap();
    let mut fresh = vec![Edge::new("x", "y")];
    let mut counter = 0usize;
    for _ in 0..n {
        let mut next = Vec::with_capacity(2 * fresh.len());
        for e in &fresh {
            let v = Vertex::new(format!("s{counter}"));
            counter += 1;
            let (a, b) = e.endpoints();
            next.push(Edge::new(a.clone(), v.clone()));
            next.push(Edge::new(v, b.clone()));
        }
        for e in &next {
            g.insert_edge(e.clone());
        }
        fresh = next;
    }
    g
}

/// Least number of edges between a vertex set containing `u` and its
/// complement containing `v`, over all such sets.
pub fn min_cut_by_enumeration(g: &Graph, u: &Vertex, v: &Vertex) -> usize {
    let vs: Vec<&Vertex> = g.vertices().filter(|w| *w != u && *w != v).collect();
    assert!(vs.len() < 26, "enumeration is exponential");
    let mut best = usize::MAX;
    for mask in 0u32..(1 << vs.len()) {
        let side: BTreeSet<&Vertex> = std::iter::once(u)
            .chain(
                vs.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, w)| *w),
            )
            .collect();
        let cut = g
            .edges()
            .filter(|e| side.contains(e.low()) != side.contains(e.high()))
            .count();
        best = best.min(cut);
    }
    best
}

/// Local edge-connectivity of every pair, from one pass over all vertex
/// subsets.
pub fn pairwise_lambda(g: &Graph) -> BTreeMap<(Vertex, Vertex), usize> {
    let vs: Vec<Vertex> = g.vertices().cloned().collect();
    let n = vs.len();
    assert!(n <= 20, "enumeration is exponential");
    let pos: BTreeMap<&Vertex, usize> = vs.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let edges: Vec<(usize, usize)> = g.edges().map(|e| (pos[e.low()], pos[e.high()])).collect();
    let mut best = vec![vec![usize::MAX; n]; n];
    // Vertex 0 is always on the "inside" so each cut is seen once.
    for mask in 0u32..(1 << n) {
        if mask & 1 == 0 || mask == (1 << n) - 1 {
            continue;
        }
        let cut = edges
            .iter()
            .filter(|&&(a, b)| (mask >> a & 1) != (mask >> b & 1))
            .count();
        for (a, b) in (0..n).tuple_combinations() {
            if (mask >> a & 1) != (mask >> b & 1) && cut < best[a][b] {
                best[a][b] = cut;
            }
        }
    }
    (0..n)
        .tuple_combinations()
        .map(|(a, b)| ((vs[a].clone(), vs[b].clone()), best[a][b]))
        .collect()
}

/// Every simple `u`–`v` path, optionally with interiors avoiding `forbidden`.
pub fn simple_paths(g: &Graph, u: &Vertex, v: &Vertex, forbidden: &BTreeSet<Vertex>) -> Vec<Path> {
    fn go(
        g: &Graph,
        v: &Vertex,
        forbidden: &BTreeSet<Vertex>,
        stack: &mut Vec<Vertex>,
        on: &mut BTreeSet<Vertex>,
        out: &mut Vec<Path>,
    ) {
        let last = stack.last().unwrap().clone();
        if &last == v {
            out.push(Path::new(stack.clone()).unwrap());
            return;
        }
        for w in g.neighbors(&last) {
            if on.contains(w) || (w != v && forbidden.contains(w)) {
                continue;
            }
            on.insert(w.clone());
            stack.push(w.clone());
            go(g, v, forbidden, stack, on, out);
            stack.pop();
            on.remove(w);
        }
    }
    let mut out = Vec::new();
    let mut stack = vec![u.clone()];
    let mut on: BTreeSet<Vertex> = [u.clone()].into_iter().collect();
    go(g, v, forbidden, &mut stack, &mut on, &mut out);
    out
}

/// Largest set of pairwise edge-disjoint `u`–`v` paths, by exhaustive
/// search over all simple paths.
pub fn path_packing(g: &Graph, u: &Vertex, v: &Vertex) -> usize {
    let mut paths = simple_paths(g, u, v, &BTreeSet::new());
    paths.sort_by_key(Path::len);
    let sets: Vec<BTreeSet<Edge>> = paths.iter().map(Path::edge_set).collect();
    let cap = g.degree(u).min(g.degree(v));
    fn go(sets: &[BTreeSet<Edge>], from: usize, used: &mut BTreeSet<Edge>, have: usize, best: &mut usize, cap: usize) {
        *best = (*best).max(have);
        if *best == cap {
            return;
        }
        for i in from..sets.len() {
            if sets[i].is_disjoint(used) {
                used.extend(sets[i].iter().cloned());
                go(sets, i + 1, used, have + 1, best, cap);
                for e in &sets[i] {
                    used.remove(e);
                }
                if *best == cap {
                    return;
                }
            }
        }
    }
    let mut best = 0;
    go(&sets, 0, &mut BTreeSet::new(), 0, &mut best, cap);
    best
}

/// Length of a shortest cycle: for each edge, the distance between its ends
/// once it is removed.
pub fn girth_by_edge_removal(g: &Graph) -> Option<usize> {
    let mut best: Option<usize> = None;
    for e in g.edges() {
        let (a, b) = e.endpoints();
        let mut dist: BTreeMap<&Vertex, usize> = BTreeMap::new();
        dist.insert(a, 0);
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                break;
            }
            for w in g.neighbors(v) {
                if (v == a && w == b) || dist.contains_key(w) {
                    continue;
                }
                dist.insert(w, dist[v] + 1);
                queue.push_back(w);
            }
        }
        if let Some(d) = dist.get(b) {
            best = Some(best.map_or(d + 1, |x| x.min(d + 1)));
        }
    }
    best
}

/// Whether `pattern` immerses (strongly or weakly) or embeds as a
/// subdivision in `host`, by trying every injective branch map and every
/// combination of simple paths. `candidates` restricts branch images.
pub fn contains_by_enumeration(
    pattern: &Graph,
    host: &Graph,
    kind: Containment,
    candidates: Option<&BTreeMap<Vertex, BTreeSet<Vertex>>>,
) -> bool {
    let pv: Vec<Vertex> = pattern.vertices().cloned().collect();
    let hv: Vec<Vertex> = host.vertices().cloned().collect();
    let pe: Vec<Edge> = pattern.edges().collect();

    fn routes_fit(host: &Graph, pe: &[Edge], pv: &[Vertex], image: &[Vertex], kind: Containment) -> bool {
        let at: BTreeMap<&Vertex, &Vertex> = pv.iter().zip(image).collect();
        let forbidden: BTreeSet<Vertex> = match kind {
            Containment::Weak => BTreeSet::new(),
            _ => image.iter().cloned().collect(),
        };
        let options: Vec<Vec<Path>> = pe
            .iter()
            .map(|e| simple_paths(host, at[e.low()], at[e.high()], &forbidden))
            .collect();
        fn pick(
            options: &[Vec<Path>],
            i: usize,
            edges: &mut BTreeSet<Edge>,
            inner: &mut BTreeSet<Vertex>,
            kind: Containment,
        ) -> bool {
            if i == options.len() {
                return true;
            }
            for p in &options[i] {
                let es = p.edge_set();
                if !es.is_disjoint(edges) {
                    continue;
                }
                if kind == Containment::Subdivision && p.inner_vertices().iter().any(|v| inner.contains(v)) {
                    continue;
                }
                edges.extend(es.iter().cloned());
                let added: Vec<Vertex> = p
                    .inner_vertices()
                    .iter()
                    .filter(|v| inner.insert((*v).clone()))
                    .cloned()
                    .collect();
                if pick(options, i + 1, edges, inner, kind) {
                    return true;
                }
                for e in &es {
                    edges.remove(e);
                }
                for v in &added {
                    inner.remove(v);
                }
            }
            false
        }
        pick(&options, 0, &mut BTreeSet::new(), &mut BTreeSet::new(), kind)
    }

    hv.iter().cloned().permutations(pv.len()).any(|image| {
        let allowed = pv
            .iter()
            .zip(&image)
            .all(|(p, h)| candidates.and_then(|c| c.get(p)).is_none_or(|c| c.contains(h)));
        allowed && routes_fit(host, &pe, &pv, &image, kind)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Subdivision,
    Strong,
    Weak,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::halved_farey;
    use crate::immersion::complete_pattern;

    #[test]
    fn spawned_counts() {
        for n in 0..6 {
            let g = spawned_halved_farey(n);
            assert_eq!(g.vertex_count(), (1 << n) + 1);
            assert_eq!(g.edge_count(), (1 << (n + 1)) - 1);
        }
    }

    #[test]
    fn packing_meets_cut() {
        let g = halved_farey(3).graph().clone();
        let (x, y) = (Vertex::new("x"), Vertex::new("y"));
        assert_eq!(path_packing(&g, &x, &y), 4);
        assert_eq!(min_cut_by_enumeration(&g, &x, &y), 4);
    }

    #[test]
    fn small_containments() {
        let k4 = complete_pattern(4);
        let k3 = complete_pattern(3);
        assert!(contains_by_enumeration(&k3, &k4, Containment::Subdivision, None));
        assert!(!contains_by_enumeration(
            &k4,
            halved_farey(2).graph(),
            Containment::Strong,
            None
        ));
        assert_eq!(girth_by_edge_removal(&k4), Some(3));
    }
}
