//! A grain line whose `L` is a chain of unitary separators.
//!
//! The separators are threaded onto paths in rounds: each round places the
//! middle unplaced separator of every gap left by the previous round, so
//! `P_n` visits the separators of rounds `≤ n` in chain order. Paths are
//! pairwise edge-disjoint and share no vertex outside `L`. Suppressing the
//! vertices outside `L` gives the grain line's graph; each suppressed edge
//! remembers the host path it came from, which is the immersion.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{verify_immersion, ImmersionModel};
use crate::error::{invalid, precondition, Error, Result};
use crate::grainline::{check_grain_line, is_wildly_presented, GrainLine};
use crate::graph::{Edge, Graph, Path, Vertex};
use crate::separations::CompoundSeparation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WildGrainLine {
    /// Grain line on the suppressed graph.
    pub grain_line: GrainLine,
    /// The suppressed graph immersed in the host.
    pub immersion: ImmersionModel,
    /// The paths as built in the host.
    pub host_paths: Vec<Path>,
    /// Vertices outside `L` kept so that suppression creates no parallel edge.
    pub kept: Vec<Vertex>,
    pub wildly_presented: bool,
}

/// `seps` must be unitary separations of `g` with distinct separators,
/// forming a chain `(A_1, B_1) ≤ (A_2, B_2) ≤ …` with `x` in every `A_i ∖ B_i`
/// and `y` in every `B_i ∖ A_i`.
pub fn wild_separations_to_grainline(
    g: &Graph,
    x: &Vertex,
    y: &Vertex,
    seps: &[CompoundSeparation],
) -> Result<WildGrainLine> {
    g.require_vertex(x)?;
    g.require_vertex(y)?;
    if x == y {
        return Err(Error::SameEndpoints(x.clone()));
    }
    let mut separators = Vec::with_capacity(seps.len());
    for (i, s) in seps.iter().enumerate() {
        s.validate(g)?;
        let Some(w) = s.unitary_vertex() else {
            return Err(invalid(format!("separation {i} is not unitary")));
        };
        if separators.contains(w) {
            return Err(invalid(format!("separator `{w}` appears twice")));
        }
        if !s.a_only().contains(x) || !s.b_only().contains(y) {
            return Err(invalid(format!("separation {i} does not put `{x}` before `{y}`")));
        }
        if i > 0 && !seps[i - 1].oriented().le(&s.oriented()) {
            return Err(invalid(format!("separations {} and {i} are not in chain order", i - 1)));
        }
        separators.push(w.clone());
    }
    let order: Vec<Vertex> = std::iter::once(x.clone())
        .chain(separators.iter().cloned())
        .chain(std::iter::once(y.clone()))
        .collect();
    let in_l: BTreeSet<&Vertex> = order.iter().collect();

    // Positions in `order` placed so far.
    let mut placed: Vec<usize> = vec![0, order.len() - 1];
    let mut used_edges: BTreeSet<Edge> = BTreeSet::new();
    let mut used_outside: BTreeSet<Vertex> = BTreeSet::new();
    let mut host_paths = Vec::new();
    let mut round = 0;
    loop {
        if round > 0 {
            let mut next = placed.clone();
            for w in placed.windows(2) {
                if w[1] > w[0] + 1 {
                    next.push((w[0] + w[1]) / 2);
                }
            }
            next.sort_unstable();
            placed = next;
        }
        let stops: Vec<&Vertex> = placed.iter().map(|&i| &order[i]).collect();
        let mut walk: Vec<Vertex> = vec![x.clone()];
        let mut on_walk: BTreeSet<Vertex> = [x.clone()].into_iter().collect();
        for pair in stops.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let avoid = |v: &Vertex| v != b && (on_walk.contains(v) || (in_l.contains(v)) || used_outside.contains(v));
            let Some(seg) = bfs_avoiding(g, a, b, avoid, &used_edges) else {
                return Err(precondition(format!(
                    "round {round}: no path from `{a}` to `{b}` avoiding earlier paths and the other separators"
                )));
            };
            for v in &seg[1..] {
                on_walk.insert(v.clone());
            }
            walk.extend(seg.into_iter().skip(1));
        }
        let path = Path::from_vec_unchecked(walk);
        used_edges.extend(path.edges());
        used_outside.extend(path.vertices().iter().filter(|v| !in_l.contains(v)).cloned());
        host_paths.push(path);
        if placed.len() == order.len() {
            break;
        }
        round += 1;
    }

    let (suppressed, routes, kept, paths) = suppress(&host_paths, &in_l);
    let grain_line = GrainLine::new(x.clone(), y.clone(), order, paths)?;
    let report = check_grain_line(&grain_line);
    if !report.is_valid() {
        return Err(Error::Invariant(format!(
            "threaded paths do not form a grain line: {}",
            report.violations[0]
        )));
    }
    let immersion = ImmersionModel {
        branch: suppressed.vertices().map(|v| (v.clone(), v.clone())).collect(),
        pattern: suppressed,
        host: g.clone(),
        routes,
        strong: true,
    };
    let check = verify_immersion(&immersion);
    if !check.is_valid() {
        return Err(Error::Invariant(format!(
            "suppression is not an immersion: {}",
            check.violations[0]
        )));
    }
    Ok(WildGrainLine {
        wildly_presented: is_wildly_presented(&grain_line),
        grain_line,
        immersion,
        host_paths,
        kept,
    })
}

type Suppressed = (Graph, BTreeMap<Edge, Path>, Vec<Vertex>, Vec<Path>);

/// Replaces each stretch between consecutive `L` vertices by one edge. Direct
/// host edges go first; a stretch whose edge already exists keeps its first
/// inner vertex.
fn suppress(host_paths: &[Path], in_l: &BTreeSet<&Vertex>) -> Suppressed {
    let stretches: Vec<Vec<Path>> = host_paths
        .iter()
        .map(|p| {
            let cuts: Vec<usize> = (0..p.vertices().len())
                .filter(|&i| in_l.contains(&p.vertices()[i]))
                .collect();
            cuts.windows(2).map(|w| p.slice(w[0], w[1])).collect()
        })
        .collect();
    let mut graph = Graph::new();
    let mut routes = BTreeMap::new();
    let add = |graph: &mut Graph, routes: &mut BTreeMap<Edge, Path>, s: Path| {
        let e = Edge::new(s.start().clone(), s.end().clone());
        graph.insert_edge(e.clone());
        let s = if s.start() == e.low() { s } else { s.reversed() };
        routes.insert(e, s);
    };
    for s in stretches.iter().flatten().filter(|s| s.len() == 1) {
        add(&mut graph, &mut routes, s.clone());
    }
    let mut kept = Vec::new();
    let mut paths = Vec::with_capacity(host_paths.len());
    for list in &stretches {
        let mut out = vec![list[0].start().clone()];
        for s in list {
            if s.len() == 1 {
                out.push(s.end().clone());
            } else if graph.has_edge(s.start(), s.end()) {
                let k = s.vertices()[1].clone();
                add(&mut graph, &mut routes, s.slice(0, 1));
                add(&mut graph, &mut routes, s.slice(1, s.len()));
                kept.push(k.clone());
                out.push(k);
                out.push(s.end().clone());
            } else {
                add(&mut graph, &mut routes, s.clone());
                out.push(s.end().clone());
            }
        }
        paths.push(Path::from_vec_unchecked(out));
    }
    (graph, routes, kept, paths)
}

/// Shortest `a`–`b` path whose vertices after `a` pass `avoid` only at `b`
/// and whose edges are unused.
fn bfs_avoiding(
    g: &Graph,
    a: &Vertex,
    b: &Vertex,
    avoid: impl Fn(&Vertex) -> bool,
    used: &BTreeSet<Edge>,
) -> Option<Vec<Vertex>> {
    let mut prev: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    prev.insert(a.clone(), a.clone());
    let mut queue = VecDeque::from([a.clone()]);
    while let Some(v) = queue.pop_front() {
        if &v == b {
            let mut out = vec![b.clone()];
            let mut cur = b.clone();
            while &cur != a {
                cur = prev[&cur].clone();
                out.push(cur.clone());
            }
            out.reverse();
            return Some(out);
        }
        for w in g.neighbors(&v) {
            if prev.contains_key(w) || avoid(w) || used.contains(&Edge::new(v.clone(), w.clone())) {
                continue;
            }
            prev.insert(w.clone(), v.clone());
            queue.push_back(w.clone());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::halved_farey;

    fn apex_separation(g: &Graph, order: &[Vertex], w: &str) -> CompoundSeparation {
        let p = order.iter().position(|v| v.as_str() == w).unwrap();
        let a: BTreeSet<Vertex> = order[..=p].iter().cloned().collect();
        let b: BTreeSet<Vertex> = order[p..].iter().cloned().collect();
        CompoundSeparation::new(g, a, b).unwrap()
    }

    #[test]
    fn three_apexes_of_fourth_halved_farey() {
        let f = halved_farey(4);
        let order = f.order().to_vec();
        let n = order.len();
        let names = [order[n / 4].clone(), order[n / 2].clone(), order[3 * n / 4].clone()];
        let seps: Vec<_> = names
            .iter()
            .map(|w| apex_separation(f.graph(), &order, w.as_str()))
            .collect();
        let out = wild_separations_to_grainline(f.graph(), f.x(), f.y(), &seps).unwrap();
        assert_eq!(out.grain_line.order().len(), 5);
        assert!(check_grain_line(&out.grain_line).is_valid());
        assert!(verify_immersion(&out.immersion).is_valid());
    }

    #[test]
    fn no_separators_gives_single_path() {
        let f = halved_farey(2);
        let out = wild_separations_to_grainline(f.graph(), f.x(), f.y(), &[]).unwrap();
        assert_eq!(out.grain_line.order().len(), 2);
        assert_eq!(out.grain_line.paths().len(), 1);
    }

    #[test]
    fn duplicate_separator_rejected() {
        let f = halved_farey(3);
        let order = f.order().to_vec();
        let s = apex_separation(f.graph(), &order, "1/0/1");
        let err = wild_separations_to_grainline(f.graph(), f.x(), f.y(), &[s.clone(), s]).unwrap_err();
        assert!(err.to_string().contains("twice"));
    }
}
