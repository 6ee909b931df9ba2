use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{check_grain_line, GrainLine};
use crate::error::{invalid, precondition, Result};
use crate::graph::{Edge, Vertex};

/// Every segment `u P_d v` meets `L` only inside `[u, v]_L`.
pub fn is_well_structured(gl: &GrainLine) -> bool {
    (1..=gl.horizon()).all(|d| {
        let Ok(segments) = gl.p_segments(d) else {
            return false;
        };
        segments.iter().all(|s| {
            let lo = gl.l_position(&s.u).unwrap();
            let hi = gl.l_position(&s.v).unwrap();
            s.path
                .vertices()
                .iter()
                .filter_map(|w| gl.l_position(w))
                .all(|p| lo <= p && p <= hi)
        })
    })
}

/// Finite reading of "free": every vertex of `⋃𝒫` belongs to `L`.
pub fn is_free(gl: &GrainLine) -> bool {
    gl.paths.iter().flat_map(|p| p.vertices()).all(|v| gl.in_l(v))
}

/// For each `n ≥ 1` and consecutive `u <_L v` in `L_{<n}`, the path `u P_n v`
/// has an internal vertex in `(u, v)_L`. Consecutive pairs suffice: a witness
/// for a pair also serves every wider pair around it.
pub fn is_wildly_presented(gl: &GrainLine) -> bool {
    (1..=gl.horizon()).all(|n| {
        gl.l_below(n).windows(2).all(|w| {
            let (lo, hi) = (gl.l_position(&w[0]).unwrap(), gl.l_position(&w[1]).unwrap());
            let (Some(i), Some(j)) = (gl.position_on_path(n, &w[0]), gl.position_on_path(n, &w[1])) else {
                return false;
            };
            let (i, j) = (i.min(j), i.max(j));
            gl.paths[n].vertices()[i + 1..j]
                .iter()
                .filter_map(|v| gl.l_position(v))
                .any(|p| lo < p && p < hi)
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub depth: usize,
    pub gaps: usize,
    /// Consecutive pairs of `L_{<depth}` with no `L` vertex between them.
    pub empty: Vec<(Vertex, Vertex)>,
}

/// Whether `L` keeps filling in its gaps up to the horizon. This is a
/// diagnostic only: density of the full order is not decidable from a
/// finite prefix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub levels: Vec<GapReport>,
    pub dense_at_horizon: bool,
}

pub fn density_report(gl: &GrainLine) -> DensityReport {
    let levels: Vec<GapReport> = (1..=gl.horizon())
        .map(|n| {
            let below = gl.l_below(n);
            let empty = below
                .windows(2)
                .filter(|w| gl.l_position(&w[1]).unwrap() == gl.l_position(&w[0]).unwrap() + 1)
                .map(|w| (w[0].clone(), w[1].clone()))
                .collect();
            GapReport {
                depth: n,
                gaps: below.len().saturating_sub(1),
                empty,
            }
        })
        .collect();
    let dense_at_horizon = levels.iter().all(|l| l.empty.is_empty());
    DensityReport {
        levels,
        dense_at_horizon,
    }
}

/// Outcome of deleting `v` and every edge of depth at most `depth(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSeparation {
    pub vertex: Vertex,
    pub depth: usize,
    pub removed_edges: BTreeSet<Edge>,
    /// `L ∩ [x, v)_L`
    pub left: BTreeSet<Vertex>,
    /// `L ∩ (v, y]_L`
    pub right: BTreeSet<Vertex>,
    /// No path joins `left` and `right` after the deletion.
    pub separates: bool,
}

/// Deletes `v` with all edges of depth `≤ depth(v)` from `⋃𝒫` and tests by
/// reachability whether the two `L`-intervals around `v` fall apart.
pub fn separation_at_vertex(gl: &GrainLine, v: &Vertex) -> Result<VertexSeparation> {
    if v == gl.x() || v == gl.y() {
        return Err(precondition(format!("`{v}` is an endpoint of the grain line")));
    }
    let Some(pos) = gl.l_position(v) else {
        return Err(invalid(format!("`{v}` is not in L")));
    };
    if let Some(bad) = check_grain_line(gl).violations.first() {
        return Err(precondition(format!("not a grain line: {bad}")));
    }
    if !is_well_structured(gl) {
        return Err(precondition("grain line is not well-structured"));
    }
    let depth = gl.vertex_depth(v)?;
    let removed_edges = gl.edges_up_to_depth(depth);
    let left: BTreeSet<Vertex> = gl.order()[..pos].iter().cloned().collect();
    let right: BTreeSet<Vertex> = gl.order()[pos + 1..].iter().cloned().collect();

    let mut host = gl.host();
    host.remove_vertex(v);
    for e in &removed_edges {
        host.remove_edge(e);
    }
    let mut seen: BTreeSet<Vertex> = left.clone();
    let mut queue: VecDeque<Vertex> = left.iter().cloned().collect();
    let mut separates = true;
    while let Some(a) = queue.pop_front() {
        if right.contains(&a) {
            separates = false;
            break;
        }
        for b in host.neighbors(&a) {
            if seen.insert(b.clone()) {
                queue.push_back(b.clone());
            }
        }
    }
    Ok(VertexSeparation {
        vertex: v.clone(),
        depth,
        removed_edges,
        left,
        right,
        separates,
    })
}
