use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Orientation, SubdivisionModel};
use crate::error::{invalid, Result};
use crate::grainline::{is_well_structured, GrainLine};
use crate::graph::{Edge, Vertex};

/// How the order of an inner grain line sits inside the outer `≤_L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub outer_well_structured: bool,
    /// Vertices of `M` outside `L`.
    pub missing: Vec<Vertex>,
    /// `≤_L`-least and greatest vertex of `M ∩ L`.
    pub hull: Option<(Vertex, Vertex)>,
    /// `L` vertices inside the hull but not in `M`.
    pub gaps: Vec<Vertex>,
    pub is_interval: bool,
    /// `None` when `≤_M` is neither `≤_L` nor its reverse.
    pub orientation: Option<Orientation>,
    pub violations: Vec<String>,
}

/// Checks that `M ⊆ L`, that `M` is an interval of `≤_L`, and that `≤_M`
/// agrees with `≤_L` or its reverse. Failures are reported, not raised.
pub fn interval_projection(outer: &GrainLine, inner: &GrainLine) -> ProjectionReport {
    let mut violations = Vec::new();
    let outer_well_structured = is_well_structured(outer);
    if !outer_well_structured {
        violations.push("outer grain line is not well-structured".to_string());
    }
    let host = outer.host();
    for (n, p) in inner.paths().iter().enumerate() {
        if let Some(e) = p.edges().find(|e| !host.contains_edge(e)) {
            violations.push(format!("edge {e} of Q_{n} is not in the outer graph"));
        }
    }
    let missing: Vec<Vertex> = inner.order().iter().filter(|v| !outer.in_l(v)).cloned().collect();
    if !missing.is_empty() {
        violations.push(format!("{} vertices of M are not in L", missing.len()));
    }
    let positions: Vec<usize> = inner.order().iter().filter_map(|v| outer.l_position(v)).collect();
    let (hull, gaps, is_interval) = match (positions.iter().min(), positions.iter().max()) {
        (Some(&lo), Some(&hi)) => {
            let present: BTreeSet<usize> = positions.iter().copied().collect();
            let gaps: Vec<Vertex> = (lo..=hi)
                .filter(|i| !present.contains(i))
                .map(|i| outer.order()[i].clone())
                .collect();
            let ok = gaps.is_empty() && missing.is_empty();
            (Some((outer.order()[lo].clone(), outer.order()[hi].clone())), gaps, ok)
        }
        _ => (None, Vec::new(), false),
    };
    if !gaps.is_empty() {
        violations.push(format!("M skips {} vertices of L inside its hull", gaps.len()));
    }
    let orientation = if positions.windows(2).all(|w| w[0] < w[1]) {
        Some(Orientation::Same)
    } else if positions.windows(2).all(|w| w[0] > w[1]) {
        Some(Orientation::Reversed)
    } else {
        violations.push("≤_M is neither ≤_L nor its reverse".to_string());
        None
    };
    ProjectionReport {
        outer_well_structured,
        missing,
        hull,
        gaps,
        is_interval,
        orientation,
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthReport {
    /// Least `d` such that no edge of `⋃𝒬_{≥d}` is subdivided, if that is
    /// within the inner horizon.
    pub depth: Option<usize>,
    pub within_horizon: bool,
    /// Subdivided pattern edges with their `𝒬`-depth and route length.
    pub subdivided: Vec<(Edge, usize, usize)>,
}

/// Reads off from a subdivision of `⋃𝒬` in `⋃𝒫` the least depth beyond which
/// every edge of the inner line maps to a single host edge.
pub fn almost_subgraph_depth(outer: &GrainLine, inner: &GrainLine, model: &SubdivisionModel) -> Result<DepthReport> {
    if let Some(v) = model.violations().first() {
        return Err(invalid(format!("model is not a subdivision: {v}")));
    }
    if model.pattern != inner.host() {
        return Err(invalid("model pattern is not the inner grain line's graph"));
    }
    if model.host != outer.host() {
        return Err(invalid("model host is not the outer grain line's graph"));
    }
    let mut subdivided = Vec::new();
    for (e, route) in &model.routes {
        if route.len() > 1 {
            subdivided.push((e.clone(), inner.edge_depth(e)?, route.len()));
        }
    }
    let d = subdivided.iter().map(|(_, k, _)| k + 1).max().unwrap_or(0);
    let within_horizon = d <= inner.horizon();
    Ok(DepthReport {
        depth: within_horizon.then_some(d),
        within_horizon,
        subdivided,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generalised_halved_farey, halved_farey, LengthFunction};
    use crate::grainline::GrainLine;
    use crate::graph::Path;
    use crate::minors::{find_subdivision, SearchOptions};

    #[test]
    fn even_paths_project_onto_everything() {
        let gl = halved_farey(4).grain_line();
        let inner = gl.subsequence(&[0, 2, 4]).unwrap();
        let r = interval_projection(&gl, &inner);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert_eq!(r.orientation, Some(Orientation::Same));
        assert_eq!(r.hull, Some((gl.x().clone(), gl.y().clone())));
    }

    #[test]
    fn reversed_and_degenerate() {
        let gl = halved_farey(3).grain_line();
        let r = interval_projection(&gl, &gl.reversed());
        assert_eq!(r.orientation, Some(Orientation::Reversed));
        let single = GrainLine::new(
            gl.x().clone(),
            gl.y().clone(),
            vec![gl.x().clone(), gl.y().clone()],
            vec![gl.path(0).clone()],
        )
        .unwrap();
        let r = interval_projection(&gl, &single);
        assert_eq!(r.hull, Some((gl.x().clone(), gl.y().clone())));
        assert_eq!(r.orientation, Some(Orientation::Same));
        // The vertices between x and y are gaps at this finite scale.
        assert_eq!(r.gaps.len(), gl.order().len() - 2);
    }

    #[test]
    fn skipped_vertex_is_a_gap() {
        let gl = halved_farey(2).grain_line();
        let order = gl.order().to_vec();
        let inner = GrainLine::new(
            gl.x().clone(),
            gl.y().clone(),
            vec![order[0].clone(), order[2].clone(), order[4].clone()],
            vec![Path::new(vec![order[0].clone(), order[2].clone(), order[4].clone()]).unwrap()],
        )
        .unwrap();
        let r = interval_projection(&gl, &inner);
        assert!(!r.is_interval);
        assert_eq!(r.gaps.len(), 2);
    }

    #[test]
    fn triangle_into_stretched_farey() {
        let lengths = LengthFunction::new(vec![1, 3, 3]).unwrap();
        let host = generalised_halved_farey(&lengths, 2).unwrap().grain_line();
        let tri = halved_farey(1).grain_line();
        let r = find_subdivision(&tri.host(), &host.host(), &SearchOptions::default());
        let model = r.outcome.found().unwrap();
        let d = almost_subgraph_depth(&host, &tri, model).unwrap();
        let expected = model
            .subdivided_edges()
            .iter()
            .map(|e| tri.edge_depth(e).unwrap() + 1)
            .max()
            .unwrap_or(0);
        assert_eq!(d.depth.unwrap_or(usize::MAX).min(expected), expected);
        assert_eq!(d.within_horizon, expected <= 1);
    }

    #[test]
    fn identity_model_has_depth_zero() {
        let gl = halved_farey(2).grain_line();
        let g = gl.host();
        let model = SubdivisionModel {
            pattern: g.clone(),
            host: g.clone(),
            branch: g.vertices().map(|v| (v.clone(), v.clone())).collect(),
            routes: g
                .edges()
                .map(|e| (e.clone(), Path::new(vec![e.low().clone(), e.high().clone()]).unwrap()))
                .collect(),
        };
        assert_eq!(almost_subgraph_depth(&gl, &gl, &model).unwrap().depth, Some(0));
    }
}
