use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GrainLine;
use crate::error::{invalid, Result};
use crate::graph::{Edge, Vertex};

/// One broken axiom, with the vertices or edges that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `min L` must be `x` and `max L` must be `y`.
    Endpoints {
        min: Option<Vertex>,
        max: Option<Vertex>,
    },
    /// A path does not run from `x` to `y`.
    PathEnds {
        path: usize,
        start: Vertex,
        end: Vertex,
    },
    SharedEdge {
        edge: Edge,
        first: usize,
        second: usize,
    },
    /// An `L` vertex that lies on no path.
    Unplaced {
        vertex: Vertex,
    },
    /// GL1: an `L` vertex missing from a path after its depth.
    Persistence {
        vertex: Vertex,
        depth: usize,
        missing_from: usize,
    },
    /// GL2: a vertex outside `L` on more than one path.
    Shared {
        vertex: Vertex,
        paths: Vec<usize>,
    },
    /// GL3: `earlier <_L later`, but `P_path` visits `later` first.
    Order {
        path: usize,
        earlier: Vertex,
        later: Vertex,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Endpoints { min, max } => write!(
                f,
                "endpoints: L runs from {} to {}",
                min.as_ref().map_or("nothing", Vertex::as_str),
                max.as_ref().map_or("nothing", Vertex::as_str)
            ),
            Violation::PathEnds { path, start, end } => {
                write!(f, "P_{path} runs from `{start}` to `{end}`")
            }
            Violation::SharedEdge { edge, first, second } => {
                write!(f, "edge {edge} used by P_{first} and P_{second}")
            }
            Violation::Unplaced { vertex } => write!(f, "GL1: `{vertex}` is in L but on no path"),
            Violation::Persistence {
                vertex,
                depth,
                missing_from,
            } => write!(
                f,
                "GL1: `{vertex}` has depth {depth} but is missing from P_{missing_from}"
            ),
            Violation::Shared { vertex, paths } => {
                write!(f, "GL2: `{vertex}` is outside L but lies on paths {paths:?}")
            }
            Violation::Order { path, earlier, later } => {
                write!(f, "GL3: `{earlier}` <_L `{later}` but P_{path} visits `{later}` first")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrainLineReport {
    pub violations: Vec<Violation>,
}

impl GrainLineReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every violation of the finite grain-line axioms.
///
/// GL1 is checked in its forward direction: every `L` vertex lies on all
/// paths from its depth up to the horizon. (The converse would force the
/// interior of the last path into `L`.)
pub fn check_grain_line(gl: &GrainLine) -> GrainLineReport {
    let mut violations = Vec::new();
    let m = gl.horizon();

    let min = gl.order.first().cloned();
    let max = gl.order.last().cloned();
    if min.as_ref() != Some(&gl.x) || max.as_ref() != Some(&gl.y) {
        violations.push(Violation::Endpoints { min, max });
    }

    for (n, p) in gl.paths.iter().enumerate() {
        if p.start() != &gl.x || p.end() != &gl.y {
            violations.push(Violation::PathEnds {
                path: n,
                start: p.start().clone(),
                end: p.end().clone(),
            });
        }
    }

    let mut owner: HashMap<Edge, usize> = HashMap::new();
    for (n, p) in gl.paths.iter().enumerate() {
        for e in p.edges() {
            if let Some(&first) = owner.get(&e) {
                violations.push(Violation::SharedEdge {
                    edge: e,
                    first,
                    second: n,
                });
            } else {
                owner.insert(e, n);
            }
        }
    }

    for v in &gl.order {
        let occ = gl.occurrences(v);
        let Some(&depth) = occ.first() else {
            violations.push(Violation::Unplaced { vertex: v.clone() });
            continue;
        };
        if occ.len() != m + 1 - depth {
            let missing = (depth..=m).find(|n| !gl.on_path(*n, v)).expect("a gap exists");
            violations.push(Violation::Persistence {
                vertex: v.clone(),
                depth,
                missing_from: missing,
            });
        }
    }

    let mut outside: Vec<(&Vertex, &Vec<usize>)> = gl
        .index
        .occurrences
        .iter()
        .filter(|(v, occ)| occ.len() > 1 && !gl.in_l(v))
        .collect();
    outside.sort();
    for (v, occ) in outside {
        violations.push(Violation::Shared {
            vertex: v.clone(),
            paths: occ.clone(),
        });
    }

    for n in 1..=m {
        let below = gl.l_below(n);
        for w in below.windows(2) {
            let (Some(i), Some(j)) = (gl.position_on_path(n, &w[0]), gl.position_on_path(n, &w[1])) else {
                continue; // reported as a GL1 violation
            };
            if i > j {
                violations.push(Violation::Order {
                    path: n,
                    earlier: w[0].clone(),
                    later: w[1].clone(),
                });
            }
        }
    }

    GrainLineReport { violations }
}

/// The strengthened axioms satisfied by generalised halved Farey graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeAxioms {
    /// Every path vertex is in `L`.
    pub gl2_prime: bool,
    /// `≤_L` is the union of the path orders.
    pub gl3_prime: bool,
}

/// Evaluates the primed axioms on a valid grain line.
///
/// Every `L` vertex lies on the last path, so the union of the path orders
/// covers all pairs; it equals `≤_L` exactly when every path visits its
/// `L` vertices in `≤_L` order.
pub fn check_prime_axioms(gl: &GrainLine) -> Result<PrimeAxioms> {
    let report = check_grain_line(gl);
    if let Some(v) = report.violations.first() {
        return Err(invalid(format!("not a grain line: {v}")));
    }
    let gl2_prime = gl.index.occurrences.keys().all(|v| gl.in_l(v));
    let gl3_prime = gl.paths.iter().all(|p| {
        let mut last = None;
        p.vertices().iter().filter_map(|v| gl.l_position(v)).all(|pos| {
            let ok = last.is_none_or(|l| l < pos);
            last = Some(pos);
            ok
        })
    });
    Ok(PrimeAxioms { gl2_prime, gl3_prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Path;

    fn gl(order: &[&str], paths: &[&[&str]]) -> GrainLine {
        GrainLine::new(
            "x".into(),
            "y".into(),
            order.iter().map(|s| Vertex::new(*s)).collect(),
            paths.iter().map(|p| Path::from_names(p)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn disjoint_pair_is_valid() {
        let g = gl(&["x", "y"], &[&["x", "a", "y"], &["x", "b", "y"]]);
        assert!(check_grain_line(&g).is_valid());
    }

    #[test]
    fn three_long_paths_prime_axioms() {
        let g = gl(&["x", "y"], &[&["x", "a", "y"], &["x", "b", "y"], &["x", "c", "y"]]);
        let p = check_prime_axioms(&g).unwrap();
        assert_eq!((p.gl2_prime, p.gl3_prime), (false, true));
    }

    #[test]
    fn order_violation_is_witnessed() {
        // a and b lie on both paths; L lists them the other way round.
        let g = gl(
            &["x", "b", "a", "y"],
            &[&["x", "a", "b", "y"], &["x", "c", "a", "d", "b", "e", "y"]],
        );
        let report = check_grain_line(&g);
        assert!(report.violations.iter().any(|v| matches!(v, Violation::Order { .. })));
    }

    #[test]
    fn shared_outside_vertex_reported() {
        let g = gl(&["x", "y"], &[&["x", "a", "y"], &["x", "a", "b", "y"]]);
        let report = check_grain_line(&g);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Shared { vertex, .. } if vertex.as_str() == "a")));
    }

    #[test]
    fn persistence_gap_reported() {
        let g = gl(
            &["x", "a", "y"],
            &[&["x", "a", "y"], &["x", "b", "y"], &["x", "c", "a", "y"]],
        );
        let report = check_grain_line(&g);
        assert!(report.violations.contains(&Violation::Persistence {
            vertex: "a".into(),
            depth: 0,
            missing_from: 1
        }));
    }
}
