//! Immersion models, their verification, brute-force search, the halved
//! Farey construction inside wildly presented grain lines, and cut-counting
//! certificates that rule immersions out.

mod bounds;
mod farey;
mod wild;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::embed::Mode;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Path, Vertex};
use crate::io::{resolve_route_keys, route_keys};
use crate::minors::{run_search, SearchOptions, SearchOutcome, SearchReport};

pub use bounds::{
    complete_pattern, cut_bound_complete, cut_bound_complete_in_halved, cut_bound_farey_in_halved, BranchSlack,
    CompleteBound, HalvedBound, PairSlack,
};
pub use farey::{halved_farey_branch_sets, immerse_halved_farey};
pub use wild::{wild_separations_to_grainline, WildGrainLine};

/// `pattern` immersed in `host`: an injective branch map and one route per
/// pattern edge, pairwise edge-disjoint. Strong models also keep every
/// route's interior clear of branch vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub struct ImmersionModel {
    pub pattern: Graph,
    pub host: Graph,
    pub branch: BTreeMap<Vertex, Vertex>,
    /// Route of each pattern edge, oriented from the image of its smaller end.
    pub routes: BTreeMap<Edge, Path>,
    pub strong: bool,
}

#[derive(Serialize, Deserialize)]
struct ModelRepr {
    pattern: Graph,
    host: Graph,
    branch: BTreeMap<Vertex, Vertex>,
    routes: BTreeMap<String, Path>,
    strong: bool,
}

impl TryFrom<ModelRepr> for ImmersionModel {
    type Error = Error;
    fn try_from(r: ModelRepr) -> Result<Self> {
        let routes = resolve_route_keys(&r.pattern, r.routes)?;
        Ok(ImmersionModel {
            pattern: r.pattern,
            host: r.host,
            branch: r.branch,
            routes,
            strong: r.strong,
        })
    }
}

impl From<ImmersionModel> for ModelRepr {
    fn from(m: ImmersionModel) -> Self {
        ModelRepr {
            pattern: m.pattern,
            host: m.host,
            branch: m.branch,
            routes: route_keys(m.routes),
            strong: m.strong,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ImmersionViolation {
    /// A pattern vertex without an image, or an image outside the host.
    BadBranch {
        vertex: Vertex,
        image: Option<Vertex>,
    },
    /// Two pattern vertices share an image.
    NotInjective {
        first: Vertex,
        second: Vertex,
        image: Vertex,
    },
    MissingRoute {
        edge: Edge,
    },
    /// A route for a pair that is not a pattern edge.
    ExtraRoute {
        edge: Edge,
    },
    /// A route that does not join the images of its edge's ends.
    WrongEnds {
        edge: Edge,
        start: Vertex,
        end: Vertex,
    },
    /// A route step that is not a host edge.
    NotInHost {
        edge: Edge,
        step: Edge,
    },
    /// Two routes use the same host edge.
    SharedEdge {
        step: Edge,
        first: Edge,
        second: Edge,
    },
    /// A strong route passes through a branch vertex.
    ThroughBranch {
        edge: Edge,
        vertex: Vertex,
    },
}

impl fmt::Display for ImmersionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ImmersionViolation::*;
        match self {
            BadBranch { vertex, image: None } => write!(f, "`{vertex}` has no branch vertex"),
            BadBranch { vertex, image: Some(i) } => write!(f, "`{vertex}` maps to `{i}`, which is not a host vertex"),
            NotInjective { first, second, image } => {
                write!(f, "`{first}` and `{second}` both map to `{image}`")
            }
            MissingRoute { edge } => write!(f, "no route for {edge}"),
            ExtraRoute { edge } => write!(f, "route given for non-edge {edge}"),
            WrongEnds { edge, start, end } => {
                write!(f, "route of {edge} runs from `{start}` to `{end}`")
            }
            NotInHost { edge, step } => write!(f, "route of {edge} uses {step}, not a host edge"),
            SharedEdge { step, first, second } => {
                write!(f, "routes of {first} and {second} both use {step}")
            }
            ThroughBranch { edge, vertex } => {
                write!(f, "route of {edge} passes through branch vertex `{vertex}`")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImmersionReport {
    pub violations: Vec<ImmersionViolation>,
}

impl ImmersionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks branch map, route endpoints and host membership; shared with the
/// subdivision model.
pub(crate) fn shape_violations(
    pattern: &Graph,
    host: &Graph,
    branch: &BTreeMap<Vertex, Vertex>,
    routes: &BTreeMap<Edge, Path>,
) -> Vec<ImmersionViolation> {
    use ImmersionViolation::*;
    let mut out = Vec::new();
    let mut seen: BTreeMap<&Vertex, &Vertex> = BTreeMap::new();
    for v in pattern.vertices() {
        match branch.get(v) {
            Some(img) if host.has_vertex(img) => {
                if let Some(first) = seen.insert(img, v) {
                    out.push(NotInjective {
                        first: first.clone(),
                        second: v.clone(),
                        image: img.clone(),
                    });
                }
            }
            other => out.push(BadBranch {
                vertex: v.clone(),
                image: other.cloned(),
            }),
        }
    }
    for e in pattern.edges() {
        if !routes.contains_key(&e) {
            out.push(MissingRoute { edge: e });
        }
    }
    for (e, p) in routes {
        if !pattern.contains_edge(e) {
            out.push(ExtraRoute { edge: e.clone() });
            continue;
        }
        let (a, b) = (branch.get(e.low()), branch.get(e.high()));
        let ends_ok = match (a, b) {
            (Some(a), Some(b)) => (p.start() == a && p.end() == b) || (p.start() == b && p.end() == a),
            _ => false,
        };
        if !ends_ok {
            out.push(WrongEnds {
                edge: e.clone(),
                start: p.start().clone(),
                end: p.end().clone(),
            });
        }
        for step in p.edges() {
            if !host.contains_edge(&step) {
                out.push(NotInHost { edge: e.clone(), step });
            }
        }
    }
    out
}

pub(crate) fn route_shape_violations(
    pattern: &Graph,
    host: &Graph,
    branch: &BTreeMap<Vertex, Vertex>,
    routes: &BTreeMap<Edge, Path>,
) -> Vec<String> {
    shape_violations(pattern, host, branch, routes)
        .iter()
        .map(ToString::to_string)
        .collect()
}

/// Lists every violated immersion condition, with witnesses.
pub fn verify_immersion(model: &ImmersionModel) -> ImmersionReport {
    let mut violations = shape_violations(&model.pattern, &model.host, &model.branch, &model.routes);
    let mut owner: BTreeMap<Edge, &Edge> = BTreeMap::new();
    for (e, p) in &model.routes {
        for step in p.edges() {
            if let Some(first) = owner.get(&step) {
                violations.push(ImmersionViolation::SharedEdge {
                    step: step.clone(),
                    first: (*first).clone(),
                    second: e.clone(),
                });
            } else {
                owner.insert(step, e);
            }
        }
    }
    if model.strong {
        let images: BTreeSet<&Vertex> = model.branch.values().collect();
        for (e, p) in &model.routes {
            for v in p.inner_vertices() {
                if images.contains(v) {
                    violations.push(ImmersionViolation::ThroughBranch {
                        edge: e.clone(),
                        vertex: v.clone(),
                    });
                }
            }
        }
    }
    ImmersionReport { violations }
}

/// Exhaustive search for a (strong or weak) immersion of `pattern` in
/// `host`. `Absent` is only reported when the search completed.
pub fn find_immersion_bruteforce(
    pattern: &Graph,
    host: &Graph,
    strong: bool,
    options: &SearchOptions,
) -> SearchReport<ImmersionModel> {
    let mode = if strong { Mode::Strong } else { Mode::Weak };
    let (out, nodes) = run_search(pattern, host, mode, options);
    let outcome = match out {
        SearchOutcome::Found(e) => SearchOutcome::Found(ImmersionModel {
            pattern: pattern.clone(),
            host: host.clone(),
            branch: e.branch,
            routes: e.routes,
            strong,
        }),
        SearchOutcome::Absent => SearchOutcome::Absent,
        SearchOutcome::Unknown => SearchOutcome::Unknown,
    };
    SearchReport { outcome, nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::halved_farey;

    fn identity(g: &Graph) -> ImmersionModel {
        ImmersionModel {
            pattern: g.clone(),
            host: g.clone(),
            branch: g.vertices().map(|v| (v.clone(), v.clone())).collect(),
            routes: g
                .edges()
                .map(|e| {
                    let p = Path::new(vec![e.low().clone(), e.high().clone()]).unwrap();
                    (e, p)
                })
                .collect(),
            strong: true,
        }
    }

    #[test]
    fn identity_is_strong() {
        let g = halved_farey(2).graph().clone();
        assert!(verify_immersion(&identity(&g)).is_valid());
    }

    #[test]
    fn shared_edge_is_witnessed() {
        let host = Graph::from_edges([("a", "b"), ("b", "c"), ("c", "d")]).unwrap();
        let pattern = Graph::from_edges([("p", "q"), ("p", "r")]).unwrap();
        let m = ImmersionModel {
            pattern,
            host,
            branch: [("p", "a"), ("q", "c"), ("r", "d")]
                .iter()
                .map(|(a, b)| (Vertex::new(*a), Vertex::new(*b)))
                .collect(),
            routes: [
                (Edge::new("p", "q"), Path::from_names(&["a", "b", "c"])),
                (Edge::new("p", "r"), Path::from_names(&["a", "b", "c", "d"])),
            ]
            .into_iter()
            .collect(),
            strong: false,
        };
        let r = verify_immersion(&m);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, ImmersionViolation::SharedEdge { .. })));
    }

    #[test]
    fn brute_force_small_cases() {
        let k3 = complete_pattern(3);
        let f1 = halved_farey(1);
        let r = find_immersion_bruteforce(&k3, f1.graph(), true, &SearchOptions::default());
        assert!(verify_immersion(r.outcome.found().unwrap()).is_valid());
        let k4 = complete_pattern(4);
        let r = find_immersion_bruteforce(&k4, f1.graph(), true, &SearchOptions::default());
        assert!(r.outcome.is_absent());
    }

    #[test]
    fn model_json_round_trip() {
        let m = identity(halved_farey(1).graph());
        let s = serde_json::to_string(&m).unwrap();
        let back: ImmersionModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
