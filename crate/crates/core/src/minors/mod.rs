//! Topological-minor search and the diving machinery that locates deep
//! segments of one grain line inside another.

mod dive;
mod experiment;
mod projection;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::embed::{self, Mode, Outcome};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Path, Vertex};
use crate::io::{resolve_route_keys, route_keys};

pub use dive::{check_dive_trace, dive, first_dive, DiveTrace, Orientation};
pub use experiment::{theorem31_experiment, ExperimentReport, FamilyOutcome};
pub use projection::{almost_subgraph_depth, interval_projection, DepthReport, ProjectionReport};

/// Result of an exhaustive search that may run out of budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "model", rename_all = "snake_case")]
pub enum SearchOutcome<M> {
    Found(M),
    /// The search finished without a model.
    Absent,
    /// The node budget ran out first.
    Unknown,
}

impl<M> SearchOutcome<M> {
    pub fn found(&self) -> Option<&M> {
        match self {
            SearchOutcome::Found(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, SearchOutcome::Absent)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, SearchOutcome::Unknown)
    }

    pub fn status(&self) -> &'static str {
        match self {
            SearchOutcome::Found(_) => "found",
            SearchOutcome::Absent => "absent",
            SearchOutcome::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of search nodes (branch placements plus route steps).
    pub budget: u64,
    /// Optional per-pattern-vertex restriction of branch images.
    pub branch_candidates: Option<BTreeMap<Vertex, BTreeSet<Vertex>>>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: 10_000_000,
            branch_candidates: None,
        }
    }
}

impl SearchOptions {
    pub fn with_budget(budget: u64) -> Self {
        SearchOptions {
            budget,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport<M> {
    pub outcome: SearchOutcome<M>,
    pub nodes: u64,
}

pub(crate) fn run_search(
    pattern: &Graph,
    host: &Graph,
    mode: Mode,
    options: &SearchOptions,
) -> (SearchOutcome<embed::Embedding>, u64) {
    let (out, nodes) = embed::search(pattern, host, mode, options.budget, options.branch_candidates.as_ref());
    let out = match out {
        Outcome::Found(e) => SearchOutcome::Found(e),
        Outcome::Absent => SearchOutcome::Absent,
        Outcome::Unknown => SearchOutcome::Unknown,
    };
    (out, nodes)
}

/// A subdivision of `pattern` in `host`: branch vertices plus internally
/// disjoint routes that avoid every branch vertex internally.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub struct SubdivisionModel {
    pub pattern: Graph,
    pub host: Graph,
    pub branch: BTreeMap<Vertex, Vertex>,
    /// Route of each pattern edge, oriented from the image of its smaller end.
    pub routes: BTreeMap<Edge, Path>,
}

#[derive(Serialize, Deserialize)]
struct ModelRepr {
    pattern: Graph,
    host: Graph,
    branch: BTreeMap<Vertex, Vertex>,
    routes: BTreeMap<String, Path>,
}

impl TryFrom<ModelRepr> for SubdivisionModel {
    type Error = Error;
    fn try_from(r: ModelRepr) -> Result<Self> {
        let routes = resolve_route_keys(&r.pattern, r.routes)?;
        Ok(SubdivisionModel {
            pattern: r.pattern,
            host: r.host,
            branch: r.branch,
            routes,
        })
    }
}

impl From<SubdivisionModel> for ModelRepr {
    fn from(m: SubdivisionModel) -> Self {
        ModelRepr {
            pattern: m.pattern,
            host: m.host,
            branch: m.branch,
            routes: route_keys(m.routes),
        }
    }
}

impl SubdivisionModel {
    /// Every problem with the model; empty when it is a valid subdivision.
    pub fn violations(&self) -> Vec<String> {
        let mut out = crate::immersion::route_shape_violations(&self.pattern, &self.host, &self.branch, &self.routes);
        let images: BTreeSet<&Vertex> = self.branch.values().collect();
        let mut owner: BTreeMap<&Vertex, &Edge> = BTreeMap::new();
        for (e, p) in &self.routes {
            for v in p.inner_vertices() {
                if images.contains(v) {
                    out.push(format!("route of {e} passes through branch vertex `{v}`"));
                }
                if let Some(f) = owner.insert(v, e) {
                    out.push(format!("routes of {f} and {e} share inner vertex `{v}`"));
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// Pattern edges whose route has more than one edge.
    pub fn subdivided_edges(&self) -> BTreeSet<Edge> {
        self.routes
            .iter()
            .filter(|(_, p)| p.len() > 1)
            .map(|(e, _)| e.clone())
            .collect()
    }
}

/// Searches for a subdivision of `pattern` in `host`.
pub fn find_subdivision(pattern: &Graph, host: &Graph, options: &SearchOptions) -> SearchReport<SubdivisionModel> {
    let (out, nodes) = run_search(pattern, host, Mode::Subdivision, options);
    let outcome = match out {
        SearchOutcome::Found(e) => SearchOutcome::Found(SubdivisionModel {
            pattern: pattern.clone(),
            host: host.clone(),
            branch: e.branch,
            routes: e.routes,
        }),
        SearchOutcome::Absent => SearchOutcome::Absent,
        SearchOutcome::Unknown => SearchOutcome::Unknown,
    };
    SearchReport { outcome, nodes }
}
