use serde::{Deserialize, Serialize};

use super::{find_subdivision, SearchOptions, SubdivisionModel};
use crate::error::Result;
use crate::generators::{adversarial_length_function, generalised_halved_farey, LengthFunction};
use crate::grainline::GrainLine;
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyOutcome {
    pub index: usize,
    /// `found`, `absent` or `unknown`.
    pub status: String,
    pub nodes: u64,
    pub pattern_vertices: usize,
    pub pattern_edges: usize,
    pub model: Option<SubdivisionModel>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub lengths: LengthFunction,
    pub host_vertices: usize,
    pub host_edges: usize,
    pub families: Vec<FamilyOutcome>,
    /// No search ran out of budget.
    pub exhaustive: bool,
}

/// Builds the adversarial length function for `families` up to `horizon`,
/// the generalised halved Farey graph of that order, and searches it for a
/// subdivision of each family's graph on `Q_0, …, Q_{2·horizon}`.
pub fn theorem31_experiment(
    families: &[GrainLine],
    horizon: usize,
    options: &SearchOptions,
) -> Result<ExperimentReport> {
    let lengths = adversarial_length_function(families, horizon)?;
    let host = generalised_halved_farey(&lengths, horizon)?;
    let host = host.graph();
    let mut out = Vec::with_capacity(families.len());
    for (index, f) in families.iter().enumerate() {
        let mut pattern = Graph::new();
        for p in &f.paths()[..=2 * horizon] {
            for e in p.edges() {
                pattern.insert_edge(e);
            }
        }
        let r = find_subdivision(&pattern, host, options);
        out.push(FamilyOutcome {
            index,
            status: r.outcome.status().to_string(),
            nodes: r.nodes,
            pattern_vertices: pattern.vertex_count(),
            pattern_edges: pattern.edge_count(),
            model: r.outcome.found().cloned(),
        });
    }
    Ok(ExperimentReport {
        exhaustive: out.iter().all(|f| f.status != "unknown"),
        lengths,
        host_vertices: host.vertex_count(),
        host_edges: host.edge_count(),
        families: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::halved_farey;
    use crate::graph::Path;

    #[test]
    fn empty_family_list_rejected() {
        assert!(theorem31_experiment(&[], 1, &SearchOptions::default()).is_err());
    }

    #[test]
    fn single_edge_is_found() {
        let edge = GrainLine::new(
            "x".into(),
            "y".into(),
            vec!["x".into(), "y".into()],
            vec![Path::from_names(&["x", "y"])],
        )
        .unwrap();
        let r = theorem31_experiment(&[edge], 0, &SearchOptions::default()).unwrap();
        assert_eq!(r.families[0].status, "found");
    }

    #[test]
    fn halved_farey_is_absent() {
        let r = theorem31_experiment(&[halved_farey(4).grain_line()], 2, &SearchOptions::default()).unwrap();
        assert_eq!(r.families[0].status, "absent");
        assert!(r.exhaustive);
    }
}
