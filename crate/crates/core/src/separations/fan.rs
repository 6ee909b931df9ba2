use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{small_cut, CompoundSeparation};
use crate::error::{invalid, precondition, Result};
use crate::graph::flow::FlowNetwork;
use crate::graph::{Edge, Graph, Indexed, Path, Vertex};

/// `sep` separates `u` and `v`, and no separation whose separator is a
/// proper subset of `sep`'s does so with at most as many cross edges.
pub fn separates_minimally(g: &Graph, sep: &CompoundSeparation, u: &Vertex, v: &Vertex) -> Result<bool> {
    sep.validate(g)?;
    if !sep.separates(u, v) {
        return Ok(false);
    }
    let idx = Indexed::new(g);
    let (ui, vi) = (idx.index(u).unwrap(), idx.index(v).unwrap());
    let f = sep.cross().len();
    let s: Vec<usize> = sep.separator().iter().map(|w| idx.index(w).unwrap()).collect();
    for k in 0..s.len() {
        for sub in s.iter().copied().combinations(k) {
            let mut blocked = vec![false; idx.len()];
            for w in sub {
                blocked[w] = true;
            }
            if small_cut(&idx, &blocked, ui, vi, f).is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanReport {
    /// Pairwise edge-disjoint paths from `u` to separator vertices inside
    /// `G[A]`, each meeting the separator only at its end.
    pub paths: Vec<Path>,
    pub quota: usize,
    /// Paths found per separator vertex.
    pub per_separator: BTreeMap<Vertex, usize>,
    /// Every separator vertex reached its quota.
    pub complete: bool,
    /// The vertex `v` that `sep` separates from `u` minimally.
    pub witness: Vertex,
}

/// For each separator vertex `w` in turn, up to `quota` edge-disjoint
/// `u`–`w` paths in `G[A] − (S ∖ {w})` avoiding edges already used.
pub fn u_to_separator_fan(g: &Graph, sep: &CompoundSeparation, u: &Vertex, quota: usize) -> Result<FanReport> {
    sep.validate(g)?;
    if !sep.a_only().contains(u) {
        return Err(invalid(format!("`{u}` is not in A ∖ B")));
    }
    let mut witness = None;
    for v in sep.b_only() {
        if separates_minimally(g, sep, u, &v)? {
            witness = Some(v);
            break;
        }
    }
    let Some(witness) = witness else {
        return Err(precondition(format!(
            "the separation does not separate `{u}` minimally from any vertex"
        )));
    };

    let side = g.induced_subgraph(sep.a())?;
    let idx = Indexed::new(&side);
    let ui = idx.index(u).unwrap();
    let mut used: BTreeSet<Edge> = BTreeSet::new();
    let mut paths = Vec::new();
    let mut per_separator = BTreeMap::new();
    for w in sep.separator() {
        let wi = idx.index(w).unwrap();
        let mut blocked = vec![false; idx.len()];
        for other in sep.separator().iter().filter(|o| *o != w) {
            blocked[idx.index(other).unwrap()] = true;
        }
        let mut net = FlowNetwork::from_indexed(&idx, &blocked, |a, b| {
            used.contains(&Edge::new(idx.name(a).clone(), idx.name(b).clone()))
        });
        let got = if quota == 0 {
            0
        } else {
            net.max_flow(ui, wi, quota as i64) as usize
        };
        if got > 0 {
            for p in net.decompose(ui, wi) {
                let path = Path::from_vec_unchecked(p.into_iter().map(|i| idx.name(i).clone()).collect());
                used.extend(path.edges());
                paths.push(path);
            }
        }
        per_separator.insert(w.clone(), got);
    }
    Ok(FanReport {
        complete: per_separator.values().all(|&n| n >= quota),
        paths,
        quota,
        per_separator,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::halved_farey;
    use crate::separations::find_compound_separation;

    #[test]
    fn apex_fan_in_fourth_halved_farey() {
        let g = halved_farey(4).graph().clone();
        let sep = find_compound_separation(&g, &"x".into(), &"y".into(), 1, 1)
            .unwrap()
            .unwrap();
        assert!(sep.is_unitary());
        let sep = if sep.a().contains(&Vertex::new("x")) {
            sep
        } else {
            sep.flipped()
        };
        let fan = u_to_separator_fan(&g, &sep, &"x".into(), 2).unwrap();
        assert!(fan.complete);
        assert_eq!(fan.paths.len(), 2);
        let empty = u_to_separator_fan(&g, &sep, &"x".into(), 0).unwrap();
        assert!(empty.paths.is_empty());
    }

    #[test]
    fn single_edge_gives_partial_fan() {
        // u hangs off w by one edge; w joins a triangle on the other side.
        let g = Graph::from_edges([("u", "w"), ("w", "p"), ("w", "q"), ("p", "q"), ("u", "r"), ("r", "p")]).unwrap();
        let a: BTreeSet<Vertex> = ["u", "r", "w"].iter().map(|s| Vertex::new(*s)).collect();
        let b: BTreeSet<Vertex> = ["w", "p", "q"].iter().map(|s| Vertex::new(*s)).collect();
        let sep = CompoundSeparation::new(&g, a, b).unwrap();
        let fan = u_to_separator_fan(&g, &sep, &"u".into(), 2).unwrap();
        assert!(!fan.complete);
        assert_eq!(fan.per_separator[&Vertex::new("w")], 1);
    }
}
