use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::edge_blocks;
use crate::error::{invalid, Error, Result};
use crate::graph::flow::FlowNetwork;
use crate::graph::{loop_erase, Edge, Graph, Indexed, Path, Vertex};
use crate::immersion::{complete_pattern, verify_immersion, ImmersionModel};

/// Block combinations tried per hub before giving up.
const MAX_COMBINATIONS: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueOutcome {
    pub model: Option<ImmersionModel>,
    /// Edge-blocks of `G − X`.
    pub blocks: Vec<BTreeSet<Vertex>>,
    /// Vertex of `X` all routes pass through.
    pub hub: Option<Vertex>,
    pub diagnostic: Option<String>,
}

/// A strong immersion of `K^t` with one branch vertex in each of `t`
/// edge-blocks of `G − X` (threshold `c`), every route running through a
/// single hub `x ∈ X`. Each branch vertex sends `t − 1` edge-disjoint paths
/// to the hub, found together as one flow, and route `ij` joins the paths of
/// `i` and `j`.
pub fn complete_immersion_from_blocks(g: &Graph, x: &BTreeSet<Vertex>, t: usize, c: usize) -> Result<CliqueOutcome> {
    if t < 2 {
        return Err(invalid("clique size must be at least 2"));
    }
    for v in x {
        g.require_vertex(v)?;
    }
    let rest = g.without_vertices(x.iter());
    let blocks = edge_blocks(&rest, c);
    let none = |blocks: Vec<BTreeSet<Vertex>>, msg: String| CliqueOutcome {
        model: None,
        blocks,
        hub: None,
        diagnostic: Some(msg),
    };
    if blocks.len() < t {
        let msg = format!(
            "G − X has {} edge-blocks at threshold {c}, fewer than {t}",
            blocks.len()
        );
        return Ok(none(blocks, msg));
    }
    let pattern = complete_pattern(t);

    if t == 2 {
        let a = blocks[0].iter().next().unwrap();
        let b = blocks[1].iter().next().unwrap();
        let Some(route) = bfs_path(g, a, b) else {
            let msg = format!("`{a}` and `{b}` are not connected");
            return Ok(none(blocks, msg));
        };
        let model = ImmersionModel {
            pattern,
            host: g.clone(),
            branch: [("0".into(), a.clone()), ("1".into(), b.clone())].into_iter().collect(),
            routes: [(Edge::new("0", "1"), route)].into_iter().collect(),
            strong: true,
        };
        return finish(model, blocks, None);
    }

    let idx = Indexed::new(g);
    let mut last_failure = String::from("no vertex of X has enough edge-disjoint paths to the blocks");
    for hub in x {
        let h = idx.index(hub).unwrap();
        let mut blocked = vec![false; idx.len()];
        for other in x.iter().filter(|o| *o != hub) {
            blocked[idx.index(other).unwrap()] = true;
        }
        // Representative per block: the vertex with the most paths to the hub.
        let mut reps = Vec::new();
        for block in &blocks {
            let mut best: Option<(usize, usize)> = None;
            for v in block {
                let vi = idx.index(v).unwrap();
                let mut net = FlowNetwork::from_indexed(&idx, &blocked, |_, _| false);
                let got = net.max_flow(vi, h, (t - 1) as i64) as usize;
                if best.is_none_or(|(b, _)| got > b) {
                    best = Some((got, vi));
                }
            }
            if let Some((got, vi)) = best {
                if got >= t - 1 {
                    reps.push(vi);
                }
            }
        }
        if reps.len() < t {
            last_failure = format!(
                "only {} blocks reach `{hub}` by {} edge-disjoint paths",
                reps.len(),
                t - 1
            );
            continue;
        }
        for chosen in reps.iter().copied().combinations(t).take(MAX_COMBINATIONS) {
            match route_through_hub(&idx, &blocked, &chosen, h, t) {
                Some(paths) => {
                    let branch: BTreeMap<Vertex, Vertex> = chosen
                        .iter()
                        .enumerate()
                        .map(|(i, &r)| (Vertex::new(i.to_string()), idx.name(r).clone()))
                        .collect();
                    let mut next = vec![0usize; t];
                    let mut routes = BTreeMap::new();
                    for i in 0..t {
                        for j in i + 1..t {
                            let pi = &paths[i][next[i]];
                            let pj = &paths[j][next[j]];
                            next[i] += 1;
                            next[j] += 1;
                            let walk: Vec<Vertex> = pi
                                .iter()
                                .chain(pj.iter().rev().skip(1))
                                .map(|&k| idx.name(k).clone())
                                .collect();
                            routes.insert(Edge::new(i.to_string(), j.to_string()), loop_erase(walk.iter()));
                        }
                    }
                    let model = ImmersionModel {
                        pattern,
                        host: g.clone(),
                        branch,
                        routes,
                        strong: true,
                    };
                    return finish(model, blocks, Some(hub.clone()));
                }
                None => {
                    last_failure = format!("edge-disjoint routing through `{hub}` failed for every block choice tried");
                }
            }
        }
    }
    Ok(none(blocks, last_failure))
}

/// `t − 1` edge-disjoint paths from each chosen representative to the hub,
/// no path entering another representative.
fn route_through_hub(
    idx: &Indexed,
    blocked: &[bool],
    reps: &[usize],
    hub: usize,
    t: usize,
) -> Option<Vec<Vec<Vec<usize>>>> {
    let n = idx.len();
    let source = n;
    let mut is_rep = vec![false; n];
    for &r in reps {
        is_rep[r] = true;
    }
    let mut net = FlowNetwork::new(n + 1);
    for (a, b) in idx.edge_list() {
        if blocked[a] || blocked[b] || (is_rep[a] && is_rep[b]) {
            continue;
        }
        if is_rep[a] {
            net.add_pair(a, b, 1, 0);
        } else if is_rep[b] {
            net.add_pair(b, a, 1, 0);
        } else {
            net.add_undirected(a, b);
        }
    }
    for &r in reps {
        net.add_pair(source, r, (t - 1) as i64, 0);
    }
    let need = (t * (t - 1)) as i64;
    if net.max_flow(source, hub, need) < need {
        return None;
    }
    let mut per_rep: Vec<Vec<Vec<usize>>> = vec![Vec::new(); reps.len()];
    for p in net.decompose(source, hub) {
        let body = p[1..].to_vec();
        let k = reps.iter().position(|&r| r == body[0])?;
        per_rep[k].push(body);
    }
    per_rep.iter().all(|ps| ps.len() == t - 1).then_some(per_rep)
}

fn finish(model: ImmersionModel, blocks: Vec<BTreeSet<Vertex>>, hub: Option<Vertex>) -> Result<CliqueOutcome> {
    let report = verify_immersion(&model);
    if !report.is_valid() {
        return Err(Error::Invariant(format!(
            "constructed clique immersion is invalid: {}",
            report.violations[0]
        )));
    }
    Ok(CliqueOutcome {
        model: Some(model),
        blocks,
        hub,
        diagnostic: None,
    })
}

fn bfs_path(g: &Graph, a: &Vertex, b: &Vertex) -> Option<Path> {
    let mut prev: BTreeMap<&Vertex, &Vertex> = BTreeMap::new();
    let mut queue = VecDeque::from([a]);
    prev.insert(a, a);
    while let Some(v) = queue.pop_front() {
        if v == b {
            let mut out = vec![b.clone()];
            let mut cur = b;
            while cur != a {
                cur = prev[cur];
                out.push(cur.clone());
            }
            out.reverse();
            return Some(Path::from_vec_unchecked(out));
        }
        for w in g.neighbors(v) {
            if !prev.contains_key(w) {
                prev.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    None
}
