use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::{check_grain_line, GrainLine};
use crate::error::{invalid, Result};
use crate::graph::{Path, Vertex};

/// Up to this many input paths every subsequence is tried.
const EXHAUSTIVE_LIMIT: usize = 8;

/// Picks a subsequence of pairwise edge-disjoint `x`–`y` paths that forms a
/// grain line.
///
/// For a fixed subsequence the only candidate for `L` is `{x, y}` plus the
/// vertices shared by two or more chosen paths, ordered along the last one:
/// a vertex outside `L` may lie on one path only, and a vertex in `L` must
/// reach the last path. Up to eight paths, the longest valid subsequence
/// (lexicographically first among equals) is returned; beyond that, paths are
/// added greedily in input order.
pub fn extract_grain_line(paths: &[Path]) -> Result<GrainLine> {
    if paths.len() < 2 {
        return Err(invalid("need at least two paths"));
    }
    let x = paths[0].start().clone();
    let y = paths[0].end().clone();
    if x == y {
        return Err(invalid("paths must join two distinct vertices"));
    }
    for (i, p) in paths.iter().enumerate() {
        if p.start() != &x || p.end() != &y {
            return Err(invalid(format!("path {i} does not run from `{x}` to `{y}`")));
        }
    }
    let mut owner = BTreeMap::new();
    for (i, p) in paths.iter().enumerate() {
        for e in p.edges() {
            if let Some(j) = owner.insert(e.clone(), i) {
                return Err(invalid(format!("paths {j} and {i} share edge {e}")));
            }
        }
    }

    if paths.len() <= EXHAUSTIVE_LIMIT {
        for k in (2..=paths.len()).rev() {
            for chosen in (0..paths.len()).combinations(k) {
                if let Some(gl) = candidate(paths, &x, &y, &chosen) {
                    return Ok(gl);
                }
            }
        }
    } else {
        let mut chosen = vec![0];
        for i in 1..paths.len() {
            chosen.push(i);
            if candidate(paths, &x, &y, &chosen).is_none() {
                chosen.pop();
            }
        }
        if chosen.len() >= 2 {
            return Ok(candidate(paths, &x, &y, &chosen).expect("checked above"));
        }
    }
    candidate(paths, &x, &y, &[0, 1]).ok_or_else(|| invalid("no two paths form a grain line"))
}

fn candidate(paths: &[Path], x: &Vertex, y: &Vertex, chosen: &[usize]) -> Option<GrainLine> {
    let mut count: BTreeMap<&Vertex, usize> = BTreeMap::new();
    for &i in chosen {
        for v in paths[i].vertices() {
            *count.entry(v).or_default() += 1;
        }
    }
    let l: BTreeSet<&Vertex> = count
        .iter()
        .filter(|(v, &c)| c >= 2 || *v == &x || *v == &y)
        .map(|(v, _)| *v)
        .collect();
    let last = &paths[*chosen.last()?];
    let order: Vec<Vertex> = last.vertices().iter().filter(|v| l.contains(v)).cloned().collect();
    if order.len() != l.len() {
        return None; // some shared vertex misses the last path
    }
    let gl = GrainLine::new(
        x.clone(),
        y.clone(),
        order,
        chosen.iter().map(|&i| paths[i].clone()).collect(),
    )
    .ok()?;
    check_grain_line(&gl).is_valid().then_some(gl)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjoint_paths_keep_everything() {
        let paths: Vec<Path> = (0..4)
            .map(|i| Path::from_names(&["x", &format!("m{i}"), "y"]))
            .collect();
        let gl = extract_grain_line(&paths).unwrap();
        assert_eq!(gl.paths().len(), 4);
        assert_eq!(gl.order(), &["x".into(), "y".into()]);
    }

    #[test]
    fn incompatible_order_drops_a_path() {
        // P0 and P1 visit a before b; P2 visits b first.
        let paths = vec![
            Path::from_names(&["x", "a", "b", "y"]),
            Path::from_names(&["x", "p", "a", "q", "b", "r", "y"]),
            Path::from_names(&["x", "s", "b", "t", "a", "u", "y"]),
        ];
        let gl = extract_grain_line(&paths).unwrap();
        assert_eq!(gl.paths().len(), 2);
        assert!(check_grain_line(&gl).is_valid());
    }

    #[test]
    fn rejects_shared_edges() {
        let paths = vec![
            Path::from_names(&["x", "a", "y"]),
            Path::from_names(&["x", "a", "b", "y"]),
        ];
        assert!(extract_grain_line(&paths).is_err());
    }
}
