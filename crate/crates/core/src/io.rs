//! DOT output and helpers for the JSON encodings.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::error::{invalid, Result};
use crate::graph::{Edge, Graph, Path};

/// Graphviz `graph` with every vertex listed, then every edge.
pub fn to_dot(g: &Graph) -> String {
    to_dot_with(g, |_| None)
}

/// Like [`to_dot`]; `edge_attrs` may attach an attribute list to an edge.
pub fn to_dot_with<F>(g: &Graph, mut edge_attrs: F) -> String
where
    F: FnMut(&Edge) -> Option<String>,
{
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        let _ = writeln!(out, "  {};", quote(v.as_str()));
    }
    for e in g.edges() {
        let _ = write!(out, "  {} -- {}", quote(e.low().as_str()), quote(e.high().as_str()));
        if let Some(a) = edge_attrs(&e) {
            let _ = write!(out, " [{a}]");
        }
        out.push_str(";\n");
    }
    out.push_str("}\n");
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Route maps are keyed `"u-v"` in JSON.
pub(crate) fn route_keys(routes: BTreeMap<Edge, Path>) -> BTreeMap<String, Path> {
    routes.into_iter().map(|(e, p)| (e.to_string(), p)).collect()
}

/// Inverse of [`route_keys`]. Vertex ids may contain `-`, so every split
/// point is tried against the pattern's edges.
pub(crate) fn resolve_route_keys(pattern: &Graph, routes: BTreeMap<String, Path>) -> Result<BTreeMap<Edge, Path>> {
    let mut out = BTreeMap::new();
    for (key, path) in routes {
        let edge = key
            .match_indices('-')
            .map(|(i, _)| (&key[..i], &key[i + 1..]))
            .find(|(a, b)| pattern.has_edge(&(*a).into(), &(*b).into()))
            .map(|(a, b)| Edge::new(a, b))
            .ok_or_else(|| invalid(format!("route key `{key}` names no pattern edge")))?;
        if out.insert(edge, path).is_some() {
            return Err(invalid(format!("route key `{key}` given twice")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_lists_nodes_and_edges() {
        let g = Graph::from_edges([("a", "b")]).unwrap();
        assert_eq!(to_dot(&g), "graph G {\n  \"a\";\n  \"b\";\n  \"a\" -- \"b\";\n}\n");
    }

    #[test]
    fn hyphenated_ids_resolve() {
        let g = Graph::from_edges([("a-1", "b")]).unwrap();
        let mut m = BTreeMap::new();
        m.insert("a-1-b".to_string(), Path::from_names(&["p", "q"]));
        let r = resolve_route_keys(&g, m).unwrap();
        assert!(r.contains_key(&Edge::new("a-1", "b")));
    }
}
