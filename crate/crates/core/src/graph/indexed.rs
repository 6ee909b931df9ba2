use std::collections::HashMap;

use super::{Graph, Vertex};

/// Dense index view of a [`Graph`]. Index order equals vertex id order and
/// every adjacency list is ascending, so "smallest index first" is "smallest
/// id first".
#[derive(Clone, Debug)]
pub(crate) struct Indexed {
    pub names: Vec<Vertex>,
    pub adj: Vec<Vec<usize>>,
    pos: HashMap<Vertex, usize>,
}

impl Indexed {
    pub fn new(g: &Graph) -> Self {
        let names: Vec<Vertex> = g.vertices().cloned().collect();
        let pos: HashMap<Vertex, usize> = names.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let adj = names.iter().map(|v| g.neighbors(v).map(|u| pos[u]).collect()).collect();
        Indexed { names, adj, pos }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn index(&self, v: &Vertex) -> Option<usize> {
        self.pos.get(v).copied()
    }

    pub fn name(&self, i: usize) -> &Vertex {
        &self.names[i]
    }

    /// Edges as index pairs `(a, b)` with `a < b`, ascending.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, nbrs) in self.adj.iter().enumerate() {
            for &b in nbrs {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }
}
