//! Backtracking search for a pattern graph inside a host, shared by the
//! subdivision and immersion searches.
//!
//! Pattern vertices are assigned one at a time (most constrained first) and
//! every pattern edge is routed as soon as both ends are placed. Candidates
//! and paths are tried smallest id first, so the first model found is
//! deterministic.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{Edge, Graph, Indexed, Path, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Internally disjoint routes avoiding all branch vertices.
    Subdivision,
    /// Edge-disjoint routes avoiding all branch vertices internally.
    Strong,
    /// Edge-disjoint routes.
    Weak,
}

#[derive(Clone, Debug)]
pub(crate) struct Embedding {
    pub branch: BTreeMap<Vertex, Vertex>,
    pub routes: BTreeMap<Edge, Path>,
}

#[derive(Clone, Debug)]
pub(crate) enum Outcome {
    Found(Embedding),
    Absent,
    Unknown,
}

/// Runs the search; returns the outcome and the number of search nodes used.
pub(crate) fn search(
    pattern: &Graph,
    host: &Graph,
    mode: Mode,
    budget: u64,
    candidates: Option<&BTreeMap<Vertex, BTreeSet<Vertex>>>,
) -> (Outcome, u64) {
    if pattern.vertex_count() > host.vertex_count() || !degrees_dominated(pattern, host) {
        return (Outcome::Absent, 0);
    }
    let h = Indexed::new(pattern);
    let g = Indexed::new(host);
    let mut s = State::new(&h, &g, mode, budget, candidates);
    let found = s.run(0);
    let nodes = s.nodes;
    if found {
        let branch = (0..h.len())
            .map(|i| (h.name(i).clone(), g.name(s.branch[i]).clone()))
            .collect();
        let routes = s
            .hedges
            .iter()
            .zip(&s.routes)
            .map(|(&(a, b), r)| {
                let e = Edge::new(h.name(a).clone(), h.name(b).clone());
                let mut path: Vec<Vertex> = r.iter().map(|&i| g.name(i).clone()).collect();
                if h.name(a) != e.low() {
                    path.reverse();
                }
                (e, Path::from_vec_unchecked(path))
            })
            .collect();
        (Outcome::Found(Embedding { branch, routes }), nodes)
    } else if s.out_of_budget {
        (Outcome::Unknown, nodes)
    } else {
        (Outcome::Absent, nodes)
    }
}

/// The `k`-th largest pattern degree never exceeds the `k`-th largest host
/// degree. Necessary for any injective degree-respecting branch map.
fn degrees_dominated(pattern: &Graph, host: &Graph) -> bool {
    let mut hd: Vec<usize> = pattern.vertices().map(|v| pattern.degree(v)).collect();
    let mut gd: Vec<usize> = host.vertices().map(|v| host.degree(v)).collect();
    hd.sort_unstable_by(|a, b| b.cmp(a));
    gd.sort_unstable_by(|a, b| b.cmp(a));
    hd.iter().zip(&gd).all(|(a, b)| a <= b)
}

#[derive(Clone, Copy, Debug)]
enum Task {
    Assign(usize),
    Route(usize),
}

const UNSET: usize = usize::MAX;

struct State {
    mode: Mode,
    hedges: Vec<(usize, usize)>,
    tasks: Vec<Task>,
    cand: Vec<Vec<usize>>,
    gadj: Vec<Vec<(usize, usize)>>,
    branch: Vec<usize>,
    is_branch: Vec<bool>,
    internal: Vec<u32>,
    used_edge: Vec<bool>,
    on_path: Vec<bool>,
    routes: Vec<Vec<usize>>,
    pending: Vec<usize>,
    nodes: u64,
    budget: u64,
    out_of_budget: bool,
}

impl State {
    fn new(
        h: &Indexed,
        g: &Indexed,
        mode: Mode,
        budget: u64,
        candidates: Option<&BTreeMap<Vertex, BTreeSet<Vertex>>>,
    ) -> Self {
        let hedges = h.edge_list();
        let mut gadj = vec![Vec::new(); g.len()];
        for (id, &(a, b)) in g.edge_list().iter().enumerate() {
            gadj[a].push((b, id));
            gadj[b].push((a, id));
        }
        for list in &mut gadj {
            list.sort_unstable();
        }
        let edge_count = gadj.iter().map(Vec::len).sum::<usize>() / 2;

        let hdeg: Vec<usize> = h.adj.iter().map(Vec::len).collect();
        let cand: Vec<Vec<usize>> = (0..h.len())
            .map(|i| {
                let allowed = candidates.and_then(|c| c.get(h.name(i)));
                (0..g.len())
                    .filter(|&c| gadj[c].len() >= hdeg[i])
                    .filter(|&c| allowed.is_none_or(|set| set.contains(g.name(c))))
                    .collect()
            })
            .collect();

        // Most constrained first: fewest candidates, then most edges back to
        // already placed vertices, then highest degree, then smallest id.
        let mut placed = vec![false; h.len()];
        let mut order = Vec::with_capacity(h.len());
        for _ in 0..h.len() {
            let next = (0..h.len())
                .filter(|&i| !placed[i])
                .min_by_key(|&i| {
                    let back = h.adj[i].iter().filter(|&&j| placed[j]).count();
                    (cand[i].len(), usize::MAX - back, usize::MAX - hdeg[i], i)
                })
                .expect("unplaced vertex left");
            placed[next] = true;
            order.push(next);
        }
        let mut rank = vec![0; h.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let mut tasks = Vec::new();
        for &i in &order {
            tasks.push(Task::Assign(i));
            for (e, &(a, b)) in hedges.iter().enumerate() {
                let other = if a == i {
                    b
                } else if b == i {
                    a
                } else {
                    continue;
                };
                if rank[other] < rank[i] {
                    tasks.push(Task::Route(e));
                }
            }
        }

        State {
            mode,
            routes: vec![Vec::new(); hedges.len()],
            hedges,
            tasks,
            cand,
            branch: vec![UNSET; h.len()],
            is_branch: vec![false; g.len()],
            internal: vec![0; g.len()],
            used_edge: vec![false; edge_count],
            on_path: vec![false; g.len()],
            pending: hdeg,
            gadj,
            nodes: 0,
            budget,
            out_of_budget: false,
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.out_of_budget = true;
        }
        !self.out_of_budget
    }

    /// Host edges at `c` still available to routes starting there.
    fn free_edges(&self, c: usize) -> usize {
        self.gadj[c]
            .iter()
            .filter(|&&(n, id)| !self.used_edge[id] && (self.mode != Mode::Subdivision || self.internal[n] == 0))
            .count()
    }

    fn capacity_ok(&self) -> bool {
        self.branch
            .iter()
            .zip(&self.pending)
            .all(|(&b, &need)| b == UNSET || self.free_edges(b) >= need)
    }

    fn run(&mut self, t: usize) -> bool {
        let Some(&task) = self.tasks.get(t) else {
            return true;
        };
        match task {
            Task::Assign(h) => {
                for i in 0..self.cand[h].len() {
                    let c = self.cand[h][i];
                    if !self.tick() {
                        return false;
                    }
                    if self.is_branch[c] || (self.mode != Mode::Weak && self.internal[c] > 0) {
                        continue;
                    }
                    if self.free_edges(c) < self.pending[h] {
                        continue;
                    }
                    self.branch[h] = c;
                    self.is_branch[c] = true;
                    if self.run(t + 1) {
                        return true;
                    }
                    self.branch[h] = UNSET;
                    self.is_branch[c] = false;
                    if self.out_of_budget {
                        return false;
                    }
                }
                false
            }
            Task::Route(e) => {
                let (a, b) = self.hedges[e];
                let (s, d) = (self.branch[a], self.branch[b]);
                let mut path = vec![s];
                self.on_path[s] = true;
                let found = self.extend(t, e, d, &mut path);
                self.on_path[s] = false;
                found
            }
        }
    }

    /// Depth-first enumeration of routes from the end of `path` to `d`.
    fn extend(&mut self, t: usize, e: usize, d: usize, path: &mut Vec<usize>) -> bool {
        let cur = *path.last().expect("path starts non-empty");
        for i in 0..self.gadj[cur].len() {
            let (n, id) = self.gadj[cur][i];
            if self.used_edge[id] || self.on_path[n] {
                continue;
            }
            if !self.tick() {
                return false;
            }
            if n == d {
                path.push(n);
                let edges = self.commit(e, path);
                if self.capacity_ok() && self.run(t + 1) {
                    return true;
                }
                self.uncommit(e, path, &edges);
                path.pop();
                if self.out_of_budget {
                    return false;
                }
                continue;
            }
            let blocked = match self.mode {
                Mode::Subdivision => self.is_branch[n] || self.internal[n] > 0,
                Mode::Strong => self.is_branch[n],
                Mode::Weak => false,
            };
            if blocked {
                continue;
            }
            path.push(n);
            self.on_path[n] = true;
            self.used_edge[id] = true;
            let found = self.extend(t, e, d, path);
            self.used_edge[id] = false;
            self.on_path[n] = false;
            path.pop();
            if found {
                return true;
            }
            if self.out_of_budget {
                return false;
            }
        }
        false
    }

    fn commit(&mut self, e: usize, path: &[usize]) -> Vec<usize> {
        let ids: Vec<usize> = path.windows(2).map(|w| self.edge_id(w[0], w[1])).collect();
        for &id in &ids {
            self.used_edge[id] = true;
        }
        for &v in &path[1..path.len() - 1] {
            self.internal[v] += 1;
        }
        // Later routes may revisit these vertices.
        for &v in &path[..path.len() - 1] {
            self.on_path[v] = false;
        }
        let (a, b) = self.hedges[e];
        self.pending[a] -= 1;
        self.pending[b] -= 1;
        self.routes[e] = path.to_vec();
        ids
    }

    fn uncommit(&mut self, e: usize, path: &[usize], ids: &[usize]) {
        // The last edge was not marked by `extend`; the others were and stay
        // marked until the recursion unwinds.
        self.used_edge[*ids.last().expect("route has an edge")] = false;
        for &v in &path[1..path.len() - 1] {
            self.internal[v] -= 1;
        }
        for &v in &path[..path.len() - 1] {
            self.on_path[v] = true;
        }
        let (a, b) = self.hedges[e];
        self.pending[a] += 1;
        self.pending[b] += 1;
        self.routes[e].clear();
    }

    fn edge_id(&self, a: usize, b: usize) -> usize {
        self.gadj[a]
            .iter()
            .find(|&&(n, _)| n == b)
            .map(|&(_, id)| id)
            .expect("consecutive route vertices are adjacent")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        let mut g = Graph::new();
        for i in 0..n {
            g.add_vertex(format!("{i}"));
            for j in 0..i {
                g.add_edge(format!("{j}"), format!("{i}")).unwrap();
            }
        }
        g
    }

    #[test]
    fn triangle_in_triangle() {
        let (out, _) = search(&k(3), &k(3), Mode::Subdivision, 1000, None);
        assert!(matches!(out, Outcome::Found(_)));
    }

    #[test]
    fn k4_not_in_k4_minus_edge() {
        let mut g = k(4);
        g.remove_edge(&Edge::new("0", "1"));
        let (out, _) = search(&k(4), &g, Mode::Weak, 100_000, None);
        assert!(matches!(out, Outcome::Absent));
    }

    #[test]
    fn budget_reports_unknown() {
        let c6 = Graph::from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("f", "a")]).unwrap();
        let (out, _) = search(&k(3), &c6, Mode::Subdivision, 2, None);
        assert!(matches!(out, Outcome::Unknown));
    }

    #[test]
    fn triangle_subdivided_in_cycle() {
        let c6 = Graph::from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("f", "a")]).unwrap();
        let (out, _) = search(&k(3), &c6, Mode::Subdivision, 100_000, None);
        let Outcome::Found(m) = out else {
            panic!("expected a model")
        };
        let total: usize = m.routes.values().map(Path::len).sum();
        assert_eq!(total, 6);
    }
}
