//! Fast algorithms against the brute-force oracles on small random graphs.

use std::collections::{BTreeMap, BTreeSet};

use farey_lab::graph::{edge_connectivity, girth};
use farey_lab::immersion::{find_immersion_bruteforce, verify_immersion};
use farey_lab::minors::{find_subdivision, SearchOptions};
use farey_lab::oracle::{self, Containment};
use farey_lab::separations::{edge_blocks, find_compound_separation, tree_cut_decomposition};
use farey_lab::{Edge, Graph, Vertex};
use itertools::Itertools;
use proptest::prelude::*;

fn graph_from(n: usize, mask: &[bool]) -> Graph {
    let mut g = Graph::new();
    for i in 0..n {
        g.add_vertex(format!("v{i}"));
    }
    for ((a, b), &on) in (0..n).tuple_combinations().zip(mask) {
        if on {
            g.insert_edge(Edge::new(format!("v{a}"), format!("v{b}")));
        }
    }
    g
}

fn graph(max: usize) -> impl Strategy<Value = Graph> {
    (2..=max).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.5), n * (n - 1) / 2).prop_map(move |m| graph_from(n, &m))
    })
}

fn naive_blocks(g: &Graph, c: usize) -> Vec<BTreeSet<Vertex>> {
    let lambda = oracle::pairwise_lambda(g);
    let mut blocks: Vec<BTreeSet<Vertex>> = Vec::new();
    for v in g.vertices() {
        let u = blocks.iter().position(|b| {
            let u = b.iter().next().unwrap();
            lambda[&(u.clone().min(v.clone()), u.clone().max(v.clone()))] >= c
        });
        match u {
            Some(i) => {
                blocks[i].insert(v.clone());
            }
            None => blocks.push([v.clone()].into_iter().collect()),
        }
    }
    blocks.sort();
    blocks
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flow_matches_cut_and_packing(g in graph(7)) {
        let vs: Vec<Vertex> = g.vertices().cloned().collect();
        let (u, v) = (&vs[0], &vs[vs.len() - 1]);
        let lambda = edge_connectivity(&g, u, v).unwrap();
        prop_assert_eq!(lambda.lambda, oracle::min_cut_by_enumeration(&g, u, v));
        prop_assert_eq!(lambda.lambda, oracle::path_packing(&g, u, v));
        let mut used = BTreeSet::new();
        for p in &lambda.paths {
            p.validate_in(&g).unwrap();
            prop_assert_eq!(p.start(), u);
            prop_assert_eq!(p.end(), v);
            for e in p.edges() {
                prop_assert!(used.insert(e));
            }
        }
    }

    #[test]
    fn blocks_match_pairwise_lambda(g in graph(9), c in 1usize..=3) {
        let mut fast = edge_blocks(&g, c);
        fast.sort();
        prop_assert_eq!(fast, naive_blocks(&g, c));
    }

    #[test]
    fn decomposition_parts_are_blocks(g in graph(9), c in 1usize..=3) {
        prop_assume!(g.is_connected());
        let t = tree_cut_decomposition(&g, c).unwrap();
        t.validate(&g).unwrap();
        prop_assert!(t.max_adhesion() < c);
        let mut parts = t.parts.clone();
        parts.sort();
        prop_assert_eq!(parts, naive_blocks(&g, c));
    }

    #[test]
    fn girth_matches(g in graph(9)) {
        prop_assert_eq!(girth(&g), oracle::girth_by_edge_removal(&g));
    }

    #[test]
    fn compound_separation_exists_iff_some_small_cut(g in graph(7), s in 0usize..=2, f in 0usize..=3) {
        let vs: Vec<Vertex> = g.vertices().cloned().collect();
        let (u, v) = (&vs[0], &vs[1]);
        let found = find_compound_separation(&g, u, v, s, f).unwrap();
        let others: Vec<&Vertex> = vs.iter().filter(|w| *w != u && *w != v).collect();
        let brute = (0..=s.min(others.len())).any(|k| {
            others.iter().combinations(k).any(|sep| {
                let rest = g.without_vertices(sep.into_iter().copied());
                oracle::min_cut_by_enumeration(&rest, u, v) <= f
            })
        });
        prop_assert_eq!(found.is_some(), brute);
        if let Some(sep) = found {
            sep.validate(&g).unwrap();
            prop_assert!(sep.separates(u, v));
            prop_assert!(sep.order() <= s);
            prop_assert!(sep.cross().len() <= f);
        }
    }
}

fn small_pattern() -> impl Strategy<Value = Graph> {
    (2usize..=4).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.6), n * (n - 1) / 2)
            .prop_map(move |m| {
                let mut g = graph_from(n, &m);
                // Rename so pattern and host names never collide.
                let mut p = Graph::new();
                for v in g.vertices() {
                    p.add_vertex(format!("p{}", v.as_str()));
                }
                for e in g.edges() {
                    p.insert_edge(Edge::new(
                        format!("p{}", e.low().as_str()),
                        format!("p{}", e.high().as_str()),
                    ));
                }
                g = p;
                g
            })
            .prop_filter("pattern needs an edge", |g| g.edge_count() > 0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn search_agrees_with_enumeration(pattern in small_pattern(), host in graph(6)) {
        let opts = SearchOptions::default();
        let sub = find_subdivision(&pattern, &host, &opts);
        let strong = find_immersion_bruteforce(&pattern, &host, true, &opts);
        let weak = find_immersion_bruteforce(&pattern, &host, false, &opts);
        prop_assert!(!sub.outcome.is_unknown() && !strong.outcome.is_unknown() && !weak.outcome.is_unknown());

        prop_assert_eq!(sub.outcome.found().is_some(), oracle::contains_by_enumeration(&pattern, &host, Containment::Subdivision, None));
        prop_assert_eq!(strong.outcome.found().is_some(), oracle::contains_by_enumeration(&pattern, &host, Containment::Strong, None));
        prop_assert_eq!(weak.outcome.found().is_some(), oracle::contains_by_enumeration(&pattern, &host, Containment::Weak, None));

        // Subdivision implies strong implies weak.
        if sub.outcome.found().is_some() {
            prop_assert!(strong.outcome.found().is_some());
        }
        if let Some(m) = strong.outcome.found() {
            prop_assert!(verify_immersion(m).is_valid());
            prop_assert!(weak.outcome.found().is_some());
        }
        if let Some(m) = sub.outcome.found() {
            prop_assert!(m.is_valid());
        }
        if let Some(m) = weak.outcome.found() {
            prop_assert!(verify_immersion(m).is_valid());
        }
    }

    #[test]
    fn forced_branch_images_are_respected(host in graph(6)) {
        let pattern = Graph::from_edges([("a", "b"), ("b", "c")]).unwrap();
        let vs: Vec<Vertex> = host.vertices().cloned().collect();
        prop_assume!(vs.len() >= 3);
        let forced: BTreeMap<Vertex, BTreeSet<Vertex>> = [("a", 0), ("b", 1), ("c", 2)]
            .into_iter()
            .map(|(p, i)| (Vertex::new(p), [vs[i].clone()].into_iter().collect()))
            .collect();
        let opts = SearchOptions { branch_candidates: Some(forced.clone()), ..Default::default() };
        let r = find_immersion_bruteforce(&pattern, &host, true, &opts);
        prop_assert_eq!(
            r.outcome.found().is_some(),
            oracle::contains_by_enumeration(&pattern, &host, Containment::Strong, Some(&forced))
        );
        if let Some(m) = r.outcome.found() {
            for (p, h) in &m.branch {
                prop_assert!(forced[p].contains(h));
            }
        }
    }
}

fn sparse_graph(max: usize) -> impl Strategy<Value = Graph> {
    (2..=max).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.3), n * (n - 1) / 2).prop_map(move |m| graph_from(n, &m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subdivision_search_on_larger_hosts(pattern in small_pattern(), host in sparse_graph(10)) {
        let r = find_subdivision(&pattern, &host, &SearchOptions::default());
        prop_assert!(!r.outcome.is_unknown());
        let brute = oracle::contains_by_enumeration(&pattern, &host, Containment::Subdivision, None);
        prop_assert_eq!(r.outcome.found().is_some(), brute);
        if let Some(m) = r.outcome.found() {
            prop_assert!(m.is_valid());
        }
    }
}
