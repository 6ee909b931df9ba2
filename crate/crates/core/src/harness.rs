//! The acceptance suite: eleven numbered checks, each with a time limit,
//! run against the brute-force oracles where one applies.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::generators::{
    adversarial_length_function, farey, farey_with_order, generalised_halved_farey, halved_farey, LengthFunction,
};
use crate::grainline::{
    check_grain_line, check_prime_axioms, is_free, is_well_structured, is_wildly_presented, separation_at_vertex,
    GrainLine,
};
use crate::graph::{edge_connectivity, girth, Graph, Path, Vertex};
use crate::immersion::{
    complete_pattern, cut_bound_complete, cut_bound_complete_in_halved, cut_bound_farey_in_halved,
    find_immersion_bruteforce, halved_farey_branch_sets, immerse_halved_farey, verify_immersion,
};
use crate::minors::{check_dive_trace, dive, first_dive, theorem31_experiment, SearchOptions};
use crate::oracle::{self, Containment};
use crate::separations::{edge_blocks, tree_cut_decomposition};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: Option<u128>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let limit = self.limit_ms.map_or(String::new(), |l| format!(" / {l} ms"));
        format!(
            "[{}] {:>2} {}: {} ({} ms{limit})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed_ms
        )
    }
}

type Check = fn(u64) -> std::result::Result<String, String>;

const CRITERIA: [(&str, Option<u128>, Check); 11] = [
    ("generator counts", Some(1_000), generator_counts),
    ("halved Farey grain line", Some(5_000), halved_grain_line),
    ("edge connectivity of x and y", None, connectivity),
    ("girth of long-path truncations", Some(10_000), girth_growth),
    ("halved Farey immersions", Some(60_000), farey_immersions),
    ("first dive on random paths", Some(30_000), random_first_dives),
    ("vertex separation in F(l)", None, vertex_separation),
    ("edge blocks against pairwise lambda", Some(60_000), blocks_vs_oracle),
    ("cut-bound soundness", Some(300_000), cut_bound_soundness),
    (
        "adversarial lengths and subdivision search",
        None,
        adversarial_experiment,
    ),
    ("dive trace invariants", None, dive_invariants),
];

pub fn criterion_count() -> usize {
    CRITERIA.len()
}

/// Runs criterion `id` (1-based). A criterion passes when its check
/// succeeds within its time limit.
pub fn run_criterion(id: usize, seed: u64) -> Option<CriterionResult> {
    let (name, limit_ms, check) = *CRITERIA.get(id.checked_sub(1)?)?;
    let start = Instant::now();
    let outcome = check(seed);
    let elapsed_ms = start.elapsed().as_millis();
    let in_time = limit_ms.is_none_or(|l| elapsed_ms < l);
    let (passed, detail) = match outcome {
        Ok(d) if in_time => (true, d),
        Ok(d) => (false, format!("{d}; over the time limit")),
        Err(d) => (false, d),
    };
    Some(CriterionResult {
        id,
        name: name.to_string(),
        passed,
        detail,
        elapsed_ms,
        limit_ms,
    })
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    (1..=CRITERIA.len()).filter_map(|id| run_criterion(id, seed)).collect()
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn generator_counts(_: u64) -> std::result::Result<String, String> {
    for n in 0..=12 {
        let g = halved_farey(n);
        let (v, e) = (g.graph().vertex_count(), g.graph().edge_count());
        ensure!(
            v == (1 << n) + 1 && e == (1 << (n + 1)) - 1,
            "F̆_{n}: {v} vertices, {e} edges"
        );
        if n <= 8 {
            let s = oracle::spawned_halved_farey(n);
            ensure!(
                s.vertex_count() == v && s.edge_count() == e,
                "F̆_{n} disagrees with the spawned construction"
            );
        }
    }
    for n in 0..=10 {
        let g = farey(n);
        let (v, e) = (g.vertex_count(), g.edge_count());
        ensure!(
            v == 1 << (n + 1) && e == (1 << (n + 2)) - 3,
            "F_{n}: {v} vertices, {e} edges"
        );
    }
    Ok("F̆_n for n ≤ 12 and F_n for n ≤ 10 match the closed forms".into())
}

fn halved_grain_line(_: u64) -> std::result::Result<String, String> {
    for n in 0..=10 {
        let gl = halved_farey(n).grain_line();
        let report = check_grain_line(&gl);
        ensure!(report.is_valid(), "n = {n}: {}", report.violations[0]);
        let prime = check_prime_axioms(&gl).map_err(|e| e.to_string())?;
        ensure!(
            prime.gl2_prime && prime.gl3_prime,
            "n = {n}: primed axioms fail: {prime:?}"
        );
        ensure!(is_well_structured(&gl), "n = {n}: not well-structured");
        ensure!(is_free(&gl), "n = {n}: not free");
        ensure!(is_wildly_presented(&gl), "n = {n}: not wildly presented");
    }
    Ok("all axioms and structural properties hold for n ≤ 10".into())
}

fn connectivity(_: u64) -> std::result::Result<String, String> {
    let (x, y) = (Vertex::new("x"), Vertex::new("y"));
    for n in 0..=8 {
        let g = halved_farey(n).graph().clone();
        let lambda = edge_connectivity(&g, &x, &y).map_err(|e| e.to_string())?.lambda;
        ensure!(lambda == n + 1, "F̆_{n}: λ = {lambda}");
        if n <= 4 {
            let packed = oracle::path_packing(&g, &x, &y);
            let cut = oracle::min_cut_by_enumeration(&g, &x, &y);
            ensure!(
                packed == lambda && cut == lambda,
                "F̆_{n}: packing {packed}, cut {cut}, flow {lambda}"
            );
        }
    }
    Ok("λ(x, y) = n + 1 for n ≤ 8; packing and cut oracles agree for n ≤ 4".into())
}

fn girth_growth(_: u64) -> std::result::Result<String, String> {
    let mut seen = Vec::new();
    for k in 1..=3 {
        let lengths = LengthFunction::new(vec![1, 3 * k, 3 * k, 3 * k]).map_err(|e| e.to_string())?;
        let g = generalised_halved_farey(&lengths, 3).map_err(|e| e.to_string())?;
        let fast = girth(g.graph());
        let slow = oracle::girth_by_edge_removal(g.graph());
        ensure!(fast == slow, "k = {k}: girth {fast:?}, oracle {slow:?}");
        ensure!(
            fast.is_some_and(|d| d > 3 * k),
            "k = {k}: girth {fast:?} below {}",
            3 * k + 1
        );
        seen.push(fast.unwrap());
    }
    Ok(format!("girths {seen:?} for k = 1, 2, 3"))
}

fn farey_immersions(_: u64) -> std::result::Result<String, String> {
    for m in 0..=5 {
        let gl = halved_farey(m + 3).grain_line();
        let levels = halved_farey_branch_sets(&gl, m).map_err(|e| e.to_string())?;
        for (n, u) in levels.iter().enumerate() {
            ensure!(u.len() == (1 << n) + 1, "m = {m}: |U_{n}| = {}", u.len());
        }
        let model = immerse_halved_farey(&gl, m).map_err(|e| e.to_string())?;
        let report = verify_immersion(&model);
        ensure!(
            model.strong && report.is_valid(),
            "m = {m}: {:?}",
            report.violations.first()
        );
    }
    let host = halved_farey(4);
    for m in 0..=2 {
        let pattern = halved_farey(m).graph().clone();
        let r = find_immersion_bruteforce(&pattern, host.graph(), true, &SearchOptions::default());
        let found = r
            .outcome
            .found()
            .ok_or_else(|| format!("search for F̆_{m} in F̆_4: {}", r.outcome.status()))?;
        ensure!(verify_immersion(found).is_valid(), "searched model of F̆_{m} is invalid");
        let built = immerse_halved_farey(&host.grain_line(), m).map_err(|e| e.to_string())?;
        ensure!(
            verify_immersion(&built).is_valid(),
            "built model of F̆_{m} in F̆_4 is invalid"
        );
    }
    Ok("strong for m ≤ 5 with |U_n| = 2^n + 1; search agrees in F̆_4 for m ≤ 2".into())
}

/// A self-avoiding walk of up to `max_len` edges, each step to a random
/// unvisited neighbour.
fn random_walk(g: &Graph, rng: &mut ChaCha8Rng, max_len: usize) -> Path {
    let vs: Vec<&Vertex> = g.vertices().collect();
    let start = (*vs.choose(rng).unwrap()).clone();
    let mut walk = vec![start.clone()];
    let mut seen: BTreeSet<Vertex> = [start].into_iter().collect();
    while walk.len() <= max_len {
        let last = walk.last().unwrap();
        let options: Vec<&Vertex> = g.neighbors(last).filter(|w| !seen.contains(*w)).collect();
        let Some(next) = options.choose(rng) else { break };
        let next = (*next).clone();
        seen.insert(next.clone());
        walk.push(next);
    }
    Path::from_vec_unchecked(walk)
}

fn random_first_dives(seed: u64) -> std::result::Result<String, String> {
    let gl = halved_farey(5).grain_line();
    let g = gl.host();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut accepted, mut tried) = (0, 0);
    while accepted < 1000 {
        tried += 1;
        ensure!(tried < 1_000_000, "only {accepted} admissible paths in {tried} tries");
        let len = rng.gen_range(1..=16);
        let p = random_walk(&g, &mut rng, len);
        if p.is_empty() {
            continue;
        }
        let d = p.edges().map(|e| gl.edge_depth(&e).unwrap()).max().unwrap();
        let ends = gl
            .vertex_depth(p.start())
            .unwrap()
            .max(gl.vertex_depth(p.end()).unwrap());
        if ends >= d {
            continue;
        }
        accepted += 1;
        let seg = first_dive(&gl, &p).map_err(|e| format!("path {p}: {e}"))?;
        ensure!(
            seg.depth == d,
            "path {p}: segment depth {} but max edge depth {d}",
            seg.depth
        );
    }
    Ok(format!("{accepted} admissible paths out of {tried} walks"))
}

fn vertex_separation(_: u64) -> std::result::Result<String, String> {
    let families = [vec![1, 2, 2, 2, 2, 2], vec![1, 2, 3, 4, 5, 6], vec![1, 3, 3, 3, 3, 3]];
    let mut checked = 0;
    for values in families {
        let lengths = LengthFunction::new(values).map_err(|e| e.to_string())?;
        for n in 1..=5 {
            let gl = generalised_halved_farey(&lengths, n)
                .map_err(|e| e.to_string())?
                .grain_line();
            for v in &gl.order()[1..gl.order().len() - 1] {
                let s = separation_at_vertex(&gl, v).map_err(|e| e.to_string())?;
                // Recheck from the components of what is left.
                let mut rest = gl.host();
                rest.remove_vertex(v);
                let rest = rest.without_edges(&s.removed_edges);
                let joined = rest
                    .components()
                    .iter()
                    .any(|c| !c.is_disjoint(&s.left) && !c.is_disjoint(&s.right));
                ensure!(
                    s.separates && !joined,
                    "ℓ = {lengths}, n = {n}: `{v}` does not separate"
                );
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} vertices separate their L-intervals"))
}

/// A connected `G(n, p)` sample, redrawn until connected.
fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let g = sample_graph(rng);
        if g.is_connected() {
            return g;
        }
    }
}

fn sample_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(2..=12);
    let p: f64 = rng.gen_range(0.15..0.7);
    let mut g = Graph::new();
    for i in 0..n {
        g.add_vertex(format!("v{i}"));
    }
    for (a, b) in (0..n).tuple_combinations() {
        if rng.gen_bool(p) {
            g.insert_edge(crate::graph::Edge::new(format!("v{a}"), format!("v{b}")));
        }
    }
    g
}

fn blocks_vs_oracle(seed: u64) -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x8b);
    for i in 0..200 {
        let g = random_graph(&mut rng);
        let lambda = oracle::pairwise_lambda(&g);
        for c in [2, 3] {
            let mut naive: Vec<BTreeSet<Vertex>> = Vec::new();
            for v in g.vertices() {
                let home = naive.iter_mut().find(|b| {
                    let u = b.iter().next().unwrap();
                    let key = if u < v {
                        (u.clone(), v.clone())
                    } else {
                        (v.clone(), u.clone())
                    };
                    lambda[&key] >= c
                });
                match home {
                    Some(b) => {
                        b.insert(v.clone());
                    }
                    None => naive.push([v.clone()].into_iter().collect()),
                }
            }
            let mut fast = edge_blocks(&g, c);
            fast.sort();
            naive.sort();
            ensure!(fast == naive, "graph {i}, c = {c}: blocks {fast:?}, oracle {naive:?}");
            let tcd = tree_cut_decomposition(&g, c).map_err(|e| e.to_string())?;
            tcd.validate(&g).map_err(|e| format!("graph {i}, c = {c}: {e}"))?;
            let mut parts = tcd.parts.clone();
            parts.sort();
            ensure!(
                parts == fast,
                "graph {i}, c = {c}: decomposition parts differ from the blocks"
            );
            ensure!(
                tcd.max_adhesion() < c,
                "graph {i}, c = {c}: adhesion {}",
                tcd.max_adhesion()
            );
        }
    }
    Ok("200 random connected graphs agree at c = 2 and c = 3".into())
}

/// Branch images forced to `placement`.
fn forced(placement: &BTreeMap<Vertex, Vertex>) -> BTreeMap<Vertex, BTreeSet<Vertex>> {
    placement
        .iter()
        .map(|(h, w)| (h.clone(), [w.clone()].into_iter().collect()))
        .collect()
}

/// Neither the search nor the enumeration oracle finds a strong immersion
/// under `placement`. The oracle only runs on small hosts.
fn confirm_absent(
    pattern: &Graph,
    host: &Graph,
    placement: &BTreeMap<Vertex, Vertex>,
) -> std::result::Result<(), String> {
    let candidates = forced(placement);
    let options = SearchOptions {
        branch_candidates: Some(candidates.clone()),
        ..Default::default()
    };
    let r = find_immersion_bruteforce(pattern, host, true, &options);
    ensure!(
        r.outcome.is_absent(),
        "certified placement {placement:?}: search says {}",
        r.outcome.status()
    );
    if host.vertex_count() <= 8 {
        let found = oracle::contains_by_enumeration(pattern, host, Containment::Strong, Some(&candidates));
        ensure!(
            !found,
            "certified placement {placement:?}: enumeration finds an immersion"
        );
    }
    Ok(())
}

fn complete_on(u: &[Vertex]) -> (Graph, BTreeMap<Vertex, Vertex>) {
    let pattern = complete_pattern(u.len());
    let placement = (0..u.len())
        .map(|i| (Vertex::new(i.to_string()), u[i].clone()))
        .collect();
    (pattern, placement)
}

fn cut_bound_soundness(_: u64) -> std::result::Result<String, String> {
    let (mut certificates, mut sets) = (0, 0);
    for n in 0..=2 {
        let f = farey_with_order(n);
        let vs: Vec<Vertex> = f.graph.vertices().cloned().collect();
        for k in 1..=5.min(vs.len()) {
            for u in vs.iter().cloned().combinations(k) {
                sets += 1;
                let set: BTreeSet<Vertex> = u.iter().cloned().collect();
                let b = cut_bound_complete(&f.graph, &f.cyclic_order, &set).map_err(|e| e.to_string())?;
                if b.certifies_absence {
                    certificates += 1;
                    let (pattern, placement) = complete_on(&u);
                    confirm_absent(&pattern, &f.graph, &placement)?;
                }
            }
        }
        let h = halved_farey(n);
        let gl = h.grain_line();
        let hv: Vec<Vertex> = h.graph().vertices().cloned().collect();
        for k in 1..=5.min(hv.len()) {
            for u in hv.iter().cloned().combinations(k) {
                sets += 1;
                let set: BTreeSet<Vertex> = u.iter().cloned().collect();
                let b = cut_bound_complete_in_halved(&gl, &set).map_err(|e| e.to_string())?;
                if b.certifies_absence {
                    certificates += 1;
                    let placement = u.iter().map(|v| (v.clone(), v.clone())).collect();
                    let pattern = complete_pattern_named(&u);
                    confirm_absent(&pattern, h.graph(), &placement)?;
                }
            }
        }
        // Halved Farey patterns placed in every way on the halved host.
        for m in 0..=n {
            let pattern = halved_farey(m).graph().clone();
            let pv: Vec<Vertex> = pattern.vertices().cloned().collect();
            for images in hv.iter().cloned().permutations(pv.len()) {
                sets += 1;
                let placement: BTreeMap<Vertex, Vertex> = pv.iter().cloned().zip(images).collect();
                let b = cut_bound_farey_in_halved(&gl, &pattern, &placement).map_err(|e| e.to_string())?;
                if b.certifies_absence {
                    certificates += 1;
                    confirm_absent(&pattern, h.graph(), &placement)?;
                }
            }
        }
    }
    Ok(format!(
        "{certificates} certificates over {sets} placements, none contradicted"
    ))
}

fn complete_pattern_named(u: &[Vertex]) -> Graph {
    let mut g = Graph::new();
    for v in u {
        g.add_vertex(v.clone());
    }
    for (a, b) in u.iter().tuple_combinations() {
        g.insert_edge(crate::graph::Edge::new(a.clone(), b.clone()));
    }
    g
}

/// `x` and `y` joined by five paths of length two.
fn theta() -> GrainLine {
    let paths = (0..5)
        .map(|i| Path::from_names(&["x".to_string(), format!("m{i}"), "y".to_string()]))
        .collect();
    GrainLine::new("x".into(), "y".into(), vec!["x".into(), "y".into()], paths).expect("theta shape")
}

fn adversarial_experiment(_: u64) -> std::result::Result<String, String> {
    let horizon = 2;
    let families = vec![halved_farey(4).grain_line(), theta()];
    for (i, f) in families.iter().enumerate() {
        ensure!(check_grain_line(f).is_valid(), "family {i} is not a grain line");
    }
    let lengths = adversarial_length_function(&families, horizon).map_err(|e| e.to_string())?;
    ensure!(lengths.is_non_decreasing(), "ℓ = {lengths} decreases");
    for k in 0..=horizon {
        let mut longest = 0;
        for f in families.iter().take(2 * k + 1) {
            for p in &f.paths()[..=2 * k] {
                longest = longest.max(p.len());
            }
        }
        let mut expected = 1 + longest;
        if k == 1 {
            expected = expected.max(2);
        }
        ensure!(
            lengths.get(k) == expected,
            "ℓ({k}) = {}, expected {expected}",
            lengths.get(k)
        );
    }
    let report = theorem31_experiment(&families, horizon, &SearchOptions::default()).map_err(|e| e.to_string())?;
    ensure!(report.exhaustive, "a search ran out of budget");
    for f in &report.families {
        ensure!(
            f.status == "absent",
            "family {} is {} in the truncation",
            f.index,
            f.status
        );
    }
    Ok(format!(
        "ℓ = ({lengths}); no family subdivides the {}-vertex truncation (finite evidence only, not conclusive)",
        report.host_vertices
    ))
}

fn dive_invariants(_: u64) -> std::result::Result<String, String> {
    let outer = halved_farey(8).grain_line();
    let inner = outer.subsequence(&[0, 2, 4, 6, 8]).map_err(|e| e.to_string())?;
    let trace = dive(&outer, &inner, 3).map_err(|e| e.to_string())?;
    ensure!(!trace.truncated, "trace stopped: {:?}", trace.reason);
    ensure!(trace.depths.len() == 3, "only {} steps", trace.depths.len());
    let failures = check_dive_trace(&outer, &inner, &trace, Some(&LengthFunction::halved(8)));
    ensure!(failures.is_empty(), "{}", failures.join("; "));
    Ok(format!(
        "q = {}, depths {:?}, Q lengths {:?}",
        trace.q.unwrap_or_default(),
        trace.depths,
        trace.q_path_lengths
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_out_of_range() {
        assert!(run_criterion(0, 0).is_none());
        assert!(run_criterion(criterion_count() + 1, 0).is_none());
    }

    #[test]
    fn walks_are_simple() {
        let g = halved_farey(3).graph().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = random_walk(&g, &mut rng, 6);
            assert!(Path::new(p.vertices().to_vec()).is_ok());
            assert!(p.validate_in(&g).is_ok());
        }
    }
}
