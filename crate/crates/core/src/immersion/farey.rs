use std::collections::BTreeMap;

use super::{verify_immersion, ImmersionModel};
use crate::error::{precondition, Error, Result};
use crate::generators::halved_farey;
use crate::grainline::{check_grain_line, GrainLine};
use crate::graph::Vertex;

/// Branch sets `U_0 ⊂ U_1 ⊂ … ⊂ U_m`, each listed in `≤_L` order.
///
/// `U_0 = {x, y}`. For each consecutive pair `a <_L b` of `U_n`, let `b'` be
/// the `≤_L`-least vertex of depth at most `n` in `(a, b]_L`; the new vertex
/// is the `≤_L`-least inner vertex of `a P_{n+1} b'` strictly between `a`
/// and `b'`.
pub fn halved_farey_branch_sets(gl: &GrainLine, m: usize) -> Result<Vec<Vec<Vertex>>> {
    if let Some(v) = check_grain_line(gl).violations.first() {
        return Err(precondition(format!("not a grain line: {v}")));
    }
    if gl.horizon() < m {
        return Err(precondition(format!(
            "level {m} needs path P_{m}, but the horizon is {}",
            gl.horizon()
        )));
    }
    let mut levels = vec![vec![gl.x().clone(), gl.y().clone()]];
    for n in 0..m {
        let current = &levels[n];
        let mut next = Vec::with_capacity(2 * current.len() - 1);
        for w in current.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let pa = gl.l_position(a).expect("branch vertices lie in L");
            let pb = gl.l_position(b).expect("branch vertices lie in L");
            let b_prime = gl.order()[pa + 1..=pb]
                .iter()
                .find(|v| gl.vertex_depth(v).is_ok_and(|d| d <= n))
                .expect("b itself has depth at most n");
            let pb_prime = gl.l_position(b_prime).expect("in L");
            let (Some(i), Some(j)) = (gl.position_on_path(n + 1, a), gl.position_on_path(n + 1, b_prime)) else {
                return Err(precondition(format!(
                    "level {}: `{a}` or `{b_prime}` is missing from P_{}",
                    n + 1,
                    n + 1
                )));
            };
            let seg = gl.path(n + 1).slice(i, j);
            let witness = seg
                .inner_vertices()
                .iter()
                .filter_map(|v| gl.l_position(v).map(|p| (p, v)))
                .filter(|&(p, _)| pa < p && p < pb_prime)
                .min()
                .map(|(_, v)| v.clone());
            let Some(v) = witness else {
                return Err(precondition(format!(
                    "level {}: no inner vertex of `{a}`…`{b_prime}` on P_{} lies strictly between them in L",
                    n + 1,
                    n + 1
                )));
            };
            next.push(a.clone());
            next.push(v);
        }
        next.push(gl.y().clone());
        levels.push(next);
    }
    Ok(levels)
}

/// A strong immersion of the halved Farey graph of order `m` in the graph
/// of a wildly presented grain line. Level-`n` pattern edges are routed
/// along `P_n` between consecutive vertices of `U_n`.
pub fn immerse_halved_farey(gl: &GrainLine, m: usize) -> Result<ImmersionModel> {
    let levels = halved_farey_branch_sets(gl, m)?;
    let pattern = halved_farey(m);
    let top = &levels[m];
    let branch: BTreeMap<Vertex, Vertex> = pattern.order().iter().cloned().zip(top.iter().cloned()).collect();
    let mut routes = BTreeMap::new();
    for (e, &n) in pattern.edge_levels() {
        let (a, b) = (&branch[e.low()], &branch[e.high()]);
        let path = &gl.path(n);
        let (Some(i), Some(j)) = (path.position(a), path.position(b)) else {
            return Err(precondition(format!("level {n}: branch vertex missing from P_{n}")));
        };
        routes.insert(e.clone(), path.slice(i, j));
    }
    let model = ImmersionModel {
        pattern: pattern.graph().clone(),
        host: gl.host(),
        branch,
        routes,
        strong: true,
    };
    let report = verify_immersion(&model);
    if let Some(v) = report.violations.first() {
        return Err(Error::Invariant(format!("constructed model fails verification: {v}")));
    }
    Ok(model)
}
