use serde::{Deserialize, Serialize};

use crate::error::{invalid, precondition, Error, Result};
use crate::generators::LengthFunction;
use crate::grainline::{check_grain_line, check_prime_axioms, GrainLine, Segment};
use crate::graph::{Edge, Path, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Same,
    Reversed,
}

/// Depth sequence `p_0 < p_1 < …` with the segments `u_{k+1} P_{p_k} v_{k+1}`
/// found inside `u_k Q_{q+k} v_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiveTrace {
    pub q: Option<usize>,
    /// Whether the inner line was read backwards to agree with `≤_L`.
    pub orientation: Orientation,
    /// `(u_0, v_0)`: the inner line's ends.
    pub start: (Vertex, Vertex),
    /// `p_k`
    pub depths: Vec<usize>,
    /// `(u_{k+1}, v_{k+1})`, with `u_{k+1} <_L v_{k+1}`.
    pub intervals: Vec<(Vertex, Vertex)>,
    pub segments: Vec<Segment>,
    /// Length of `Q_{q+k}`.
    pub q_path_lengths: Vec<usize>,
    pub truncated: bool,
    pub reason: Option<String>,
}

/// The 𝒫-segment of depth `d` inside `p`, where `d` is the largest edge
/// depth on `p`: the stretch around the first depth-`d` edge whose inner
/// vertices all have depth at least `d`.
pub fn first_dive(gl: &GrainLine, p: &Path) -> Result<Segment> {
    if p.is_empty() {
        return Err(precondition("path has no edges"));
    }
    let depths: Vec<usize> = p.edges().map(|e| gl.edge_depth(&e)).collect::<Result<_>>()?;
    let d = *depths.iter().max().unwrap();
    let vd = |v: &Vertex| gl.vertex_depth(v);
    let (ds, de) = (vd(p.start())?, vd(p.end())?);
    if ds >= d || de >= d {
        return Err(precondition(format!(
            "largest edge depth {d} does not exceed the end depths {ds} and {de}"
        )));
    }
    let first = depths.iter().position(|&k| k == d).unwrap();
    let vs = p.vertices();
    let mut lo = first;
    while vd(&vs[lo])? >= d {
        lo -= 1;
    }
    let mut hi = first + 1;
    while vd(&vs[hi])? >= d {
        hi += 1;
    }
    let sub = p.slice(lo, hi);
    let segments = gl.p_segments(d)?;
    segments
        .into_iter()
        .find(|s| same_path(&s.path, &sub))
        .ok_or_else(|| Error::Invariant(format!("stretch {sub} at depth {d} is not a segment")))
}

fn same_path(a: &Path, b: &Path) -> bool {
    a == b || *a == b.reversed()
}

/// Dives simultaneously into `outer` and `inner` for `k_max` steps.
///
/// `q` is the first index whose `Q_q` has an edge deeper than both ends of
/// the inner line. Each later step takes the least internal vertex `w` of
/// the previous segment strictly inside its interval, follows `u Q v` from
/// `w` along its first edge deeper than the previous segment, and dives on
/// that stretch. Running out of inner paths or of witnesses ends the trace
/// early with a reason.
pub fn dive(outer: &GrainLine, inner: &GrainLine, k_max: usize) -> Result<DiveTrace> {
    check_prime_axioms(outer)?;
    if let Some(v) = check_grain_line(inner).violations.first() {
        return Err(invalid(format!("inner line is not a grain line: {v}")));
    }
    for (n, path) in inner.paths().iter().enumerate() {
        for e in path.edges() {
            if outer.edge_depth(&e).is_err() {
                return Err(invalid(format!("edge {e} of Q_{n} is not an edge of the outer line")));
            }
        }
    }
    let (ix, iy) = (inner.x(), inner.y());
    let (lx, ly) = (outer.l_position(ix), outer.l_position(iy));
    let (Some(lx), Some(ly)) = (lx, ly) else {
        return Err(invalid("inner ends are not in the outer L"));
    };
    let (inner, orientation) = if lx < ly {
        (inner.clone(), Orientation::Same)
    } else {
        (inner.reversed(), Orientation::Reversed)
    };
    let start = (inner.x().clone(), inner.y().clone());
    let mut trace = DiveTrace {
        q: None,
        orientation,
        start: start.clone(),
        depths: Vec::new(),
        intervals: Vec::new(),
        segments: Vec::new(),
        q_path_lengths: Vec::new(),
        truncated: false,
        reason: None,
    };
    let stop = |mut t: DiveTrace, why: String| {
        t.truncated = true;
        t.reason = Some(why);
        Ok(t)
    };
    let p = outer.vertex_depth(&start.0)?.max(outer.vertex_depth(&start.1)?);
    let deep = |e: &Edge, than: usize| outer.edge_depth(e).is_ok_and(|k| k > than);
    let Some(q) = (0..inner.paths().len()).find(|&n| inner.path(n).edges().any(|e| deep(&e, p))) else {
        return stop(trace, format!("no inner path has an edge deeper than {p}"));
    };
    trace.q = Some(q);
    if k_max == 0 {
        return Ok(trace);
    }

    let mut seg = first_dive(outer, inner.path(q))?;
    push(&mut trace, outer, seg.clone(), inner.path(q).len());
    for k in 1..k_max {
        let (u, v) = trace.intervals[k - 1].clone();
        let prev = trace.depths[k - 1];
        let (lu, lv) = (outer.l_position(&u).unwrap(), outer.l_position(&v).unwrap());
        let Some(w) = seg
            .path
            .inner_vertices()
            .iter()
            .filter(|w| outer.l_position(w).is_some_and(|lw| lu < lw && lw < lv))
            .min_by_key(|w| outer.l_position(w))
            .cloned()
        else {
            return stop(
                trace,
                format!("step {k}: segment has no internal vertex inside its interval"),
            );
        };
        let n = q + k;
        if n > inner.horizon() {
            return stop(trace, format!("step {k}: the inner line has no path Q_{n}"));
        }
        let Some(sub) = inner.path(n).subpath(&u, &v) else {
            return stop(trace, format!("step {k}: `{u}` or `{v}` is not on Q_{n}"));
        };
        let Some(i) = sub.position(&w) else {
            return stop(trace, format!("step {k}: `{w}` is not on Q_{n}"));
        };
        let vs = sub.vertices();
        let left = i > 0 && deep(&Edge::new(vs[i - 1].clone(), w.clone()), prev);
        let right = i + 1 < vs.len() && deep(&Edge::new(w.clone(), vs[i + 1].clone()), prev);
        let shallow = |x: &Vertex| outer.vertex_depth(x).map_or(true, |d| d <= prev);
        let stretch = if left {
            let mut j = i - 1;
            while !shallow(&vs[j]) {
                j -= 1;
            }
            sub.slice(j, i)
        } else if right {
            let mut j = i + 1;
            while !shallow(&vs[j]) {
                j += 1;
            }
            sub.slice(i, j)
        } else {
            return stop(
                trace,
                format!("step {k}: no edge at `{w}` on Q_{n} is deeper than {prev}"),
            );
        };
        seg = first_dive(outer, &stretch)?;
        push(&mut trace, outer, seg.clone(), inner.path(n).len());
    }
    Ok(trace)
}

fn push(trace: &mut DiveTrace, outer: &GrainLine, seg: Segment, q_len: usize) {
    let (a, b) = (seg.u.clone(), seg.v.clone());
    let interval = if outer.l_position(&a) < outer.l_position(&b) {
        (a, b)
    } else {
        (b, a)
    };
    trace.depths.push(seg.depth);
    trace.intervals.push(interval);
    trace.segments.push(seg);
    trace.q_path_lengths.push(q_len);
}

/// Re-checks a trace from scratch: strict increase of depths, nesting of
/// intervals, each segment being a 𝒫-segment inside `u_k Q_{q+k} v_k`, and
/// with `lengths`, `|Q_{q+k}| ≥ ℓ(p_k)`. Returns the failures found.
pub fn check_dive_trace(
    outer: &GrainLine,
    inner: &GrainLine,
    trace: &DiveTrace,
    lengths: Option<&LengthFunction>,
) -> Vec<String> {
    let mut out = Vec::new();
    let inner = match trace.orientation {
        Orientation::Same => inner.clone(),
        Orientation::Reversed => inner.reversed(),
    };
    let Some(q) = trace.q else {
        if !trace.depths.is_empty() {
            out.push("depths recorded without a start index".into());
        }
        return out;
    };
    let pos = |v: &Vertex| outer.l_position(v);
    let (Ok(d0), Ok(d1)) = (outer.vertex_depth(&trace.start.0), outer.vertex_depth(&trace.start.1)) else {
        out.push("trace starts outside the outer line".into());
        return out;
    };
    let mut last_depth = d0.max(d1);
    let mut last = trace.start.clone();
    for (k, ((depth, interval), seg)) in trace
        .depths
        .iter()
        .zip(&trace.intervals)
        .zip(&trace.segments)
        .enumerate()
    {
        if *depth <= last_depth {
            out.push(format!("p_{k} = {depth} does not exceed {last_depth}"));
        }
        let (Some(a), Some(b), Some(la), Some(lb)) = (pos(&interval.0), pos(&interval.1), pos(&last.0), pos(&last.1))
        else {
            out.push(format!("interval {k} has ends outside L"));
            break;
        };
        if !(la <= a && a <= b && b <= lb) {
            out.push(format!(
                "[{}, {}] is not inside [{}, {}]",
                interval.0, interval.1, last.0, last.1
            ));
        }
        let is_segment = outer
            .p_segments(*depth)
            .is_ok_and(|ss| ss.iter().any(|s| same_path(&s.path, &seg.path)));
        if !is_segment {
            out.push(format!("segment {k} is not a 𝒫-segment of depth {depth}"));
        }
        let n = q + k;
        match (n <= inner.horizon())
            .then(|| inner.path(n).subpath(&last.0, &last.1))
            .flatten()
        {
            Some(host) => {
                if !contains_subpath(&host, &seg.path) {
                    out.push(format!("segment {k} is not a subpath of {} Q_{n} {}", last.0, last.1));
                }
                if let Some(l) = lengths {
                    if *depth <= l.max_order() && inner.path(n).len() < l.get(*depth) {
                        out.push(format!(
                            "Q_{n} has length {} < ℓ({depth}) = {}",
                            inner.path(n).len(),
                            l.get(*depth)
                        ));
                    }
                }
            }
            None => out.push(format!("Q_{n} does not contain {} and {}", last.0, last.1)),
        }
        last_depth = *depth;
        last = interval.clone();
    }
    out
}

fn contains_subpath(host: &Path, sub: &Path) -> bool {
    let h = host.vertices();
    let s = sub.vertices();
    let fwd = h.windows(s.len()).any(|w| w == s);
    let rev: Vec<Vertex> = s.iter().rev().cloned().collect();
    fwd || h.windows(s.len()).any(|w| w == rev.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generalised_halved_farey, halved_farey};

    #[test]
    fn last_path_dives_to_its_own_depth() {
        let gl = halved_farey(3).grain_line();
        let s = first_dive(&gl, gl.path(3)).unwrap();
        assert_eq!(s.depth, 3);
    }

    #[test]
    fn mixed_walk_dives_to_level_two() {
        let f = halved_farey(3);
        let gl = f.grain_line();
        // x, then along P_2 to the level-1 apex, then P_1 on to y.
        let apex = Vertex::new("1/0/1");
        let head = gl.path(2).subpath(gl.x(), &apex).unwrap();
        let tail = gl.path(1).subpath(&apex, gl.y()).unwrap();
        let p = head.concat_loop_erased(&tail).unwrap();
        let s = first_dive(&gl, &p).unwrap();
        assert_eq!(s.depth, 2);
    }

    #[test]
    fn shallow_path_rejected() {
        let gl = halved_farey(3).grain_line();
        assert!(first_dive(&gl, gl.path(0)).is_err());
    }

    #[test]
    fn even_paths_of_eighth_halved_farey() {
        let gl = halved_farey(8).grain_line();
        let inner = gl.subsequence(&[0, 2, 4, 6, 8]).unwrap();
        let t = dive(&gl, &inner, 3).unwrap();
        assert!(!t.truncated, "{:?}", t.reason);
        assert_eq!(t.q, Some(1));
        assert_eq!(t.depths, vec![2, 4, 6]);
        assert!(check_dive_trace(&gl, &inner, &t, None).is_empty());
    }

    #[test]
    fn reversed_inner_line() {
        let gl = halved_farey(6).grain_line();
        let inner = gl.subsequence(&[0, 2, 4, 6]).unwrap().reversed();
        let t = dive(&gl, &inner, 2).unwrap();
        assert_eq!(t.orientation, Orientation::Reversed);
        assert!(check_dive_trace(&gl, &inner, &t, None).is_empty());
    }

    #[test]
    fn zero_steps_and_short_lines() {
        let gl = halved_farey(6).grain_line();
        let inner = gl.subsequence(&[0, 2, 4, 6]).unwrap();
        let t = dive(&gl, &inner, 0).unwrap();
        assert!(t.q.is_some() && t.depths.is_empty() && !t.truncated);
        let two = gl.subsequence(&[0, 1]).unwrap();
        let t = dive(&gl, &two, 5).unwrap();
        assert!(t.truncated);
    }

    #[test]
    fn lengths_grow_with_depth() {
        let lengths = LengthFunction::new(vec![1, 2, 3, 4, 5]).unwrap();
        let f = generalised_halved_farey(&lengths, 4).unwrap();
        let gl = f.grain_line();
        let inner = gl.subsequence(&[0, 2, 4]).unwrap();
        let t = dive(&gl, &inner, 2).unwrap();
        assert!(check_dive_trace(&gl, &inner, &t, Some(&lengths)).is_empty());
    }
}
