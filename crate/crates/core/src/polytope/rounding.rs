//! Rounding a half-integral b-matching to an integral one.
//!
//! Let `H` be the subgraph of edges with `x_e = ½`. Rounding a walk
//! "starting up" adds `½` to its odd-indexed edges and removes `½` from its
//! even-indexed ones; every interior vertex of the walk sees one of each.
//!
//! 1. Every trail of an Euler partition of `H` is rounded starting up from
//!    its first vertex. Trail endpoints have odd `H`-degree, so their load
//!    is at most `b_v - ½` and absorbs the extra `½`. Afterwards `H` has only
//!    even degrees.
//! 2. `H` is re-partitioned into simple cycles until nothing changes. Even
//!    cycles are rounded as is. An odd cycle through a vertex `u` with
//!    `x(u) ≤ b_u - 1` is rounded starting up at `u`. Two odd cycles sharing
//!    a vertex are joined there into an even circuit and rounded. None of
//!    these lowers `c(x)`.
//! 3. What is left is a set of vertex-disjoint odd cycles whose vertices are
//!    all tight. Each is rounded starting *down* at its lowest vertex, which
//!    costs `½` per cycle; a tight cycle on at least three vertices carries
//!    load at least `3β`, which bounds the loss by `c(x) / (3β)`.

use std::collections::{BTreeMap, BTreeSet};

use super::euler::{euler_partition, Walk};
use super::{check_feasible, BVector, FractionalAssignment};
use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, VertexId};

/// Counts of the rounding steps taken, per phase.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoundingTrace {
    pub trails: usize,
    pub even_cycles: usize,
    pub slack_cycles: usize,
    pub joined_pairs: usize,
    pub tight_cycles: usize,
    pub partition_rounds: usize,
}

/// Rounds a feasible half-integral `x` to a feasible integral b-matching of
/// value at least `(1 - 1/(3β))·c(x)`.
pub fn round_half_integral(x: &FractionalAssignment, b: &BVector) -> Result<FractionalAssignment> {
    round_half_integral_traced(x, b).map(|(y, _)| y)
}

pub fn round_half_integral_traced(
    x: &FractionalAssignment,
    b: &BVector,
) -> Result<(FractionalAssignment, RoundingTrace)> {
    check_feasible(x, b, None)?;
    let mut y = x.clone();
    let mut trace = RoundingTrace::default();

    // Phase 1: trails.
    let h = half_graph(&y);
    let partition = euler_partition(&h);
    for trail in &partition.trails {
        round_walk(&mut y, trail, true);
        trace.trails += 1;
    }
    let h = half_graph(&y);
    if let Some(v) = (0..h.n()).find(|&v| h.degree(v) % 2 == 1) {
        return Err(Error::Invariant(format!(
            "vertex {v} still has odd half-degree after rounding trails"
        )));
    }

    // Phase 2: even circuits and slack odd cycles, to a fixpoint.
    let mut cycles;
    loop {
        let h = half_graph(&y);
        let partition = euler_partition(&h);
        trace.partition_rounds += 1;
        if !partition.trails.is_empty() {
            return Err(Error::Invariant("trail in an all-even half graph".into()));
        }
        cycles = partition
            .circuits
            .iter()
            .flat_map(Walk::split_cycles)
            .collect::<Vec<_>>();
        let mut progress = false;
        let mut odd = Vec::new();
        for c in cycles {
            if c.len() % 2 == 0 {
                round_walk(&mut y, &c, true);
                trace.even_cycles += 1;
                progress = true;
            } else {
                odd.push(c);
            }
        }
        let mut remaining = Vec::new();
        for c in odd {
            let slack = c.vertices[..c.len()]
                .iter()
                .copied()
                .filter(|&v| y.twice_load(v) + 2 <= 2 * b.get(v) as u64)
                .min();
            match slack {
                Some(u) => {
                    round_walk(&mut y, &c.rotated_to(u).expect("u lies on the cycle"), true);
                    trace.slack_cycles += 1;
                    progress = true;
                }
                None => remaining.push(c),
            }
        }
        let (joined, untouched) = join_sharing_pairs(remaining);
        for circuit in &joined {
            round_walk(&mut y, circuit, true);
            trace.joined_pairs += 1;
            progress = true;
        }
        cycles = untouched;
        if !progress {
            break;
        }
    }

    // Phase 3: vertex-disjoint tight odd cycles.
    check_disjoint_tight_odd_cycles(&y, b)?;
    for c in &cycles {
        let u = *c.vertices.iter().min().expect("cycle has vertices");
        round_walk(&mut y, &c.rotated_to(u).expect("u lies on the cycle"), false);
        trace.tight_cycles += 1;
    }

    if !y.is_integral() {
        return Err(Error::Invariant("rounding left fractional entries".into()));
    }
    check_feasible(&y, b, None)?;
    let beta = b.beta() as i64;
    // 2·c(y) ≥ (1 - 1/(3β))·2·c(x), cleared of denominators.
    if 3 * beta * y.value().twice() < (3 * beta - 1) * x.value().twice() {
        return Err(Error::Invariant(format!(
            "rounded value {} below (1 - 1/(3β))·{}",
            y.value(),
            x.value()
        )));
    }
    Ok((y, trace))
}

fn half_graph(x: &FractionalAssignment) -> DynamicGraph {
    let mut h = DynamicGraph::new(x.n());
    for e in x.half_edges() {
        h.insert(e);
    }
    h
}

/// Alternately adds and removes ½ along the walk, beginning with an addition
/// when `up` is set.
fn round_walk(x: &mut FractionalAssignment, walk: &Walk, up: bool) {
    for (i, e) in walk.edges().enumerate() {
        debug_assert_eq!(x.twice(e), 1);
        let raise = (i % 2 == 0) == up;
        x.set_twice(e, if raise { 2 } else { 0 });
    }
}

/// Greedily pairs odd cycles that share a vertex into even circuits. Returns
/// the circuits and the cycles left unpaired.
fn join_sharing_pairs(cycles: Vec<Walk>) -> (Vec<Walk>, Vec<Walk>) {
    let mut by_vertex: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for (i, c) in cycles.iter().enumerate() {
        for &v in &c.vertices[..c.len()] {
            by_vertex.entry(v).or_default().push(i);
        }
    }
    let mut used = vec![false; cycles.len()];
    let mut joined = Vec::new();
    for i in 0..cycles.len() {
        if used[i] {
            continue;
        }
        let partner = cycles[i].vertices[..cycles[i].len()].iter().find_map(|v| {
            by_vertex[v]
                .iter()
                .copied()
                .find(|&j| j != i && !used[j])
                .map(|j| (*v, j))
        });
        if let Some((v, j)) = partner {
            used[i] = true;
            used[j] = true;
            let first = cycles[i].rotated_to(v).expect("shared vertex");
            let second = cycles[j].rotated_to(v).expect("shared vertex");
            let mut vertices = first.vertices;
            vertices.extend_from_slice(&second.vertices[1..]);
            joined.push(Walk { vertices });
        }
    }
    let untouched = cycles
        .into_iter()
        .zip(used)
        .filter(|(_, u)| !u)
        .map(|(c, _)| c)
        .collect();
    (joined, untouched)
}

/// The structure left after phase 2: every vertex of the half graph has
/// degree 0 or 2, every component is an odd cycle, every cycle vertex is
/// tight.
fn check_disjoint_tight_odd_cycles(x: &FractionalAssignment, b: &BVector) -> Result<()> {
    let h = half_graph(x);
    let mut seen = vec![false; h.n()];
    for s in 0..h.n() {
        match h.degree(s) {
            0 => continue,
            2 => {}
            d => {
                return Err(Error::Invariant(format!(
                    "residual half graph has degree {d} at {s}; odd cycles are not disjoint"
                )))
            }
        }
        if x.twice_load(s) != 2 * b.get(s) as u64 {
            return Err(Error::Invariant(format!("residual cycle vertex {s} is not tight")));
        }
        if seen[s] {
            continue;
        }
        let mut size = 0;
        let mut stack = vec![s];
        let mut comp = BTreeSet::new();
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            size += 1;
            comp.insert(v);
            stack.extend(h.neighbors(v));
        }
        if size % 2 == 0 {
            return Err(Error::Invariant(format!(
                "residual component {comp:?} is an even cycle"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge;
    use crate::polytope::{half_integral_optimum, HalfInt};

    fn all_half(n: usize, edges: &[(usize, usize)]) -> FractionalAssignment {
        let mut x = FractionalAssignment::new(n);
        for &(a, b) in edges {
            x.set_twice(edge(a, b), 1);
        }
        x
    }

    #[test]
    fn triangle_meets_the_bound_with_equality() {
        let x = all_half(3, &[(0, 1), (1, 2), (0, 2)]);
        let b = BVector::uniform(3, 1);
        let (y, trace) = round_half_integral_traced(&x, &b).unwrap();
        assert_eq!(y.value(), HalfInt::from_int(1));
        // (1 - 1/3) · 3/2 = 1.
        assert_eq!(3 * y.value().twice(), 2 * x.value().twice());
        assert_eq!(trace.tight_cycles, 1);
        assert!(y.is_integral());
    }

    #[test]
    fn path_trail_keeps_value() {
        let x = all_half(3, &[(0, 1), (1, 2)]);
        let (y, trace) = round_half_integral_traced(&x, &BVector::uniform(3, 1)).unwrap();
        assert_eq!(trace.trails, 1);
        assert_eq!(y.value(), HalfInt::from_int(1));
        assert_eq!(y.integral_edges().into_iter().collect::<Vec<_>>(), vec![edge(0, 1)]);
    }

    #[test]
    fn integral_input_unchanged() {
        let x = FractionalAssignment::from_edges(4, [edge(0, 1), edge(2, 3)]);
        let y = round_half_integral(&x, &BVector::uniform(4, 1)).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn slack_triangle_rounds_up() {
        let x = all_half(3, &[(0, 1), (1, 2), (0, 2)]);
        let b = BVector::new(vec![2, 1, 1]).unwrap();
        let (y, trace) = round_half_integral_traced(&x, &b).unwrap();
        assert_eq!(trace.slack_cycles, 1);
        assert_eq!(y.value(), HalfInt::from_int(2));
    }

    #[test]
    fn tight_odd_circuits_sharing_vertices_are_joined() {
        // Six-cycle plus chords 0-2, 2-4, 4-0: all vertices tight with
        // b = (2,1,2,1,2,1); c(x) = 9/2 and the optimum integral value is 4.
        let mut edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        edges.extend([(0, 2), (2, 4), (0, 4)]);
        let x = all_half(6, &edges);
        let b = BVector::new(vec![2, 1, 2, 1, 2, 1]).unwrap();
        let (y, _) = round_half_integral_traced(&x, &b).unwrap();
        assert!(y.value() >= HalfInt::from_int(4));
    }

    #[test]
    fn odd_trail_is_still_feasible() {
        // Non-optimal input: a single half edge is an odd trail.
        let x = all_half(2, &[(0, 1)]);
        let y = round_half_integral(&x, &BVector::uniform(2, 1)).unwrap();
        assert_eq!(y.value(), HalfInt::from_int(1));
    }

    #[test]
    fn infeasible_input_rejected() {
        let x = FractionalAssignment::from_edges(3, [edge(0, 1), edge(1, 2)]);
        assert!(matches!(
            round_half_integral(&x, &BVector::uniform(3, 1)),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn petersen_like_optimum_rounds() {
        let g = DynamicGraph::from_edges(
            7,
            [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5), (5, 6), (0, 6)].map(|(a, b)| edge(a, b)),
        )
        .unwrap();
        let b = BVector::uniform(7, 1);
        let x = half_integral_optimum(&g, &b).unwrap();
        let y = round_half_integral(&x, &b).unwrap();
        assert!(3 * y.value().twice() >= 2 * x.value().twice());
    }
}
