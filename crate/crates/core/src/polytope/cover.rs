use std::collections::BTreeSet;

use super::flow::FlowNetwork;
use super::{BVector, FractionalAssignment};
use crate::error::{Error, Result};
use crate::graph::{edge, Bipartition, DynamicGraph, Edge};

/// The bipartite double cover of a graph.
///
/// Vertex `v` has copies `v' = v` (left side) and `v'' = v + n` (right side).
/// Each edge `(v_j, v_l)` with `j < l` maps to `(v'_j, v''_l)` and
/// `(v''_j, v'_l)`, and both copies of `v` inherit `b_v`.
#[derive(Debug, Clone)]
pub struct DoubleCover {
    pub graph: DynamicGraph,
    pub b: BVector,
    pub sides: Bipartition,
    n: usize,
}

impl DoubleCover {
    /// The two images `(e', e'')` of an edge of the base graph.
    pub fn images(&self, e: Edge) -> (Edge, Edge) {
        cover_images(self.n, e)
    }

    pub fn base_n(&self) -> usize {
        self.n
    }
}

fn cover_images(n: usize, e: Edge) -> (Edge, Edge) {
    (edge(e.u(), e.v() + n), edge(e.u() + n, e.v()))
}

pub fn double_cover(g: &DynamicGraph, b: &BVector) -> DoubleCover {
    let n = g.n();
    let mut cover = DynamicGraph::new(2 * n);
    for e in g.edges() {
        let (a, bb) = cover_images(n, e);
        cover.insert(a);
        cover.insert(bb);
    }
    let caps: Vec<u32> = b.as_slice().iter().chain(b.as_slice()).copied().collect();
    DoubleCover {
        graph: cover,
        b: BVector(caps),
        sides: Bipartition::split_at(2 * n, n),
        n,
    }
}

/// Maximum b-matching of a bipartite graph by max flow: source → left vertex
/// with capacity `b_v`, unit arcs left → right per edge, right vertex → sink
/// with capacity `b_v`. Integral capacities give an integral optimum.
pub fn max_bipartite_bmatching(g: &DynamicGraph, sides: &Bipartition, b: &BVector) -> Result<BTreeSet<Edge>> {
    sides.check(g)?;
    if b.len() != g.n() {
        return Err(Error::InvalidParameter(format!(
            "capacity vector has {} entries for {} vertices",
            b.len(),
            g.n()
        )));
    }
    let n = g.n();
    let (source, sink) = (n, n + 1);
    let mut net = FlowNetwork::new(n + 2);
    for v in 0..n {
        if g.degree(v) == 0 {
            continue;
        }
        if sides.is_left(v) {
            net.add_arc(source, v, b.get(v) as u64);
        } else {
            net.add_arc(v, sink, b.get(v) as u64);
        }
    }
    let arcs: Vec<(Edge, usize)> = g
        .edges()
        .map(|e| {
            let (l, r) = if sides.is_left(e.u()) { (e.u(), e.v()) } else { (e.v(), e.u()) };
            (e, net.add_arc(l, r, 1))
        })
        .collect();
    net.max_flow(source, sink);
    Ok(arcs
        .into_iter()
        .filter(|&(_, id)| net.flow(id) == 1)
        .map(|(e, _)| e)
        .collect())
}

/// An optimal fractional b-matching with entries in `{0, ½, 1}`.
///
/// Bipartite inputs are solved directly and come out integral. Otherwise an
/// integral optimum `y` of the double cover is projected back as
/// `x_e = (y_{e'} + y_{e''}) / 2`; lifting any feasible `x` to the cover
/// doubles its value, so the projection is optimal.
pub fn half_integral_optimum(g: &DynamicGraph, b: &BVector) -> Result<FractionalAssignment> {
    if b.len() != g.n() {
        return Err(Error::InvalidParameter(format!(
            "capacity vector has {} entries for {} vertices",
            b.len(),
            g.n()
        )));
    }
    if let Ok(sides) = Bipartition::detect(g) {
        let y = max_bipartite_bmatching(g, &sides, b)?;
        return Ok(FractionalAssignment::from_edges(g.n(), y));
    }
    let cover = double_cover(g, b);
    let y = max_bipartite_bmatching(&cover.graph, &cover.sides, &cover.b)?;
    let mut x = FractionalAssignment::new(g.n());
    for e in g.edges() {
        let (a, bb) = cover.images(e);
        let twice = y.contains(&a) as u8 + y.contains(&bb) as u8;
        if twice > 0 {
            x.set_twice(e, twice);
        }
    }
    Ok(x)
}
