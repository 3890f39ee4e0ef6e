//! Fractional b-matchings with half-integral values.
//!
//! Values are stored doubled (`0`, `1`, `2` for `0`, `½`, `1`) so that all
//! feasibility and value arithmetic is exact. The submodules cover:
//!
//! * [`cover`]: the bipartite double cover, an exact bipartite b-matching by
//!   max flow, and an optimal half-integral fractional b-matching obtained by
//!   projecting an integral optimum on the double cover;
//! * [`euler`]: Euler partitions into trails and circuits;
//! * [`rounding`]: rounding a half-integral solution to an integral
//!   b-matching that keeps at least a `1 - 1/(3β)` fraction of its value.

pub mod cover;
pub mod euler;
mod flow;
pub mod rounding;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, Edge, VertexId};

pub use cover::{double_cover, half_integral_optimum, max_bipartite_bmatching, DoubleCover};
pub use euler::{euler_partition, EulerPartition, Walk};
pub use rounding::{round_half_integral, round_half_integral_traced, RoundingTrace};

/// An exact multiple of ½, stored as twice its value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn from_int(v: i64) -> Self {
        HalfInt(2 * v)
    }

    #[inline]
    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Per-vertex capacities `b_v ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BVector(Vec<u32>);

impl BVector {
    pub fn new(b: Vec<u32>) -> Result<Self> {
        if let Some(v) = b.iter().position(|&x| x == 0) {
            return Err(Error::InvalidParameter(format!("b_{v} must be at least 1")));
        }
        Ok(BVector(b))
    }

    /// `b ≡ k` on `n` vertices.
    pub fn uniform(n: usize, k: u32) -> Self {
        assert!(k >= 1, "capacities must be positive");
        BVector(vec![k; n])
    }

    #[inline]
    pub fn get(&self, v: VertexId) -> u32 {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `β = min_v b_v` (1 for an empty vertex set).
    pub fn beta(&self) -> u32 {
        self.0.iter().copied().min().unwrap_or(1)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

/// A vector `x ∈ {0, ½, 1}^E` with per-vertex loads `x(v) = Σ_{e∋v} x_e`.
///
/// Only nonzero entries are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalAssignment {
    twice: BTreeMap<Edge, u8>,
    twice_load: Vec<u64>,
    twice_total: u64,
}

impl FractionalAssignment {
    pub fn new(n: usize) -> Self {
        FractionalAssignment {
            twice: BTreeMap::new(),
            twice_load: vec![0; n],
            twice_total: 0,
        }
    }

    /// The 0/1 vector of an edge set.
    pub fn from_edges<I: IntoIterator<Item = Edge>>(n: usize, edges: I) -> Self {
        let mut x = FractionalAssignment::new(n);
        for e in edges {
            x.set_twice(e, 2);
        }
        x
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.twice_load.len()
    }

    /// `2·x_e`.
    #[inline]
    pub fn twice(&self, e: Edge) -> u8 {
        self.twice.get(&e).copied().unwrap_or(0)
    }

    pub fn get(&self, e: Edge) -> HalfInt {
        HalfInt(self.twice(e) as i64)
    }

    /// Sets `2·x_e`; returns the previous doubled value. Panics unless
    /// `twice ≤ 2`.
    pub fn set_twice(&mut self, e: Edge, twice: u8) -> u8 {
        assert!(twice <= 2, "half-integral entries lie in {{0, 1/2, 1}}");
        let old = if twice == 0 {
            self.twice.remove(&e).unwrap_or(0)
        } else {
            self.twice.insert(e, twice).unwrap_or(0)
        };
        for w in e.endpoints() {
            self.twice_load[w] = self.twice_load[w] + twice as u64 - old as u64;
        }
        self.twice_total = self.twice_total + twice as u64 - old as u64;
        old
    }

    /// `2·x(v)`.
    #[inline]
    pub fn twice_load(&self, v: VertexId) -> u64 {
        self.twice_load[v]
    }

    pub fn load(&self, v: VertexId) -> HalfInt {
        HalfInt(self.twice_load[v] as i64)
    }

    /// `c(x) = Σ_e x_e`.
    pub fn value(&self) -> HalfInt {
        HalfInt(self.twice_total as i64)
    }

    /// Nonzero entries `(e, 2·x_e)` in ascending edge order.
    pub fn iter(&self) -> impl Iterator<Item = (Edge, u8)> + '_ {
        self.twice.iter().map(|(&e, &t)| (e, t))
    }

    pub fn support_len(&self) -> usize {
        self.twice.len()
    }

    /// Edges with `x_e = ½`.
    pub fn half_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.iter().filter(|&(_, t)| t == 1).map(|(e, _)| e)
    }

    /// Edges with `x_e = 1`.
    pub fn full_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.iter().filter(|&(_, t)| t == 2).map(|(e, _)| e)
    }

    pub fn is_integral(&self) -> bool {
        self.twice.values().all(|&t| t == 2)
    }

    /// The set `{e : x_e = 1}`; meaningful when integral.
    pub fn integral_edges(&self) -> BTreeSet<Edge> {
        self.full_edges().collect()
    }
}

/// True iff every supported edge lies in `g` and `x(v) ≤ b_v` everywhere.
pub fn verify_feasible(x: &FractionalAssignment, b: &BVector, g: &DynamicGraph) -> bool {
    check_feasible(x, b, Some(g)).is_ok()
}

/// Feasibility with a description of the first violation. Pass `None` to
/// skip the support check.
pub fn check_feasible(x: &FractionalAssignment, b: &BVector, g: Option<&DynamicGraph>) -> Result<()> {
    if b.len() != x.n() {
        return Err(Error::Infeasible(format!(
            "capacity vector has {} entries for {} vertices",
            b.len(),
            x.n()
        )));
    }
    if let Some(g) = g {
        if let Some((e, _)) = x.iter().find(|&(e, _)| !g.contains(e)) {
            return Err(Error::Infeasible(format!("edge {e} carries value but is not in the graph")));
        }
    }
    for v in 0..x.n() {
        if x.twice_load(v) > 2 * b.get(v) as u64 {
            return Err(Error::Infeasible(format!(
                "load {} at vertex {v} exceeds b = {}",
                x.load(v),
                b.get(v)
            )));
        }
    }
    Ok(())
}

/// `c(x)`.
pub fn value(x: &FractionalAssignment) -> HalfInt {
    x.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge;

    #[test]
    fn halfint_display_and_arith() {
        assert_eq!(HalfInt::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_int(2).to_string(), "2");
        assert_eq!(HalfInt::from_twice(3) + HalfInt::from_twice(1), HalfInt::from_int(2));
        assert_eq!(HalfInt::from_twice(3).to_f64(), 1.5);
    }

    #[test]
    fn loads_and_value_track_updates() {
        let mut x = FractionalAssignment::new(3);
        x.set_twice(edge(0, 1), 1);
        x.set_twice(edge(1, 2), 1);
        x.set_twice(edge(0, 2), 1);
        assert_eq!(x.value(), HalfInt::from_twice(3));
        assert_eq!(x.load(1), HalfInt::from_int(1));
        assert_eq!(x.set_twice(edge(0, 2), 0), 1);
        assert_eq!(x.value(), HalfInt::from_int(1));
        assert_eq!(x.support_len(), 2);
    }

    #[test]
    fn feasibility() {
        let g = DynamicGraph::from_edges(3, [edge(0, 1), edge(1, 2), edge(0, 2)]).unwrap();
        let mut x = FractionalAssignment::new(3);
        for e in g.edges() {
            x.set_twice(e, 1);
        }
        assert!(verify_feasible(&x, &BVector::uniform(3, 1), &g));
        x.set_twice(edge(0, 1), 2);
        assert!(!verify_feasible(&x, &BVector::uniform(3, 1), &g));
        assert!(verify_feasible(&x, &BVector::uniform(3, 2), &g));
        let path = DynamicGraph::from_edges(3, [edge(0, 1)]).unwrap();
        assert!(!verify_feasible(&x, &BVector::uniform(3, 2), &path));
    }

    #[test]
    fn bvector_rejects_zero() {
        assert!(BVector::new(vec![1, 0]).is_err());
        assert_eq!(BVector::new(vec![3, 1, 2]).unwrap().beta(), 1);
    }
}
