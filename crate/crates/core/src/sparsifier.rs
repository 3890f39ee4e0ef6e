//! Color-sampling sparsification of a fractional k-matching.
//!
//! Edges are grouped by value into buckets `E_i` with
//! `x_e ∈ ((1+ε)^-i, (1+ε)^-i+1]`, `i = 1..=ℓ`. Bucket `i` has maximum degree
//! below `k(1+ε)^i` (for feasible `x`), and keeps a total proper coloring with
//! `3⌈k(1+ε)^i⌉` colors, so a random free color exists and is found in
//! expected O(1) tries. A request keeps low buckets whole and samples
//! `3⌈kd⌉` color classes from each high bucket.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::{check_proper, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, Edge};

/// Random color attempts before falling back to first-fit.
const RANDOM_TRIES: usize = 64;

/// Relative slack when snapping a value onto a bucket boundary.
const BOUNDARY_TOL: f64 = 1e-12;

/// Number of buckets `ℓ = ⌈2·log_{1+ε}(n/ε)⌉`, at least 1.
pub fn bucket_count(n: usize, eps: f64) -> usize {
    let raw = 2.0 * ((n.max(1) as f64) / eps).ln() / (1.0 + eps).ln();
    (raw - raw * BOUNDARY_TOL).ceil().max(1.0) as usize
}

/// The `i ∈ [1, ℓ]` with `(1+ε)^-i < x ≤ (1+ε)^-i+1`, or `None` when
/// `x ≤ (1+ε)^-ℓ`.
pub fn bucket_index(x: f64, eps: f64, ell: usize) -> Result<Option<usize>> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::InvalidParameter(format!("value {x} outside (0, 1]")));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {eps}")));
    }
    let mut r = -x.ln() / (1.0 + eps).ln();
    let nearest = r.round();
    if (r - nearest).abs() <= BOUNDARY_TOL * nearest.max(1.0) {
        r = nearest;
    }
    let i = r.floor() as usize + 1;
    Ok((i <= ell).then_some(i))
}

/// Palette of bucket `i`: `3⌈k(1+ε)^i⌉`.
pub fn bucket_palette(k: u32, eps: f64, i: usize) -> Result<u32> {
    let raw = 3.0 * (k as f64 * (1.0 + eps).powi(i as i32)).ceil();
    if raw > u32::MAX as f64 {
        return Err(Error::PaletteOverflow);
    }
    Ok(raw as u32)
}

/// `max{1/(kε), 4·ln(2/ε)/(kε²)}` for any `ε > 0`.
pub fn d_floor(k: u32, eps: f64) -> f64 {
    let k = k as f64;
    (1.0 / (k * eps)).max(4.0 * (2.0 / eps).ln() / (k * eps * eps))
}

/// The request parameter used by the pipelines; requires `ε ∈ (0, ½)`.
pub fn default_d(k: u32, eps: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1/2), got {eps}")));
    }
    Ok(d_floor(k, eps))
}

#[derive(Debug, Clone)]
pub struct SparsifierState {
    n: usize,
    k: u32,
    eps: f64,
    ell: usize,
    /// `buckets[i - 1]` colors `E_i`; created on first use.
    buckets: Vec<Option<PartialColoring>>,
    x: BTreeMap<Edge, f64>,
    bucket_of: BTreeMap<Edge, usize>,
    rng: ChaCha8Rng,
}

impl SparsifierState {
    pub fn new(n: usize, k: u32, eps: f64, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {eps}")));
        }
        let ell = bucket_count(n, eps);
        bucket_palette(k, eps, ell)?;
        Ok(SparsifierState {
            n,
            k,
            eps,
            ell,
            buckets: vec![None; ell],
            x: BTreeMap::new(),
            bucket_of: BTreeMap::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn value(&self, e: Edge) -> f64 {
        self.x.get(&e).copied().unwrap_or(0.0)
    }

    pub fn bucket_of(&self, e: Edge) -> Option<usize> {
        self.bucket_of.get(&e).copied()
    }

    /// The coloring of bucket `i`, if the bucket was ever used.
    pub fn bucket(&self, i: usize) -> Option<&PartialColoring> {
        self.buckets.get(i.wrapping_sub(1))?.as_ref()
    }

    /// Edges in some bucket (`E⁺`).
    pub fn bucketed_len(&self) -> usize {
        self.bucket_of.len()
    }

    /// `∑_{e ∈ E⁺} x_e`.
    pub fn sum_plus(&self) -> f64 {
        self.bucket_of.keys().map(|e| self.x[e]).sum()
    }

    /// `∑_e x_e` over every edge with a positive value.
    pub fn total_value(&self) -> f64 {
        self.x.values().sum()
    }

    /// Moves `e` from its old bucket to the bucket of `new`, taking a random
    /// free color there. `old` must equal the stored value.
    pub fn apply_value_change(&mut self, e: Edge, old: f64, new: f64) -> Result<()> {
        if e.v() >= self.n {
            return Err(Error::VertexOutOfRange { vertex: e.v(), n: self.n });
        }
        let stored = self.value(e);
        if (stored - old).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "stale value for {e}: stored {stored}, given {old}"
            )));
        }
        if !(0.0..=1.0).contains(&new) {
            return Err(Error::InvalidParameter(format!("value {new} outside [0, 1]")));
        }
        let from = self.bucket_of(e);
        let to = if new > 0.0 { bucket_index(new, self.eps, self.ell)? } else { None };
        if new > 0.0 {
            self.x.insert(e, new);
        } else {
            self.x.remove(&e);
        }
        if from == to {
            return Ok(());
        }
        if let Some(i) = from {
            self.buckets[i - 1].as_mut().expect("bucket exists").unassign(e);
            self.bucket_of.remove(&e);
        }
        if let Some(i) = to {
            let palette = bucket_palette(self.k, self.eps, i)?;
            let n = self.n;
            let coloring = self.buckets[i - 1].get_or_insert_with(|| PartialColoring::new(n, palette));
            coloring.assign_random_free(e, &mut self.rng, RANDOM_TRIES)?;
            self.bucket_of.insert(e, i);
        }
        Ok(())
    }

    /// Probability that a request with parameter `d` keeps an edge of
    /// bucket `i`.
    pub fn keep_probability(&self, i: usize, d: f64) -> Result<f64> {
        if d >= (1.0 + self.eps).powi(i as i32 - 1) {
            return Ok(1.0);
        }
        let budget = sample_budget(self.k, d);
        let palette = bucket_palette(self.k, self.eps, i)? as u64;
        Ok((budget as f64 / palette as f64).min(1.0))
    }

    /// Draws a sparsification `H` with this state's RNG.
    pub fn request(&mut self, d: f64) -> Result<BTreeSet<Edge>> {
        let mut rng = self.rng.clone();
        let h = self.request_with(d, &mut rng);
        self.rng = rng;
        h
    }

    /// Draws a sparsification `H`: bucket `i` is kept whole when
    /// `d ≥ (1+ε)^(i-1)` or the budget `3⌈kd⌉` covers its palette;
    /// otherwise `3⌈kd⌉` palette colors are sampled without replacement and
    /// their classes kept.
    pub fn request_with<R: Rng + ?Sized>(&self, d: f64, rng: &mut R) -> Result<BTreeSet<Edge>> {
        let floor = d_floor(self.k, self.eps);
        if !(d >= floor * (1.0 - BOUNDARY_TOL)) {
            return Err(Error::InvalidParameter(format!("d = {d} is below the floor {floor}")));
        }
        let budget = sample_budget(self.k, d);
        let mut h = BTreeSet::new();
        for (idx, bucket) in self.buckets.iter().enumerate() {
            let Some(coloring) = bucket else { continue };
            if coloring.colored_count() == 0 {
                continue;
            }
            let i = idx + 1;
            let palette = coloring.palette() as u64;
            if d >= (1.0 + self.eps).powi(i as i32 - 1) || budget >= palette {
                h.extend(coloring.iter().map(|(e, _)| e));
                continue;
            }
            // Selection sampling over the nonempty classes only. The sample
            // is a uniform `budget`-subset of the palette in any item order,
            // so stopping after the nonempty classes is exact.
            let mut needed = budget;
            for (seen, c) in coloring.nonempty_colors().enumerate() {
                if needed == 0 {
                    break;
                }
                let left = palette - seen as u64;
                if rng.gen_range(0..left) < needed {
                    needed -= 1;
                    h.extend(coloring.class(c));
                }
            }
        }
        Ok(h)
    }

    /// Bucket membership, per-bucket total proper colorings with the exact
    /// palette, and the per-bucket degree bound `Δ(G_i) ≤ k(1+ε)^i`.
    pub fn check_invariants(&self) -> Result<()> {
        for (&e, &xe) in &self.x {
            let want = bucket_index(xe, self.eps, self.ell)?;
            if want != self.bucket_of(e) {
                return Err(Error::Invariant(format!(
                    "edge {e} with value {xe} is in bucket {:?}, expected {want:?}",
                    self.bucket_of(e)
                )));
            }
        }
        let mut counted = 0;
        for (idx, bucket) in self.buckets.iter().enumerate() {
            let Some(coloring) = bucket else { continue };
            let i = idx + 1;
            if coloring.palette() != bucket_palette(self.k, self.eps, i)? {
                return Err(Error::Invariant(format!("bucket {i} has palette {}", coloring.palette())));
            }
            coloring.check_consistency()?;
            let mut g = DynamicGraph::new(self.n);
            for (e, _) in coloring.iter() {
                if self.bucket_of(e) != Some(i) {
                    return Err(Error::Invariant(format!("edge {e} colored in bucket {i} but not a member")));
                }
                g.insert(e);
            }
            check_proper(coloring, &g)?;
            counted += g.m();
            let cap = self.k as f64 * (1.0 + self.eps).powi(i as i32);
            if g.max_degree() as f64 > cap * (1.0 + BOUNDARY_TOL) {
                return Err(Error::Invariant(format!(
                    "bucket {i} has degree {} above {cap}",
                    g.max_degree()
                )));
            }
        }
        if counted != self.bucket_of.len() {
            return Err(Error::Invariant(format!(
                "{} bucket members but {counted} colored bucket edges",
                self.bucket_of.len()
            )));
        }
        Ok(())
    }

    /// Tail bound monitor: `∑_{e∈E⁺} x_e ≥ c(x) - ε²`.
    pub fn check_tail_bound(&self, c: f64) -> Result<()> {
        let sum = self.sum_plus();
        if sum < c - self.eps * self.eps - 1e-9 {
            return Err(Error::Invariant(format!(
                "bucketed value {sum} below c(x) - eps^2 = {}",
                c - self.eps * self.eps
            )));
        }
        Ok(())
    }
}

/// Colors sampled per bucket: `3⌈kd⌉`.
pub fn sample_budget(k: u32, d: f64) -> u64 {
    3 * (k as f64 * d).ceil() as u64
}
