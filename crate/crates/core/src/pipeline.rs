//! Matching-based dynamic k-edge coloring with amortized recoloring.
//!
//! Each pipeline keeps a dynamic k-matcher and an output coloring `g`. Every
//! `max(1, ⌊ε·p⌋)` updates (`p` = colored edges right after the last
//! recolor) it recolors from scratch: take a k-matching, color it with
//! `k + 1` colors (or `k` for bipartite inputs) and drop the least used
//! class. Between recolors `g` only loses deleted edges; inserted edges stay
//! uncolored.
//!
//! * `MatchO`: maximal integral k-matching.
//! * `MatchA`: exact fractional k-matching, sparsified by color sampling,
//!   re-solved on the sample and rounded to an integral k-matching.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::coloring::{bipartite_color, check_proper, discard_least_used, vizing_color, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::{Bipartition, DynamicGraph, Edge, UpdateEvent, UpdateKind};
use crate::kmatch::{FractionalMatcher, MaximalKMatcher};
use crate::polytope::{half_integral_optimum, round_half_integral, BVector};
use crate::sparsifier::{default_d, SparsifierState};

/// Updates allowed before the next recolor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmortizationBudget {
    pub eps: f64,
    pub p_at_recolor: usize,
    pub remaining: usize,
}

impl AmortizationBudget {
    /// A fresh budget: the first update triggers a recolor.
    pub fn new(eps: f64) -> Self {
        AmortizationBudget {
            eps,
            p_at_recolor: 0,
            remaining: 1,
        }
    }

    pub fn interval(eps: f64, p: usize) -> usize {
        ((eps * p as f64).floor() as usize).max(1)
    }

    /// Counts one update; true when a recolor is due.
    pub fn tick(&mut self) -> bool {
        self.remaining = self.remaining.saturating_sub(1);
        self.remaining == 0
    }

    pub fn reset(&mut self, p: usize) {
        self.p_at_recolor = p;
        self.remaining = Self::interval(self.eps, p);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    MatchO,
    MatchA,
    BipartiteO,
    BipartiteA,
}

impl Variant {
    pub fn is_bipartite(self) -> bool {
        matches!(self, Variant::BipartiteO | Variant::BipartiteA)
    }

    pub fn is_fractional(self) -> bool {
        matches!(self, Variant::MatchA | Variant::BipartiteA)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::MatchO => "matcho",
            Variant::MatchA => "matcha",
            Variant::BipartiteO => "matcho-bip",
            Variant::BipartiteA => "matcha-bip",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matcho" => Ok(Variant::MatchO),
            "matcha" => Ok(Variant::MatchA),
            "matcho-bip" => Ok(Variant::BipartiteO),
            "matcha-bip" => Ok(Variant::BipartiteA),
            _ => Err(Error::InvalidParameter(format!("unknown pipeline {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
enum Matcher {
    Maximal(MaximalKMatcher),
    Fractional {
        matcher: FractionalMatcher,
        sparsifier: SparsifierState,
        d: f64,
    },
}

/// What the last recolor produced.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RecolorStats {
    /// Size of the k-matching that was colored.
    pub source: usize,
    /// Edges colored after discarding.
    pub kept: usize,
    /// `|H|` for sparsified variants.
    pub sparsifier_size: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Pipeline {
    variant: Variant,
    k: u32,
    eps: f64,
    matcher: Matcher,
    g: PartialColoring,
    budget: AmortizationBudget,
    sides: Option<Bipartition>,
    recolored: bool,
    recolors: usize,
    last: RecolorStats,
}

impl Pipeline {
    /// `sides` is required by the bipartite variants and ignored otherwise.
    /// The sparsifier RNG of the fractional variants is seeded with `seed`.
    pub fn new(variant: Variant, n: usize, k: u32, eps: f64, seed: u64, sides: Option<Bipartition>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon must be non-negative, got {eps}")));
        }
        let sides = if variant.is_bipartite() {
            let s = sides.ok_or_else(|| Error::InvalidParameter(format!("{variant} needs a bipartition")))?;
            if s.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "bipartition covers {} of {n} vertices",
                    s.len()
                )));
            }
            Some(s)
        } else {
            None
        };
        let matcher = if variant.is_fractional() {
            let d = default_d(k, eps)?;
            Matcher::Fractional {
                matcher: FractionalMatcher::new(n, k, eps)?,
                sparsifier: SparsifierState::new(n, k, eps, seed)?,
                d,
            }
        } else {
            Matcher::Maximal(MaximalKMatcher::new(n, k))
        };
        Ok(Pipeline {
            variant,
            k,
            eps,
            matcher,
            g: PartialColoring::new(n, k),
            budget: AmortizationBudget::new(eps),
            sides,
            recolored: false,
            recolors: 0,
            last: RecolorStats::default(),
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn graph(&self) -> &DynamicGraph {
        match &self.matcher {
            Matcher::Maximal(m) => m.graph(),
            Matcher::Fractional { matcher, .. } => matcher.graph(),
        }
    }

    pub fn current_coloring(&self) -> &PartialColoring {
        &self.g
    }

    pub fn budget(&self) -> AmortizationBudget {
        self.budget
    }

    /// Whether the last update triggered a recolor.
    pub fn recolored(&self) -> bool {
        self.recolored
    }

    pub fn recolors(&self) -> usize {
        self.recolors
    }

    pub fn last_recolor(&self) -> RecolorStats {
        self.last
    }

    /// `|M|` for MatchO variants, `c(x)` rounded down for MatchA variants.
    pub fn matcher_size(&self) -> usize {
        match &self.matcher {
            Matcher::Maximal(m) => m.current().len(),
            Matcher::Fractional { matcher, .. } => (matcher.current().value().twice() / 2) as usize,
        }
    }

    pub fn sparsifier_size(&self) -> Option<usize> {
        self.last.sparsifier_size
    }

    pub fn apply(&mut self, ev: &UpdateEvent) -> Result<()> {
        if let Some(sides) = &self.sides {
            if ev.edge.v() < sides.len() && sides.is_left(ev.edge.u()) == sides.is_left(ev.edge.v()) {
                return Err(Error::NotBipartite(ev.edge));
            }
        }
        match &mut self.matcher {
            Matcher::Maximal(m) => {
                m.apply(ev)?;
            }
            Matcher::Fractional { matcher, sparsifier, .. } => {
                for (e, old, new) in matcher.apply(ev)? {
                    sparsifier.apply_value_change(e, old as f64 / 2.0, new as f64 / 2.0)?;
                }
            }
        }
        if ev.kind == UpdateKind::Delete {
            self.g.unassign(ev.edge);
        }
        self.recolored = self.budget.tick();
        if self.recolored {
            self.recolor()?;
        }
        Ok(())
    }

    /// Recomputes `g` from the matcher and resets the budget.
    pub fn recolor(&mut self) -> Result<()> {
        let (m, sparsifier_size) = match &mut self.matcher {
            Matcher::Maximal(mm) => (mm.current().to_graph(), None),
            Matcher::Fractional { sparsifier, d, .. } => {
                let h = sparsifier.request(*d)?;
                let size = h.len();
                (integral_kmatching(self.g.n(), &h, self.k)?, Some(size))
            }
        };
        let f = match &self.sides {
            Some(sides) => bipartite_color(&m, sides)?,
            None => vizing_color(&m),
        };
        self.g = discard_least_used(&f, self.k);
        self.last = RecolorStats {
            source: m.m(),
            kept: self.g.colored_count(),
            sparsifier_size,
        };
        self.recolors += 1;
        self.budget.reset(self.g.colored_count());
        Ok(())
    }

    /// Matcher invariants, properness of `g` on present edges with palette
    /// `k`, the post-recolor size guarantee, and for sparsified variants the
    /// bucket invariants and (right after a rebuild) the tail bound.
    pub fn check_invariants(&self) -> Result<()> {
        let graph = self.graph();
        graph.check_invariants()?;
        if self.g.palette() != self.k {
            return Err(Error::Invariant(format!("output palette {} != k = {}", self.g.palette(), self.k)));
        }
        self.g.check_consistency()?;
        check_proper(&self.g, graph)?;
        match &self.matcher {
            Matcher::Maximal(m) => m.check_invariants()?,
            Matcher::Fractional { matcher, sparsifier, .. } => {
                matcher.check_invariants()?;
                sparsifier.check_invariants()?;
                if matcher.updates_since_rebuild() == 0 && matcher.rebuilds() > 0 {
                    sparsifier.check_tail_bound(matcher.current().value().to_f64())?;
                }
            }
        }
        if let Some(sides) = &self.sides {
            sides.check(graph)?;
        }
        if self.budget.remaining == 0 {
            return Err(Error::Invariant("amortization budget exhausted without recolor".into()));
        }
        if self.recolored {
            let RecolorStats { source, kept, .. } = self.last;
            let k = self.k as usize;
            let need = if self.variant.is_bipartite() { source } else { (k * source).div_ceil(k + 1) };
            if kept < need {
                return Err(Error::Invariant(format!(
                    "recolor kept {kept} of a {source}-edge k-matching, expected at least {need}"
                )));
            }
        }
        Ok(())
    }

    #[doc(hidden)]
    pub fn coloring_mut(&mut self) -> &mut PartialColoring {
        &mut self.g
    }
}

/// An integral k-matching inside `h`: the exact half-integral optimum on `h`
/// rounded by the Euler-partition scheme.
pub fn integral_kmatching(n: usize, h: &BTreeSet<Edge>, k: u32) -> Result<DynamicGraph> {
    let hg = DynamicGraph::from_edges(n, h.iter().copied())?;
    let b = BVector::uniform(n, k);
    let x = half_integral_optimum(&hg, &b)?;
    let y = round_half_integral(&x, &b)?;
    let out = DynamicGraph::from_edges(n, y.integral_edges())?;
    debug_assert!(out.max_degree() <= k as usize);
    Ok(out)
}

/// Checks a pipeline-independent k-matching; used by tests.
pub fn check_matching_graph(m: &DynamicGraph, k: u32) -> Result<()> {
    if m.max_degree() > k as usize {
        return Err(Error::Invariant(format!("degree {} above k = {k}", m.max_degree())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge;

    fn ins(a: usize, b: usize) -> UpdateEvent {
        UpdateEvent::insert(edge(a, b))
    }

    #[test]
    fn budget_interval() {
        assert_eq!(AmortizationBudget::interval(0.3, 10), 3);
        assert_eq!(AmortizationBudget::interval(0.3, 0), 1);
        let mut b = AmortizationBudget::new(0.3);
        assert!(b.tick());
        b.reset(10);
        assert!(!b.tick());
        assert!(!b.tick());
        assert!(b.tick());
    }

    #[test]
    fn matcho_triangle_keeps_two() {
        let mut p = Pipeline::new(Variant::MatchO, 3, 2, 0.0, 0, None).unwrap();
        for ev in [ins(0, 1), ins(1, 2), ins(0, 2)] {
            p.apply(&ev).unwrap();
            p.check_invariants().unwrap();
        }
        assert!(p.recolored());
        assert_eq!(p.last_recolor().source, 3);
        assert_eq!(p.current_coloring().colored_count(), 2);
    }

    #[test]
    fn matcho_perfect_matching_k1() {
        let mut p = Pipeline::new(Variant::MatchO, 8, 1, 0.0, 0, None).unwrap();
        for i in 0..4 {
            p.apply(&ins(2 * i, 2 * i + 1)).unwrap();
        }
        assert_eq!(p.current_coloring().colored_count(), 4);
        p.check_invariants().unwrap();
    }

    #[test]
    fn matcho_star_needs_no_discard() {
        let mut p = Pipeline::new(Variant::MatchO, 4, 3, 0.0, 0, None).unwrap();
        for i in 1..4 {
            p.apply(&ins(0, i)).unwrap();
        }
        assert_eq!(p.current_coloring().colored_count(), 3);
        assert_eq!(p.current_coloring().colors_used(), 3);
    }

    // ε = 0.5, k = 1, disjoint inserts: the first four updates each
    // recolor (p = 1, 2, 3 give interval 1), then p = 4 gives interval 2.
    fn four_disjoint_edges() -> Pipeline {
        let mut p = Pipeline::new(Variant::MatchO, 20, 1, 0.5, 0, None).unwrap();
        for i in 0..4 {
            p.apply(&ins(2 * i, 2 * i + 1)).unwrap();
            assert!(p.recolored());
        }
        assert_eq!(p.budget().remaining, 2);
        p
    }

    #[test]
    fn deletion_between_recolors_drops_one() {
        let mut p = four_disjoint_edges();
        p.apply(&UpdateEvent::delete(edge(0, 1))).unwrap();
        assert!(!p.recolored());
        assert_eq!(p.current_coloring().colored_count(), 3);
        p.check_invariants().unwrap();
    }

    #[test]
    fn inserted_edges_wait_for_recolor() {
        let mut p = four_disjoint_edges();
        p.apply(&ins(8, 9)).unwrap();
        assert!(!p.recolored());
        assert!(p.current_coloring().color(edge(8, 9)).is_none());
        p.check_invariants().unwrap();
        p.apply(&ins(10, 11)).unwrap();
        assert!(p.recolored());
        assert_eq!(p.current_coloring().colored_count(), 6);
        assert_eq!(p.budget().remaining, 3);
    }

    #[test]
    fn bipartite_variants_use_k_colors() {
        let sides = Bipartition::split_at(4, 2);
        let mut p = Pipeline::new(Variant::BipartiteO, 4, 2, 0.0, 0, Some(sides.clone())).unwrap();
        for ev in [ins(0, 2), ins(0, 3), ins(1, 2), ins(1, 3)] {
            p.apply(&ev).unwrap();
            p.check_invariants().unwrap();
        }
        assert_eq!(p.current_coloring().colored_count(), 4);
        assert!(matches!(p.apply(&ins(0, 1)), Err(Error::NotBipartite(_))));

        let mut p = Pipeline::new(Variant::BipartiteO, 4, 1, 0.0, 0, Some(sides.clone())).unwrap();
        for ev in [ins(0, 2), ins(0, 3), ins(1, 2), ins(1, 3)] {
            p.apply(&ev).unwrap();
        }
        assert!(p.current_coloring().colored_count() <= 2);
        assert_eq!(p.current_coloring().colors_used(), 1);

        let mut p = Pipeline::new(Variant::BipartiteA, 4, 2, 0.25, 3, Some(sides)).unwrap();
        for ev in [ins(0, 2), ins(0, 3), ins(1, 2), ins(1, 3)] {
            p.apply(&ev).unwrap();
            p.check_invariants().unwrap();
        }
        assert_eq!(p.current_coloring().colored_count(), 4);
        assert!(Pipeline::new(Variant::BipartiteO, 4, 2, 0.0, 0, None).is_err());
    }

    #[test]
    fn matcha_triangle_k1() {
        let mut p = Pipeline::new(Variant::MatchA, 3, 1, 0.25, 11, None).unwrap();
        for ev in [ins(0, 1), ins(1, 2), ins(0, 2)] {
            p.apply(&ev).unwrap();
            p.check_invariants().unwrap();
        }
        assert_eq!(p.last_recolor().sparsifier_size, Some(3));
        assert_eq!(p.current_coloring().colored_count(), 1);
        assert_eq!(p.matcher_size(), 1);
    }

    #[test]
    fn matcha_rejects_large_epsilon() {
        assert!(Pipeline::new(Variant::MatchA, 3, 1, 0.6, 0, None).is_err());
    }

    #[test]
    fn integral_kmatching_of_empty_and_small() {
        assert_eq!(integral_kmatching(3, &BTreeSet::new(), 1).unwrap().m(), 0);
        let h: BTreeSet<Edge> = [edge(0, 1), edge(1, 2)].into();
        let m = integral_kmatching(3, &h, 2).unwrap();
        assert_eq!(m.m(), 2);
        check_matching_graph(&m, 2).unwrap();
    }
}
