//! Partial proper edge colorings.
//!
//! A [`PartialColoring`] assigns each edge a color in `1..=palette` or leaves
//! it uncolored. Besides the edge→color map it keeps, per vertex, the colors
//! in use (mapped to the neighbor across that color) and, per color, the set
//! of edges carrying it. Every mutating method keeps the coloring proper.

mod bipartite;
mod vizing;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, Edge, VertexId};

pub use bipartite::bipartite_color;
pub use vizing::vizing_color;

/// A color in `1..=palette`. Uncolored is represented as `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(u32);

impl Color {
    /// Panics on 0; colors are 1-based.
    pub fn new(c: u32) -> Self {
        assert!(c >= 1, "colors are 1-based");
        Color(c)
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialColoring {
    palette: u32,
    colors: BTreeMap<Edge, Color>,
    at: Vec<BTreeMap<Color, VertexId>>,
    classes: BTreeMap<Color, BTreeSet<Edge>>,
}

impl PartialColoring {
    pub fn new(n: usize, palette: u32) -> Self {
        PartialColoring {
            palette,
            colors: BTreeMap::new(),
            at: vec![BTreeMap::new(); n],
            classes: BTreeMap::new(),
        }
    }

    #[inline]
    pub fn palette(&self) -> u32 {
        self.palette
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.at.len()
    }

    /// Number of colored edges, `p`.
    #[inline]
    pub fn colored_count(&self) -> usize {
        self.colors.len()
    }

    #[inline]
    pub fn color(&self, e: Edge) -> Option<Color> {
        self.colors.get(&e).copied()
    }

    #[inline]
    pub fn is_free(&self, v: VertexId, c: Color) -> bool {
        !self.at[v].contains_key(&c)
    }

    /// Neighbor of `v` across the edge colored `c`, if any.
    #[inline]
    pub fn neighbor_via(&self, v: VertexId, c: Color) -> Option<VertexId> {
        self.at[v].get(&c).copied()
    }

    /// Number of colored edges at `v`.
    #[inline]
    pub fn used_count(&self, v: VertexId) -> usize {
        self.at[v].len()
    }

    /// Colors in use at `v`, ascending.
    pub fn used_colors(&self, v: VertexId) -> impl Iterator<Item = Color> + '_ {
        self.at[v].keys().copied()
    }

    pub fn class_size(&self, c: Color) -> usize {
        self.classes.get(&c).map_or(0, BTreeSet::len)
    }

    /// Edges colored `c`, ascending.
    pub fn class(&self, c: Color) -> impl Iterator<Item = Edge> + '_ {
        self.classes.get(&c).into_iter().flatten().copied()
    }

    /// Colors that color at least one edge, ascending.
    pub fn nonempty_colors(&self) -> impl Iterator<Item = Color> + '_ {
        self.classes.keys().copied()
    }

    /// Number of distinct colors in use.
    pub fn colors_used(&self) -> usize {
        self.classes.len()
    }

    /// Colored edges with their colors, ascending by edge.
    pub fn iter(&self) -> impl Iterator<Item = (Edge, Color)> + '_ {
        self.colors.iter().map(|(&e, &c)| (e, c))
    }

    pub fn assign(&mut self, e: Edge, c: Color) -> Result<()> {
        if c.0 > self.palette {
            return Err(Error::ColorOutOfPalette {
                color: c,
                palette: self.palette,
            });
        }
        if e.v() >= self.n() {
            return Err(Error::VertexOutOfRange {
                vertex: e.v(),
                n: self.n(),
            });
        }
        if self.colors.contains_key(&e) {
            return Err(Error::AlreadyColored(e));
        }
        if !self.is_free(e.u(), c) || !self.is_free(e.v(), c) {
            return Err(Error::ColorNotFree { edge: e, color: c });
        }
        self.colors.insert(e, c);
        self.at[e.u()].insert(c, e.v());
        self.at[e.v()].insert(c, e.u());
        self.classes.entry(c).or_default().insert(e);
        Ok(())
    }

    /// Uncolors `e`, returning its old color; `None` (and no change) if it was
    /// uncolored.
    pub fn unassign(&mut self, e: Edge) -> Option<Color> {
        let c = self.colors.remove(&e)?;
        self.at[e.u()].remove(&c);
        self.at[e.v()].remove(&c);
        if let Some(class) = self.classes.get_mut(&c) {
            class.remove(&e);
            if class.is_empty() {
                self.classes.remove(&c);
            }
        }
        Some(c)
    }

    /// Smallest color free at `v`.
    pub fn smallest_free(&self, v: VertexId) -> Option<Color> {
        free_colors(&self.at[v], self.palette).next()
    }

    /// Smallest color free at both `u` and `v`.
    pub fn common_free_color(&self, u: VertexId, v: VertexId) -> Option<Color> {
        self.common_free_color_probed(u, v).0
    }

    /// Like [`Self::common_free_color`], also returning how many candidate
    /// colors were tested against the second endpoint.
    ///
    /// Candidates are the free colors of the endpoint with more colored
    /// edges, in ascending order; each is checked against the other
    /// endpoint. At most `min(palette, used(other) + 1)` candidates are tested.
    pub fn common_free_color_probed(&self, u: VertexId, v: VertexId) -> (Option<Color>, usize) {
        let (a, b) = if self.at[u].len() >= self.at[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        let mut probes = 0;
        for c in free_colors(&self.at[a], self.palette) {
            probes += 1;
            if self.is_free(b, c) {
                return (Some(c), probes);
            }
        }
        (None, probes)
    }

    /// Colors `e` with a uniformly random palette color free at both ends.
    /// Falls back to first-fit after `tries` misses.
    pub fn assign_random_free<R: Rng + ?Sized>(
        &mut self,
        e: Edge,
        rng: &mut R,
        tries: usize,
    ) -> Result<Color> {
        if self.palette > 0 {
            for _ in 0..tries {
                let c = Color(rng.gen_range(1..=self.palette));
                if self.is_free(e.u(), c) && self.is_free(e.v(), c) {
                    self.assign(e, c)?;
                    return Ok(c);
                }
            }
        }
        match self.common_free_color(e.u(), e.v()) {
            Some(c) => {
                self.assign(e, c)?;
                Ok(c)
            }
            None => Err(Error::PaletteTooSmall {
                palette: self.palette,
                edge: e,
            }),
        }
    }

    /// Swaps colors `c` and `d` along the maximal alternating path that
    /// starts at `start` with its `first`-colored edge. Returns the path's
    /// vertices (including `start`).
    pub(crate) fn invert_path(&mut self, start: VertexId, first: Color, second: Color) -> Vec<VertexId> {
        let mut path = vec![start];
        let mut edges = Vec::new();
        let mut cur = start;
        let mut want = first;
        while let Some(next) = self.neighbor_via(cur, want) {
            edges.push((Edge::new(cur, next).expect("proper coloring has no loops"), want));
            path.push(next);
            cur = next;
            want = if want == first { second } else { first };
            if path.len() > self.n() + 1 {
                break;
            }
        }
        for &(e, _) in &edges {
            self.unassign(e);
        }
        for &(e, c) in &edges {
            let swapped = if c == first { second } else { first };
            self.assign(e, swapped)
                .expect("swapping an alternating path keeps the coloring proper");
        }
        path
    }

    /// Cross-checks the per-vertex and per-color indexes against the
    /// edge→color map.
    pub fn check_consistency(&self) -> Result<()> {
        let mut at_total = 0;
        for (v, used) in self.at.iter().enumerate() {
            at_total += used.len();
            for (&c, &w) in used {
                let e = Edge::new(v, w).map_err(|_| Error::Invariant(format!("loop index at {v}")))?;
                if self.colors.get(&e) != Some(&c) {
                    return Err(Error::Invariant(format!(
                        "vertex {v} lists color {c} via {w} but edge {e} has {:?}",
                        self.colors.get(&e)
                    )));
                }
            }
        }
        if at_total != 2 * self.colors.len() {
            return Err(Error::Invariant(format!(
                "vertex index holds {at_total} entries for {} colored edges",
                self.colors.len()
            )));
        }
        let class_total: usize = self.classes.values().map(BTreeSet::len).sum();
        if class_total != self.colors.len() {
            return Err(Error::Invariant("color class sizes disagree with assignment".into()));
        }
        for (&c, class) in &self.classes {
            if c.0 > self.palette || class.is_empty() {
                return Err(Error::Invariant(format!("bad color class {c}")));
            }
            for e in class {
                if self.colors.get(e) != Some(&c) {
                    return Err(Error::Invariant(format!("class {c} lists {e} wrongly")));
                }
            }
        }
        Ok(())
    }

    /// Writes `e ↦ c` into the assignment map without any check or index
    /// update. Only for exercising the verifier.
    #[doc(hidden)]
    pub fn tamper_assign(&mut self, e: Edge, c: Color) {
        self.colors.insert(e, c);
    }
}

/// Ascending colors in `1..=palette` missing from `used`, found by walking
/// the gaps between used colors.
fn free_colors(used: &BTreeMap<Color, VertexId>, palette: u32) -> impl Iterator<Item = Color> + '_ {
    let mut used_iter = used.keys().map(|c| c.0).peekable();
    let mut next = 1u32;
    std::iter::from_fn(move || {
        while next <= palette {
            let c = next;
            next += 1;
            match used_iter.peek() {
                Some(&u) if u == c => {
                    used_iter.next();
                }
                _ => return Some(Color(c)),
            }
        }
        None
    })
}

/// Checks that `f` is a proper coloring of `g` with colors in its palette and
/// colors only edges present in `g`. Uses only the edge→color map.
pub fn verify_proper(f: &PartialColoring, g: &DynamicGraph) -> bool {
    check_proper(f, g).is_ok()
}

/// [`verify_proper`] with a description of the first violation.
pub fn check_proper(f: &PartialColoring, g: &DynamicGraph) -> Result<()> {
    for (e, c) in f.iter() {
        if !g.contains(e) {
            return Err(Error::Invariant(format!("colored edge {e} is not in the graph")));
        }
        if c.0 == 0 || c.0 > f.palette {
            return Err(Error::Invariant(format!("edge {e} has color {c} outside palette")));
        }
    }
    let mut seen = BTreeSet::new();
    for v in 0..g.n() {
        seen.clear();
        for w in g.neighbors(v) {
            let e = Edge::new(v, w).expect("simple graph");
            if let Some(c) = f.color(e) {
                if !seen.insert(c) {
                    return Err(Error::Invariant(format!(
                        "color {c} appears twice at vertex {v}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// True when every edge of `g` is colored.
pub fn is_total(f: &PartialColoring, g: &DynamicGraph) -> bool {
    g.edges().all(|e| f.color(e).is_some())
}

/// First-fit total coloring: edges in ascending order, each taking the
/// smallest color free at both ends. Always succeeds with `2Δ - 1` colors.
pub fn greedy_total_color(g: &DynamicGraph, palette: u32) -> Result<PartialColoring> {
    let mut f = PartialColoring::new(g.n(), palette);
    for e in g.edges() {
        let c = f
            .common_free_color(e.u(), e.v())
            .ok_or(Error::PaletteTooSmall { palette, edge: e })?;
        f.assign(e, c)?;
    }
    Ok(f)
}

/// Reduces a coloring with `k + ℓ` colors to `k` colors by uncoloring the ℓ
/// colors with the fewest edges (ties: higher color index goes first) and
/// renumbering the survivors into `1..=k` in their original order.
///
/// Since the discarded classes are the ℓ smallest, they hold at most a
/// `ℓ / (k + ℓ)` share of the colored edges.
pub fn discard_least_used(f: &PartialColoring, k: u32) -> PartialColoring {
    let mut out = PartialColoring::new(f.n(), k);
    let palette = f.palette();
    let mut kept: Vec<Color> = (1..=palette).map(Color).collect();
    if palette > k {
        let discard = (palette - k) as usize;
        let mut order = kept.clone();
        order.sort_by_key(|&c| (f.class_size(c), std::cmp::Reverse(c)));
        let dropped: BTreeSet<Color> = order.into_iter().take(discard).collect();
        kept.retain(|c| !dropped.contains(c));
    }
    for (slot, &c) in kept.iter().enumerate() {
        let target = Color(slot as u32 + 1);
        for e in f.class(c) {
            out.assign(e, target)
                .expect("renumbered classes of a proper coloring stay proper");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge;

    fn c(x: u32) -> Color {
        Color::new(x)
    }

    #[test]
    fn assign_respects_properness() {
        let mut f = PartialColoring::new(3, 2);
        f.assign(edge(0, 1), c(1)).unwrap();
        assert_eq!(f.colored_count(), 1);
        assert!(matches!(
            f.assign(edge(1, 2), c(1)),
            Err(Error::ColorNotFree { .. })
        ));
        f.assign(edge(1, 2), c(2)).unwrap();
        assert_eq!(f.colored_count(), 2);
        assert!(matches!(f.assign(edge(0, 2), c(3)), Err(Error::ColorOutOfPalette { .. })));
        assert!(matches!(f.assign(edge(0, 1), c(2)), Err(Error::AlreadyColored(_))));
        f.check_consistency().unwrap();
    }

    #[test]
    fn unassign_inverts_assign() {
        let mut f = PartialColoring::new(3, 2);
        f.assign(edge(0, 1), c(1)).unwrap();
        f.assign(edge(1, 2), c(2)).unwrap();
        assert_eq!(f.unassign(edge(1, 2)), Some(c(2)));
        assert_eq!(f.unassign(edge(0, 1)), Some(c(1)));
        assert_eq!(f.colored_count(), 0);
        assert_eq!(f.unassign(edge(0, 1)), None);
        assert_eq!(f, PartialColoring::new(3, 2));
    }

    #[test]
    fn verify_proper_examples() {
        let g = DynamicGraph::from_edges(3, [edge(0, 1), edge(1, 2), edge(0, 2)]).unwrap();
        let mut f = PartialColoring::new(3, 2);
        f.assign(edge(0, 1), c(1)).unwrap();
        assert!(verify_proper(&f, &g));
        f.assign(edge(1, 2), c(2)).unwrap();
        assert!(verify_proper(&f, &g));
        f.tamper_assign(edge(0, 2), c(1));
        assert!(!verify_proper(&f, &g));
        assert!(f.check_consistency().is_err());
    }

    #[test]
    fn common_free_color_cases() {
        let mut f = PartialColoring::new(3, 2);
        f.assign(edge(0, 1), c(1)).unwrap();
        f.assign(edge(1, 2), c(2)).unwrap();
        assert_eq!(f.common_free_color(0, 2), None);

        let f = PartialColoring::new(3, 1);
        assert_eq!(f.common_free_color(1, 2), Some(c(1)));

        let mut f = PartialColoring::new(3, 2);
        f.assign(edge(0, 1), c(1)).unwrap();
        assert_eq!(f.common_free_color(1, 2), Some(c(2)));
    }

    #[test]
    fn common_free_color_probe_bound() {
        // Vertex 0 uses colors 1..=3, vertex 5 uses 4 and 5: smallest common is 6.
        let mut f = PartialColoring::new(8, 10);
        for (i, w) in [1, 2, 3].into_iter().enumerate() {
            f.assign(edge(0, w), c(i as u32 + 1)).unwrap();
        }
        f.assign(edge(5, 6), c(4)).unwrap();
        f.assign(edge(5, 7), c(5)).unwrap();
        let (col, probes) = f.common_free_color_probed(0, 5);
        assert_eq!(col, Some(c(6)));
        assert!(probes <= f.used_count(5) + 1);
    }

    #[test]
    fn greedy_total_examples() {
        let single = DynamicGraph::from_edges(2, [edge(0, 1)]).unwrap();
        let f = greedy_total_color(&single, 1).unwrap();
        assert!(is_total(&f, &single));
        assert_eq!(f.colors_used(), 1);

        let star = DynamicGraph::from_edges(4, [edge(0, 1), edge(0, 2), edge(0, 3)]).unwrap();
        let f = greedy_total_color(&star, 5).unwrap();
        assert!(is_total(&f, &star) && verify_proper(&f, &star));

        let c3 = DynamicGraph::from_edges(3, [edge(0, 1), edge(1, 2), edge(0, 2)]).unwrap();
        let f = greedy_total_color(&c3, 3).unwrap();
        assert!(is_total(&f, &c3) && verify_proper(&f, &c3));
        assert!(matches!(greedy_total_color(&c3, 2), Err(Error::PaletteTooSmall { .. })));
    }

    #[test]
    fn random_free_assignment_is_proper() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let g = DynamicGraph::from_edges(4, [edge(0, 1), edge(0, 2), edge(0, 3), edge(1, 2)]).unwrap();
        let mut f = PartialColoring::new(4, 9);
        for e in g.edges() {
            f.assign_random_free(e, &mut rng, 8).unwrap();
        }
        assert!(verify_proper(&f, &g) && is_total(&f, &g));
        // A palette that only first-fit can satisfy still succeeds.
        let mut tight = PartialColoring::new(4, 3);
        for e in g.edges() {
            tight.assign_random_free(e, &mut rng, 0).unwrap();
        }
        assert!(verify_proper(&tight, &g));
    }

    fn coloring_with_counts(counts: &[usize]) -> PartialColoring {
        // Color class i is a set of disjoint edges.
        let total: usize = counts.iter().sum();
        let mut f = PartialColoring::new(2 * total, counts.len() as u32);
        let mut next = 0;
        for (i, &cnt) in counts.iter().enumerate() {
            for _ in 0..cnt {
                f.assign(edge(next, next + 1), c(i as u32 + 1)).unwrap();
                next += 2;
            }
        }
        f
    }

    #[test]
    fn discard_argmin() {
        let f = coloring_with_counts(&[5, 3, 2]);
        let out = discard_least_used(&f, 2);
        assert_eq!(out.colored_count(), 8);
        assert_eq!(out.palette(), 2);
        assert_eq!(out.class_size(c(1)), 5);
        assert_eq!(out.class_size(c(2)), 3);
    }

    #[test]
    fn discard_with_no_extra_colors_is_identity() {
        let f = coloring_with_counts(&[2, 1]);
        assert_eq!(discard_least_used(&f, 2), f);
    }

    #[test]
    fn discard_tie_breaks_on_highest_index() {
        let f = coloring_with_counts(&[1, 1, 1]);
        let out = discard_least_used(&f, 2);
        // Color 3 dropped; 1 and 2 keep their edges.
        assert_eq!(out.color(edge(0, 1)), Some(c(1)));
        assert_eq!(out.color(edge(2, 3)), Some(c(2)));
        assert_eq!(out.color(edge(4, 5)), None);
    }

    #[test]
    fn discard_triangle_keeps_two() {
        let g = DynamicGraph::from_edges(3, [edge(0, 1), edge(1, 2), edge(0, 2)]).unwrap();
        let f = greedy_total_color(&g, 3).unwrap();
        let out = discard_least_used(&f, 2);
        assert_eq!(out.colored_count(), 2);
        assert!(verify_proper(&out, &g));
    }

    #[test]
    fn empty_colors_are_discarded_first() {
        let mut f = PartialColoring::new(4, 3);
        f.assign(edge(0, 1), c(1)).unwrap();
        f.assign(edge(2, 3), c(3)).unwrap();
        let out = discard_least_used(&f, 2);
        assert_eq!(out.colored_count(), 2);
        assert_eq!(out.color(edge(2, 3)), Some(c(2)));
    }
}
