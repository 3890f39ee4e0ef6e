//! Dynamic k-matching maintainers.
//!
//! [`MaximalKMatcher`] keeps an integral maximal k-matching, which is within
//! a factor 2 of a maximum one. [`FractionalMatcher`] keeps a feasible
//! half-integral fractional k-matching that is recomputed exactly whenever
//! `max(1, ⌊ε·c⌋)` updates have passed since the last recomputation (with
//! `c` the value at that recomputation); in between, deleted edges simply
//! lose their value.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, Edge, UpdateEvent, UpdateKind, VertexId};
use crate::polytope::{check_feasible, half_integral_optimum, BVector, FractionalAssignment, HalfInt};

/// An edge set with at most `k` chosen edges at every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KMatching {
    k: u32,
    edges: BTreeSet<Edge>,
    load: Vec<u32>,
}

impl KMatching {
    pub fn new(n: usize, k: u32) -> Self {
        KMatching {
            k,
            edges: BTreeSet::new(),
            load: vec![0; n],
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    pub fn load(&self, v: VertexId) -> u32 {
        self.load[v]
    }

    pub fn has_slack(&self, v: VertexId) -> bool {
        self.load[v] < self.k
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    fn add(&mut self, e: Edge) {
        debug_assert!(self.has_slack(e.u()) && self.has_slack(e.v()));
        if self.edges.insert(e) {
            self.load[e.u()] += 1;
            self.load[e.v()] += 1;
        }
    }

    fn remove(&mut self, e: Edge) -> bool {
        let had = self.edges.remove(&e);
        if had {
            self.load[e.u()] -= 1;
            self.load[e.v()] -= 1;
        }
        had
    }

    /// The chosen edges as a graph on the same vertex set.
    pub fn to_graph(&self) -> DynamicGraph {
        let mut g = DynamicGraph::new(self.load.len());
        for &e in &self.edges {
            g.insert(e);
        }
        g
    }
}

/// Change to the maintained matching caused by one update.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatchingDelta {
    pub added: Vec<Edge>,
    pub removed: Vec<Edge>,
}

#[derive(Debug, Clone)]
pub struct MaximalKMatcher {
    graph: DynamicGraph,
    matching: KMatching,
}

impl MaximalKMatcher {
    pub fn new(n: usize, k: u32) -> Self {
        MaximalKMatcher {
            graph: DynamicGraph::new(n),
            matching: KMatching::new(n, k),
        }
    }

    pub fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    pub fn current(&self) -> &KMatching {
        &self.matching
    }

    pub fn apply(&mut self, ev: &UpdateEvent) -> Result<MatchingDelta> {
        match ev.kind {
            UpdateKind::Insert => self.insert(ev.edge),
            UpdateKind::Delete => self.delete(ev.edge),
        }
    }

    pub fn insert(&mut self, e: Edge) -> Result<MatchingDelta> {
        self.graph.check_edge(e)?;
        if !self.graph.insert(e) {
            return Err(Error::InvalidEvent(format!("insert of present edge {e}")));
        }
        let mut delta = MatchingDelta::default();
        if self.matching.has_slack(e.u()) && self.matching.has_slack(e.v()) {
            self.matching.add(e);
            delta.added.push(e);
        }
        Ok(delta)
    }

    /// Removes `e`; if it was matched, each endpoint (lower first) scans its
    /// unmatched edges in ascending neighbor order and adds every one whose
    /// endpoints both have slack.
    pub fn delete(&mut self, e: Edge) -> Result<MatchingDelta> {
        if !self.graph.delete(e) {
            return Err(Error::InvalidEvent(format!("delete of absent edge {e}")));
        }
        let mut delta = MatchingDelta::default();
        if self.matching.remove(e) {
            delta.removed.push(e);
            for w in e.endpoints() {
                for y in self.graph.neighbors(w) {
                    if !self.matching.has_slack(w) {
                        break;
                    }
                    let cand = Edge::new(w, y)?;
                    if !self.matching.contains(cand) && self.matching.has_slack(y) {
                        self.matching.add(cand);
                        delta.added.push(cand);
                    }
                }
            }
        }
        Ok(delta)
    }

    /// Feasibility, load bookkeeping and maximality.
    pub fn check_invariants(&self) -> Result<()> {
        check_kmatching(&self.matching, &self.graph)?;
        for e in self.graph.edges() {
            if !self.matching.contains(e) && self.matching.has_slack(e.u()) && self.matching.has_slack(e.v()) {
                return Err(Error::Invariant(format!("unmatched edge {e} could be added")));
            }
        }
        Ok(())
    }
}

/// Checks that `m` is a k-matching of `g` with correct loads.
pub fn check_kmatching(m: &KMatching, g: &DynamicGraph) -> Result<()> {
    let mut load = vec![0u32; g.n()];
    for e in m.edges() {
        if !g.contains(e) {
            return Err(Error::Invariant(format!("matched edge {e} not in graph")));
        }
        load[e.u()] += 1;
        load[e.v()] += 1;
    }
    for v in 0..g.n() {
        if load[v] != m.load(v) {
            return Err(Error::Invariant(format!("load of {v} recorded {} but is {}", m.load(v), load[v])));
        }
        if load[v] > m.k() {
            return Err(Error::Invariant(format!("vertex {v} has load {} > k = {}", load[v], m.k())));
        }
    }
    Ok(())
}

/// One changed fractional value, doubled: `(edge, old, new)`.
pub type ValueChange = (Edge, u8, u8);

#[derive(Debug, Clone)]
pub struct FractionalMatcher {
    graph: DynamicGraph,
    k: u32,
    eps: f64,
    x: FractionalAssignment,
    value_at_rebuild: HalfInt,
    updates_since_rebuild: usize,
    rebuilds: usize,
}

impl FractionalMatcher {
    pub fn new(n: usize, k: u32, eps: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if !(eps > 0.0) {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {eps}")));
        }
        Ok(FractionalMatcher {
            graph: DynamicGraph::new(n),
            k,
            eps,
            x: FractionalAssignment::new(n),
            value_at_rebuild: HalfInt::ZERO,
            updates_since_rebuild: 0,
            rebuilds: 0,
        })
    }

    pub fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    pub fn current(&self) -> &FractionalAssignment {
        &self.x
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn rebuilds(&self) -> usize {
        self.rebuilds
    }

    pub fn value_at_rebuild(&self) -> HalfInt {
        self.value_at_rebuild
    }

    pub fn updates_since_rebuild(&self) -> usize {
        self.updates_since_rebuild
    }

    /// Updates between recomputations: `max(1, ⌊ε·c⌋)`.
    pub fn rebuild_interval(&self) -> usize {
        ((self.eps * self.value_at_rebuild.to_f64()).floor() as usize).max(1)
    }

    /// Applies `ev` and returns every value change it caused, including
    /// those of a triggered recomputation.
    pub fn apply(&mut self, ev: &UpdateEvent) -> Result<Vec<ValueChange>> {
        self.graph.check_edge(ev.edge)?;
        let mut changes = Vec::new();
        match ev.kind {
            UpdateKind::Insert => {
                if !self.graph.insert(ev.edge) {
                    return Err(Error::InvalidEvent(format!("insert of present edge {}", ev.edge)));
                }
            }
            UpdateKind::Delete => {
                if !self.graph.delete(ev.edge) {
                    return Err(Error::InvalidEvent(format!("delete of absent edge {}", ev.edge)));
                }
                let old = self.x.set_twice(ev.edge, 0);
                if old > 0 {
                    changes.push((ev.edge, old, 0));
                }
            }
        }
        self.updates_since_rebuild += 1;
        if self.updates_since_rebuild >= self.rebuild_interval() {
            changes.extend(self.rebuild()?);
        }
        Ok(changes)
    }

    /// Recomputes an exact optimal half-integral fractional k-matching.
    pub fn rebuild(&mut self) -> Result<Vec<ValueChange>> {
        let fresh = half_integral_optimum(&self.graph, &BVector::uniform(self.graph.n(), self.k))?;
        let mut changes = Vec::new();
        let touched: BTreeSet<Edge> = self.x.iter().chain(fresh.iter()).map(|(e, _)| e).collect();
        for e in touched {
            let (old, new) = (self.x.twice(e), fresh.twice(e));
            if old != new {
                changes.push((e, old, new));
            }
        }
        self.x = fresh;
        self.value_at_rebuild = self.x.value();
        self.updates_since_rebuild = 0;
        self.rebuilds += 1;
        Ok(changes)
    }

    /// Feasibility, support within the graph, and the between-rebuild value
    /// floor `c(x) ≥ c_rebuild - updates`.
    pub fn check_invariants(&self) -> Result<()> {
        check_feasible(&self.x, &BVector::uniform(self.graph.n(), self.k), Some(&self.graph))?;
        let floor = self.value_at_rebuild.twice() - 2 * self.updates_since_rebuild as i64;
        if self.x.value().twice() < floor {
            return Err(Error::Invariant(format!(
                "fractional value {} fell below {} minus {} updates",
                self.x.value(),
                self.value_at_rebuild,
                self.updates_since_rebuild
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge;

    fn ins(a: usize, b: usize) -> UpdateEvent {
        UpdateEvent::insert(edge(a, b))
    }

    #[test]
    fn path_in_order_matches_two() {
        let mut m = MaximalKMatcher::new(4, 1);
        for ev in [ins(0, 1), ins(1, 2), ins(2, 3)] {
            m.apply(&ev).unwrap();
            m.check_invariants().unwrap();
        }
        let got: Vec<Edge> = m.current().edges().collect();
        assert_eq!(got, vec![edge(0, 1), edge(2, 3)]);
    }

    #[test]
    fn path_middle_first_matches_one() {
        let mut m = MaximalKMatcher::new(4, 1);
        for ev in [ins(1, 2), ins(0, 1), ins(2, 3)] {
            m.apply(&ev).unwrap();
        }
        assert_eq!(m.current().len(), 1);
        m.check_invariants().unwrap();
    }

    #[test]
    fn triangle_k2_takes_all() {
        let mut m = MaximalKMatcher::new(3, 2);
        for ev in [ins(0, 1), ins(1, 2), ins(0, 2)] {
            m.apply(&ev).unwrap();
        }
        assert_eq!(m.current().len(), 3);
    }

    #[test]
    fn delete_restores_maximality() {
        let mut m = MaximalKMatcher::new(4, 1);
        for ev in [ins(1, 2), ins(0, 1), ins(2, 3)] {
            m.apply(&ev).unwrap();
        }
        let delta = m.delete(edge(1, 2)).unwrap();
        assert_eq!(delta.removed, vec![edge(1, 2)]);
        assert_eq!(delta.added, vec![edge(0, 1), edge(2, 3)]);
        m.check_invariants().unwrap();
        assert!(matches!(m.delete(edge(1, 2)), Err(Error::InvalidEvent(_))));
        assert!(matches!(m.insert(edge(0, 1)), Err(Error::InvalidEvent(_))));
    }

    #[test]
    fn fractional_single_edge() {
        let mut fm = FractionalMatcher::new(2, 1, 0.25).unwrap();
        let changes = fm.apply(&ins(0, 1)).unwrap();
        assert_eq!(changes, vec![(edge(0, 1), 0, 2)]);
        assert_eq!(fm.current().value(), HalfInt::from_int(1));
    }

    #[test]
    fn fractional_triangle_and_delete() {
        let mut fm = FractionalMatcher::new(3, 1, 0.25).unwrap();
        for ev in [ins(0, 1), ins(1, 2), ins(0, 2)] {
            fm.apply(&ev).unwrap();
            fm.check_invariants().unwrap();
        }
        // c = 3/2 at the last rebuild, interval max(1, ⌊0.375⌋) = 1.
        assert!(fm.current().iter().all(|(_, t)| t == 1));
        assert_eq!(fm.current().value(), HalfInt::from_twice(3));
    }

    #[test]
    fn fractional_delete_between_rebuilds() {
        let mut fm = FractionalMatcher::new(3, 1, 0.9).unwrap();
        for ev in [ins(0, 1), ins(1, 2), ins(0, 2)] {
            fm.apply(&ev).unwrap();
        }
        // c = 3/2, ε = 0.9: interval ⌊1.35⌋ = 1, so force a longer one.
        let mut fm2 = FractionalMatcher::new(3, 1, 1.4).unwrap();
        for ev in [ins(0, 1), ins(1, 2), ins(0, 2)] {
            fm2.apply(&ev).unwrap();
        }
        assert_eq!(fm2.current().value(), HalfInt::from_twice(3));
        assert_eq!(fm2.rebuild_interval(), 2);
        let changes = fm2.apply(&UpdateEvent::delete(edge(0, 1))).unwrap();
        assert_eq!(changes, vec![(edge(0, 1), 1, 0)]);
        assert_eq!(fm2.current().value(), HalfInt::from_int(1));
        fm2.check_invariants().unwrap();
        assert_eq!(fm.current().value(), HalfInt::from_twice(3));
    }
}
