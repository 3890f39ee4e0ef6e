//! Deterministic greedy maintenance of a maximal `k`-edge coloring.
//!
//! An inserted edge takes the smallest color free at both endpoints, if any.
//! When an edge of color `c` is deleted, each endpoint (lower id first) gets
//! one chance to hand `c` to an uncolored incident edge, scanning neighbors
//! in ascending order. Only `c` became free, and only at those two vertices,
//! so this restores maximality.

use crate::coloring::{check_proper, Color, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, Edge, UpdateEvent, UpdateKind};

/// Work done by the most recent update, for cost assertions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GreedyCounters {
    /// Candidate colors tested during the last insertion.
    pub insert_probes: usize,
    /// Incident edges examined during the last deletion.
    pub delete_candidates: usize,
    /// Edges recolored by the last deletion (0, 1 or 2).
    pub recolored: usize,
}

#[derive(Debug, Clone)]
pub struct GreedyState {
    graph: DynamicGraph,
    coloring: PartialColoring,
    counters: GreedyCounters,
}

impl GreedyState {
    pub fn new(n: usize, k: u32) -> Self {
        GreedyState {
            graph: DynamicGraph::new(n),
            coloring: PartialColoring::new(n, k),
            counters: GreedyCounters::default(),
        }
    }

    pub fn k(&self) -> u32 {
        self.coloring.palette()
    }

    pub fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    pub fn current_coloring(&self) -> &PartialColoring {
        &self.coloring
    }

    pub fn counters(&self) -> GreedyCounters {
        self.counters
    }

    pub fn apply(&mut self, ev: &UpdateEvent) -> Result<()> {
        match ev.kind {
            UpdateKind::Insert => self.insert(ev.edge),
            UpdateKind::Delete => self.delete(ev.edge),
        }
    }

    pub fn insert(&mut self, e: Edge) -> Result<()> {
        self.graph.check_edge(e)?;
        if !self.graph.insert(e) {
            return Err(Error::InvalidEvent(format!("insert of present edge {e}")));
        }
        let (color, probes) = self.coloring.common_free_color_probed(e.u(), e.v());
        self.counters = GreedyCounters {
            insert_probes: probes,
            ..GreedyCounters::default()
        };
        if let Some(c) = color {
            self.coloring.assign(e, c)?;
        }
        Ok(())
    }

    pub fn delete(&mut self, e: Edge) -> Result<()> {
        if !self.graph.delete(e) {
            return Err(Error::InvalidEvent(format!("delete of absent edge {e}")));
        }
        self.counters = GreedyCounters::default();
        if let Some(c) = self.coloring.unassign(e) {
            for w in e.endpoints() {
                if self.coloring.is_free(w, c) {
                    self.recolor_one_at(w, c)?;
                }
            }
        }
        Ok(())
    }

    fn recolor_one_at(&mut self, w: usize, c: Color) -> Result<()> {
        let mut found = None;
        for y in self.graph.neighbors(w) {
            self.counters.delete_candidates += 1;
            let cand = Edge::new(w, y)?;
            if self.coloring.color(cand).is_none() && self.coloring.is_free(y, c) {
                found = Some(cand);
                break;
            }
        }
        if let Some(cand) = found {
            self.coloring.assign(cand, c)?;
            self.counters.recolored += 1;
        }
        Ok(())
    }

    /// Properness, index consistency and maximality: no uncolored edge has
    /// a color free at both endpoints.
    pub fn check_invariants(&self) -> Result<()> {
        self.graph.check_invariants()?;
        self.coloring.check_consistency()?;
        check_proper(&self.coloring, &self.graph)?;
        check_maximal(&self.coloring, &self.graph)
    }

    #[doc(hidden)]
    pub fn coloring_mut(&mut self) -> &mut PartialColoring {
        &mut self.coloring
    }
}

/// Fails on the first uncolored edge of `g` that could still be colored.
pub fn check_maximal(f: &PartialColoring, g: &DynamicGraph) -> Result<()> {
    for e in g.edges() {
        if f.color(e).is_none() {
            let free = (1..=f.palette())
                .map(Color::new)
                .find(|&c| f.is_free(e.u(), c) && f.is_free(e.v(), c));
            if let Some(c) = free {
                return Err(Error::Invariant(format!(
                    "uncolored edge {e} has color {c} free at both ends"
                )));
            }
        }
    }
    Ok(())
}
