use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::{edge, DynamicGraph, Edge, VertexId};

/// A walk given by its vertex sequence; edge `i` joins `vertices[i]` and
/// `vertices[i + 1]`. A circuit repeats its first vertex at the end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub vertices: Vec<VertexId>,
}

impl Walk {
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_closed(&self) -> bool {
        !self.is_empty() && self.vertices.first() == self.vertices.last()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices.windows(2).map(|w| edge(w[0], w[1]))
    }

    /// For a closed walk, the same circuit started (and ended) at `start`.
    pub fn rotated_to(&self, start: VertexId) -> Option<Walk> {
        debug_assert!(self.is_closed());
        let body = &self.vertices[..self.vertices.len() - 1];
        let pos = body.iter().position(|&v| v == start)?;
        let mut vertices: Vec<VertexId> = body[pos..].iter().chain(&body[..pos]).copied().collect();
        vertices.push(start);
        Some(Walk { vertices })
    }

    /// Splits a closed walk into edge-disjoint simple cycles.
    pub fn split_cycles(&self) -> Vec<Walk> {
        let mut cycles = Vec::new();
        let mut stack: Vec<VertexId> = Vec::new();
        let mut pos: HashMap<VertexId, usize> = HashMap::new();
        for &v in &self.vertices {
            if let Some(&p) = pos.get(&v) {
                let mut cyc: Vec<VertexId> = stack.drain(p + 1..).collect();
                for w in &cyc {
                    pos.remove(w);
                }
                cyc.insert(0, v);
                cyc.push(v);
                cycles.push(Walk { vertices: cyc });
            } else {
                pos.insert(v, stack.len());
                stack.push(v);
            }
        }
        cycles
    }
}

/// Edges split into trails (open, distinct endpoints) and circuits such that
/// each odd-degree vertex ends exactly one trail and even-degree vertices end
/// none.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EulerPartition {
    pub trails: Vec<Walk>,
    pub circuits: Vec<Walk>,
}

impl EulerPartition {
    pub fn edge_count(&self) -> usize {
        self.trails.iter().chain(&self.circuits).map(Walk::len).sum()
    }

    /// Checks the partition against `h`: exact edge cover, adjacency of
    /// consecutive edges, trail endpoint rule.
    pub fn validate(&self, h: &DynamicGraph) -> Result<()> {
        let mut seen = BTreeSet::new();
        for w in self.trails.iter().chain(&self.circuits) {
            if w.is_empty() {
                return Err(Error::Invariant("empty walk in Euler partition".into()));
            }
            for e in w.edges() {
                if !h.contains(e) {
                    return Err(Error::Invariant(format!("walk uses non-edge {e}")));
                }
                if !seen.insert(e) {
                    return Err(Error::Invariant(format!("edge {e} covered twice")));
                }
            }
        }
        if seen.len() != h.m() {
            return Err(Error::Invariant(format!(
                "partition covers {} of {} edges",
                seen.len(),
                h.m()
            )));
        }
        if let Some(c) = self.circuits.iter().find(|c| !c.is_closed()) {
            return Err(Error::Invariant(format!("circuit {:?} is not closed", c.vertices)));
        }
        let mut ends = vec![0usize; h.n()];
        for t in &self.trails {
            let (a, b) = (t.vertices[0], *t.vertices.last().unwrap());
            if a == b {
                return Err(Error::Invariant("trail with equal endpoints".into()));
            }
            ends[a] += 1;
            ends[b] += 1;
        }
        for v in 0..h.n() {
            let expect = h.degree(v) % 2;
            if ends[v] != expect {
                return Err(Error::Invariant(format!(
                    "vertex {v} of degree {} ends {} trails",
                    h.degree(v),
                    ends[v]
                )));
            }
        }
        Ok(())
    }
}

/// Removes maximal trails until no edge is left: first from odd-degree
/// vertices (each such walk ends at another odd vertex), then from any vertex
/// with edges left (each such walk closes). Walks take the smallest unused
/// neighbor at every step.
pub fn euler_partition(h: &DynamicGraph) -> EulerPartition {
    let mut rest: Vec<BTreeSet<VertexId>> = (0..h.n()).map(|v| h.neighbors(v).collect()).collect();
    let mut out = EulerPartition::default();
    for v in 0..h.n() {
        if rest[v].len() % 2 == 1 {
            out.trails.push(walk_from(&mut rest, v));
        }
    }
    for v in 0..h.n() {
        while !rest[v].is_empty() {
            out.circuits.push(walk_from(&mut rest, v));
        }
    }
    out
}

fn walk_from(rest: &mut [BTreeSet<VertexId>], start: VertexId) -> Walk {
    let mut vertices = vec![start];
    let mut cur = start;
    while let Some(&next) = rest[cur].iter().next() {
        rest[cur].remove(&next);
        rest[next].remove(&cur);
        vertices.push(next);
        cur = next;
    }
    Walk { vertices }
}
