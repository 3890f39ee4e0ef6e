//! Simple undirected graphs under edge insertions and deletions, plus the
//! line-oriented update stream format every other module consumes.
//!
//! A stream file looks like
//!
//! ```text
//! # comment
//! H 3 2
//! + 0 1
//! + 1 2
//! - 0 1
//! ```
//!
//! where the header gives the vertex count and the palette size `k`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub type VertexId = usize;

/// An undirected edge stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: VertexId,
    v: VertexId,
}

impl Edge {
    /// Builds the canonical edge `{a, b}`. Self-loops are rejected.
    pub fn new(a: VertexId, b: VertexId) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge { u: a, v: b }),
            std::cmp::Ordering::Greater => Ok(Edge { u: b, v: a }),
            std::cmp::Ordering::Equal => Err(Error::SelfLoop(a)),
        }
    }

    #[inline]
    pub fn u(&self) -> VertexId {
        self.u
    }

    #[inline]
    pub fn v(&self) -> VertexId {
        self.v
    }

    #[inline]
    pub fn endpoints(&self) -> [VertexId; 2] {
        [self.u, self.v]
    }

    #[inline]
    pub fn contains(&self, w: VertexId) -> bool {
        self.u == w || self.v == w
    }

    /// The endpoint that is not `w`. `w` must be an endpoint.
    #[inline]
    pub fn other(&self, w: VertexId) -> VertexId {
        debug_assert!(self.contains(w));
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// Shorthand for tests and examples: panics on a self-loop.
pub fn edge(a: VertexId, b: VertexId) -> Edge {
    Edge::new(a, b).expect("self-loop")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpdateKind {
    Insert,
    Delete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UpdateEvent {
    pub kind: UpdateKind,
    pub edge: Edge,
}

impl UpdateEvent {
    pub fn insert(edge: Edge) -> Self {
        UpdateEvent {
            kind: UpdateKind::Insert,
            edge,
        }
    }

    pub fn delete(edge: Edge) -> Self {
        UpdateEvent {
            kind: UpdateKind::Delete,
            edge,
        }
    }

    /// The event that undoes this one.
    pub fn inverse(&self) -> Self {
        let kind = match self.kind {
            UpdateKind::Insert => UpdateKind::Delete,
            UpdateKind::Delete => UpdateKind::Insert,
        };
        UpdateEvent {
            kind,
            edge: self.edge,
        }
    }
}

impl fmt::Display for UpdateEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.kind {
            UpdateKind::Insert => '+',
            UpdateKind::Delete => '-',
        };
        write!(f, "{} {} {}", sign, self.edge.u, self.edge.v)
    }
}

/// Simple undirected graph on a fixed vertex set `0..n`.
///
/// Neighbor sets are ordered so that every scan over incident edges is
/// deterministic. A histogram of degrees keeps `max_degree` O(1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicGraph {
    adj: Vec<BTreeSet<VertexId>>,
    m: usize,
    degree_hist: Vec<usize>,
    max_deg: usize,
}

impl DynamicGraph {
    pub fn new(n: usize) -> Self {
        DynamicGraph {
            adj: vec![BTreeSet::new(); n],
            m: 0,
            degree_hist: vec![n],
            max_deg: 0,
        }
    }

    /// Builds a graph from an edge list, ignoring duplicates.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = DynamicGraph::new(n);
        for e in edges {
            g.check_edge(e)?;
            g.insert(e);
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn max_degree(&self) -> usize {
        self.max_deg
    }

    #[inline]
    pub fn contains(&self, e: Edge) -> bool {
        e.v < self.n() && self.adj[e.u].contains(&e.v)
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: VertexId) -> impl DoubleEndedIterator<Item = VertexId> + '_ {
        self.adj[v].iter().copied()
    }

    /// All edges in ascending canonical order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.range(u + 1..).map(move |&v| Edge { u, v }))
    }

    pub fn check_edge(&self, e: Edge) -> Result<()> {
        if e.v >= self.n() {
            return Err(Error::VertexOutOfRange {
                vertex: e.v,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// Applies `ev` if its precondition holds. Returns whether the graph changed.
    pub fn apply(&mut self, ev: &UpdateEvent) -> Result<bool> {
        self.check_edge(ev.edge)?;
        Ok(match ev.kind {
            UpdateKind::Insert => self.insert(ev.edge),
            UpdateKind::Delete => self.delete(ev.edge),
        })
    }

    /// Inserts `e`; false if already present. Endpoints must be in range.
    pub fn insert(&mut self, e: Edge) -> bool {
        if !self.adj[e.u].insert(e.v) {
            return false;
        }
        self.adj[e.v].insert(e.u);
        self.m += 1;
        self.bump(e.u, true);
        self.bump(e.v, true);
        true
    }

    /// Removes `e`; false if absent.
    pub fn delete(&mut self, e: Edge) -> bool {
        if e.v >= self.n() || !self.adj[e.u].remove(&e.v) {
            return false;
        }
        self.adj[e.v].remove(&e.u);
        self.m -= 1;
        self.bump(e.u, false);
        self.bump(e.v, false);
        true
    }

    fn bump(&mut self, w: VertexId, up: bool) {
        let d = self.adj[w].len();
        let old = if up { d - 1 } else { d + 1 };
        self.degree_hist[old] -= 1;
        if self.degree_hist.len() <= d {
            self.degree_hist.push(0);
        }
        self.degree_hist[d] += 1;
        if d > self.max_deg {
            self.max_deg = d;
        }
        while self.max_deg > 0 && self.degree_hist[self.max_deg] == 0 {
            self.max_deg -= 1;
        }
    }

    /// Structural self-check: symmetric adjacency, no loops, consistent `m`
    /// and degree bookkeeping.
    pub fn check_invariants(&self) -> Result<()> {
        let mut sum = 0;
        let mut max = 0;
        for (u, nb) in self.adj.iter().enumerate() {
            sum += nb.len();
            max = max.max(nb.len());
            for &v in nb {
                if v == u {
                    return Err(Error::Invariant(format!("self-loop at {u}")));
                }
                if v >= self.n() || !self.adj[v].contains(&u) {
                    return Err(Error::Invariant(format!("asymmetric adjacency {u}-{v}")));
                }
            }
        }
        if sum != 2 * self.m {
            return Err(Error::Invariant(format!(
                "edge count {} but degree sum {}",
                self.m, sum
            )));
        }
        if max != self.max_deg {
            return Err(Error::Invariant(format!(
                "cached max degree {} but actual {}",
                self.max_deg, max
            )));
        }
        Ok(())
    }
}

/// A two-sided vertex partition; `side[v]` is true for the left side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    left: Vec<bool>,
}

impl Bipartition {
    pub fn from_sides(left: Vec<bool>) -> Self {
        Bipartition { left }
    }

    /// Left side is `0..split`, right side `split..n`.
    pub fn split_at(n: usize, split: usize) -> Self {
        Bipartition {
            left: (0..n).map(|v| v < split).collect(),
        }
    }

    /// Two-colors `g` by BFS, putting the lowest vertex of each component on
    /// the left. Fails with the first monochromatic edge found.
    pub fn detect(g: &DynamicGraph) -> Result<Self> {
        let n = g.n();
        let mut side: Vec<Option<bool>> = vec![None; n];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(true);
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let su = side[u].unwrap();
                for w in g.neighbors(u) {
                    match side[w] {
                        None => {
                            side[w] = Some(!su);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == su => return Err(Error::NotBipartite(edge(u, w))),
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(Bipartition {
            left: side.into_iter().map(|s| s.unwrap_or(true)).collect(),
        })
    }

    #[inline]
    pub fn is_left(&self, v: VertexId) -> bool {
        self.left[v]
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    /// Checks that every edge of `g` crosses the partition.
    pub fn check(&self, g: &DynamicGraph) -> Result<()> {
        if self.left.len() != g.n() {
            return Err(Error::InvalidParameter(format!(
                "bipartition covers {} vertices, graph has {}",
                self.left.len(),
                g.n()
            )));
        }
        match g.edges().find(|e| self.left[e.u] == self.left[e.v]) {
            Some(e) => Err(Error::NotBipartite(e)),
            None => Ok(()),
        }
    }
}

/// A parsed update stream: header plus events in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stream {
    pub n: usize,
    pub k: u32,
    pub events: Vec<UpdateEvent>,
}

impl Stream {
    /// The graph containing every edge ever inserted by the stream.
    pub fn union_graph(&self) -> DynamicGraph {
        let mut g = DynamicGraph::new(self.n);
        for ev in &self.events {
            if ev.kind == UpdateKind::Insert {
                g.insert(ev.edge);
            }
        }
        g
    }
}

impl fmt::Display for Stream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "H {} {}", self.n, self.k)?;
        for ev in &self.events {
            writeln!(f, "{ev}")?;
        }
        Ok(())
    }
}

pub fn parse_stream(text: &str) -> Result<Stream> {
    let mut header: Option<(usize, u32)> = None;
    let mut events = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line, msg };
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(err(format!("expected 3 fields, found {}", tokens.len())));
        }
        let a: usize = tokens[1]
            .parse()
            .map_err(|_| err(format!("bad integer {:?}", tokens[1])))?;
        let b: usize = tokens[2]
            .parse()
            .map_err(|_| err(format!("bad integer {:?}", tokens[2])))?;
        match (tokens[0], header) {
            ("H", None) => {
                let k = u32::try_from(b).map_err(|_| err("k too large".into()))?;
                if k == 0 {
                    return Err(err("k must be at least 1".into()));
                }
                header = Some((a, k));
            }
            ("H", Some(_)) => return Err(err("duplicate header".into())),
            (_, None) => return Err(err("missing header line `H <n> <k>`".into())),
            (sign @ ("+" | "-"), Some((n, _))) => {
                let e = Edge::new(a, b).map_err(|_| err(format!("self-loop on vertex {a}")))?;
                if e.v >= n {
                    return Err(err(format!("vertex {} out of range for n = {n}", e.v)));
                }
                events.push(if sign == "+" {
                    UpdateEvent::insert(e)
                } else {
                    UpdateEvent::delete(e)
                });
            }
            (other, _) => return Err(err(format!("unknown record type {other:?}"))),
        }
    }
    let (n, k) = header.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        msg: "missing header line `H <n> <k>`".into(),
    })?;
    Ok(Stream { n, k, events })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_isolated() {
        let g = DynamicGraph::new(0);
        assert_eq!((g.n(), g.m()), (0, 0));
        let g = DynamicGraph::new(5);
        assert_eq!(g.n(), 5);
        assert_eq!(g.max_degree(), 0);
        assert_eq!(g.degree(4), 0);
    }

    #[test]
    fn triangle() {
        let mut g = DynamicGraph::new(3);
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            assert!(g.insert(edge(a, b)));
        }
        assert_eq!(g.m(), 3);
        assert_eq!(g.max_degree(), 2);
        g.check_invariants().unwrap();
    }

    #[test]
    fn apply_insert_duplicate_delete() {
        let mut g = DynamicGraph::new(2);
        let e = edge(0, 1);
        assert!(g.apply(&UpdateEvent::insert(e)).unwrap());
        assert_eq!(g.m(), 1);
        assert!(!g.apply(&UpdateEvent::insert(e)).unwrap());
        assert_eq!(g.m(), 1);
        assert!(g.apply(&UpdateEvent::delete(e)).unwrap());
        assert_eq!(g.m(), 0);
        assert!(!g.apply(&UpdateEvent::delete(e)).unwrap());
    }

    #[test]
    fn self_loop_rejected() {
        assert_eq!(Edge::new(3, 3), Err(Error::SelfLoop(3)));
        let g = DynamicGraph::new(2);
        assert!(g.check_edge(edge(0, 5)).is_err());
    }

    #[test]
    fn star_degrees() {
        let g = DynamicGraph::from_edges(5, [edge(0, 1), edge(0, 2), edge(0, 3)]).unwrap();
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.degree(4), 0);
        assert_eq!(g.max_degree(), 3);
    }

    #[test]
    fn max_degree_tracks_deletions() {
        let mut g = DynamicGraph::from_edges(5, [edge(0, 1), edge(0, 2), edge(0, 3)]).unwrap();
        g.delete(edge(0, 1));
        g.delete(edge(0, 2));
        assert_eq!(g.max_degree(), 1);
        g.delete(edge(0, 3));
        assert_eq!(g.max_degree(), 0);
        g.check_invariants().unwrap();
    }

    #[test]
    fn parse_triangle() {
        let s = parse_stream("H 3 2\n+ 0 1\n+ 1 2\n+ 0 2").unwrap();
        assert_eq!((s.n, s.k), (3, 2));
        assert_eq!(s.events.len(), 3);
        assert!(s.events.iter().all(|e| e.kind == UpdateKind::Insert));
        assert_eq!(s.events[2].edge, edge(0, 2));
    }

    #[test]
    fn parse_insert_then_delete() {
        let s = parse_stream("H 2 1\n+ 0 1\n- 0 1").unwrap();
        assert_eq!(s.events[0], UpdateEvent::insert(edge(0, 1)));
        assert_eq!(s.events[1], UpdateEvent::delete(edge(0, 1)));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_stream("H 2 1\n+ 0 0") {
            Err(Error::Parse { line: 2, msg }) => assert!(msg.contains("self-loop")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_stream("# c\n\n+ 0 1"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_stream("H 2 1\n+ 0 9"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_stream("H 2 1\n* 0 1"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_stream(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn comments_and_display_roundtrip() {
        let text = "# generated\nH 4 3\n+ 0 1\n# mid\n+ 2 3\n- 0 1\n";
        let s = parse_stream(text).unwrap();
        assert_eq!(parse_stream(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn bipartition_detection() {
        let c4 = DynamicGraph::from_edges(4, [edge(0, 1), edge(1, 2), edge(2, 3), edge(0, 3)]).unwrap();
        let bp = Bipartition::detect(&c4).unwrap();
        bp.check(&c4).unwrap();
        assert!(bp.is_left(0) && !bp.is_left(1) && bp.is_left(2));
        let c3 = DynamicGraph::from_edges(3, [edge(0, 1), edge(1, 2), edge(0, 2)]).unwrap();
        assert!(matches!(Bipartition::detect(&c3), Err(Error::NotBipartite(_))));
    }
}
