//! Stream replay, verification, generation and metrics.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coloring::{Color, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::{Bipartition, DynamicGraph, Edge, Stream, UpdateEvent, UpdateKind};
use crate::greedy::GreedyState;
use crate::oracle::{brute_fractional, brute_k_edge_coloring, brute_k_matching, COLORING_LIMIT};
use crate::pipeline::{Pipeline, Variant};
use crate::polytope::BVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algo {
    Greedy,
    Pipeline(Variant),
}

impl Algo {
    pub const ALL: [Algo; 5] = [
        Algo::Greedy,
        Algo::Pipeline(Variant::MatchO),
        Algo::Pipeline(Variant::MatchA),
        Algo::Pipeline(Variant::BipartiteO),
        Algo::Pipeline(Variant::BipartiteA),
    ];

    pub fn needs_bipartite(self) -> bool {
        matches!(self, Algo::Pipeline(v) if v.is_bipartite())
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algo::Greedy => f.write_str("greedy"),
            Algo::Pipeline(v) => v.fmt(f),
        }
    }
}

impl FromStr for Algo {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(Algo::Greedy),
            other => other.parse().map(Algo::Pipeline),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub algo: Algo,
    pub k: u32,
    pub eps: f64,
    pub seed: u64,
    pub oracle: bool,
    /// When false, `elapsed_ns` is written as 0 so output is reproducible.
    pub timing: bool,
}

impl RunConfig {
    pub fn new(algo: Algo, k: u32) -> Self {
        RunConfig {
            algo,
            k,
            eps: 0.25,
            seed: 0,
            oracle: false,
            timing: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        match self.algo {
            Algo::Pipeline(v) if v.is_fractional() && !(self.eps > 0.0 && self.eps < 0.5) => Err(
                Error::InvalidParameter(format!("{} needs epsilon in (0, 1/2), got {}", self.algo, self.eps)),
            ),
            Algo::Pipeline(_) if !(self.eps >= 0.0 && self.eps.is_finite()) => Err(Error::InvalidParameter(
                format!("epsilon must be non-negative, got {}", self.eps),
            )),
            _ => Ok(()),
        }
    }
}

/// One line of metrics output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsRecord {
    pub step: usize,
    pub op: &'static str,
    pub colored: usize,
    pub recolored: bool,
    pub matcher_size: usize,
    pub sparsifier_size: Option<usize>,
    pub oracle_p_star: Option<usize>,
    pub ratio: Option<f64>,
    pub elapsed_ns: u64,
}

/// A running algorithm of any kind.
#[derive(Debug, Clone)]
pub enum Engine {
    Greedy(GreedyState),
    Pipeline(Pipeline),
}

impl Engine {
    /// Builds the engine for `cfg`; bipartite variants take their sides from
    /// the union of all edges the stream inserts.
    pub fn for_stream(cfg: &RunConfig, stream: &Stream) -> Result<Engine> {
        cfg.validate()?;
        Ok(match cfg.algo {
            Algo::Greedy => Engine::Greedy(GreedyState::new(stream.n, cfg.k)),
            Algo::Pipeline(v) => {
                let sides = if v.is_bipartite() {
                    Some(Bipartition::detect(&stream.union_graph())?)
                } else {
                    None
                };
                Engine::Pipeline(Pipeline::new(v, stream.n, cfg.k, cfg.eps, cfg.seed, sides)?)
            }
        })
    }

    pub fn apply(&mut self, ev: &UpdateEvent) -> Result<()> {
        match self {
            Engine::Greedy(g) => g.apply(ev),
            Engine::Pipeline(p) => p.apply(ev),
        }
    }

    pub fn coloring(&self) -> &PartialColoring {
        match self {
            Engine::Greedy(g) => g.current_coloring(),
            Engine::Pipeline(p) => p.current_coloring(),
        }
    }

    pub fn graph(&self) -> &DynamicGraph {
        match self {
            Engine::Greedy(g) => g.graph(),
            Engine::Pipeline(p) => p.graph(),
        }
    }

    pub fn check_invariants(&self) -> Result<()> {
        match self {
            Engine::Greedy(g) => g.check_invariants(),
            Engine::Pipeline(p) => p.check_invariants(),
        }
    }

    /// For greedy: whether the last deletion recolored an edge.
    pub fn recolored(&self) -> bool {
        match self {
            Engine::Greedy(g) => g.counters().recolored > 0,
            Engine::Pipeline(p) => p.recolored(),
        }
    }

    pub fn matcher_size(&self) -> usize {
        match self {
            Engine::Greedy(_) => 0,
            Engine::Pipeline(p) => p.matcher_size(),
        }
    }

    pub fn sparsifier_size(&self) -> Option<usize> {
        match self {
            Engine::Greedy(_) => None,
            Engine::Pipeline(p) => p.sparsifier_size(),
        }
    }

    fn coloring_mut(&mut self) -> &mut PartialColoring {
        match self {
            Engine::Greedy(g) => g.coloring_mut(),
            Engine::Pipeline(p) => p.coloring_mut(),
        }
    }
}

fn op_name(kind: UpdateKind) -> &'static str {
    match kind {
        UpdateKind::Insert => "insert",
        UpdateKind::Delete => "delete",
    }
}

/// `p* / p`, with `0/0 = 1` and `None` for a positive optimum over `p = 0`.
pub fn ratio(p_star: usize, p: usize) -> Option<f64> {
    match (p_star, p) {
        (0, 0) => Some(1.0),
        (_, 0) => None,
        _ => Some(p_star as f64 / p as f64),
    }
}

/// Replays `stream` and returns one record per update.
pub fn run(cfg: &RunConfig, stream: &Stream) -> Result<Vec<MetricsRecord>> {
    let mut out = Vec::with_capacity(stream.events.len());
    run_with(cfg, stream, |r| {
        out.push(r);
        Ok(())
    })?;
    Ok(out)
}

/// Replays `stream`, writing records as JSON lines.
pub fn run_to_writer<W: Write>(cfg: &RunConfig, stream: &Stream, mut w: W) -> Result<usize> {
    let mut count = 0;
    run_with(cfg, stream, |r| {
        count += 1;
        let line = serde_json::to_string(&r).map_err(|e| Error::Invariant(e.to_string()))?;
        writeln!(w, "{line}").map_err(|e| Error::Invariant(format!("write failed: {e}")))
    })?;
    w.flush().map_err(|e| Error::Invariant(format!("write failed: {e}")))?;
    Ok(count)
}

fn run_with<F: FnMut(MetricsRecord) -> Result<()>>(cfg: &RunConfig, stream: &Stream, mut sink: F) -> Result<()> {
    let mut engine = Engine::for_stream(cfg, stream)?;
    let mut warned = false;
    for (idx, ev) in stream.events.iter().enumerate() {
        let start = Instant::now();
        engine.apply(ev).map_err(|e| step_error(idx + 1, e))?;
        let elapsed_ns = if cfg.timing { start.elapsed().as_nanos() as u64 } else { 0 };
        let colored = engine.coloring().colored_count();
        let mut oracle_p_star = None;
        if cfg.oracle {
            match brute_k_edge_coloring(engine.graph(), cfg.k) {
                Ok(f) => oracle_p_star = Some(f.colored_count()),
                Err(Error::OracleTooLarge { m, limit }) => {
                    if !std::mem::replace(&mut warned, true) {
                        warn!("step {}: {m} edges exceed the oracle limit {limit}; omitting oracle fields", idx + 1);
                    }
                }
                Err(e) => return Err(e),
            }
        }
        sink(MetricsRecord {
            step: idx + 1,
            op: op_name(ev.kind),
            colored,
            recolored: engine.recolored(),
            matcher_size: engine.matcher_size(),
            sparsifier_size: engine.sparsifier_size(),
            oracle_p_star,
            ratio: oracle_p_star.and_then(|ps| ratio(ps, colored)),
            elapsed_ns,
        })?;
    }
    Ok(())
}

fn step_error(step: usize, e: Error) -> Error {
    Error::Invariant(format!("step {step}: {e}"))
}

/// Where and why verification stopped.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyFailure {
    pub step: usize,
    pub error: Error,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.step, self.error)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifySummary {
    pub steps: usize,
    pub recolors: usize,
    pub max_insert_probes: usize,
    pub max_delete_candidates: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Test hook: corrupt the output coloring right after this step.
    #[doc(hidden)]
    pub corrupt_at: Option<usize>,
}

/// Replays `stream` checking every invariant after every update, plus an
/// independent replay of the graph and the greedy cost counters.
pub fn verify(cfg: &RunConfig, stream: &Stream, opts: VerifyOptions) -> std::result::Result<VerifySummary, VerifyFailure> {
    let fail = |step, error| VerifyFailure { step, error };
    let mut engine = Engine::for_stream(cfg, stream).map_err(|e| fail(0, e))?;
    let mut shadow = DynamicGraph::new(stream.n);
    let mut summary = VerifySummary::default();
    for (idx, ev) in stream.events.iter().enumerate() {
        let step = idx + 1;
        let delta_before = engine.graph().max_degree();
        engine.apply(ev).map_err(|e| fail(step, e))?;
        if !shadow.apply(ev).map_err(|e| fail(step, e))? {
            return Err(fail(step, Error::InvalidEvent(format!("event {ev} does not apply"))));
        }
        if opts.corrupt_at == Some(step) {
            corrupt(&mut engine);
        }
        check_same_graph(&shadow, engine.graph()).map_err(|e| fail(step, e))?;
        engine.check_invariants().map_err(|e| fail(step, e))?;
        match &engine {
            Engine::Greedy(g) => {
                let c = g.counters();
                let delta = engine.graph().max_degree();
                match ev.kind {
                    UpdateKind::Insert if c.insert_probes > (g.k() as usize).min(delta) + 1 => {
                        return Err(fail(
                            step,
                            Error::Invariant(format!("insert probed {} colors, Δ = {delta}", c.insert_probes)),
                        ));
                    }
                    UpdateKind::Delete if c.delete_candidates > 2 * delta_before => {
                        return Err(fail(
                            step,
                            Error::Invariant(format!(
                                "delete examined {} edges, Δ = {delta_before}",
                                c.delete_candidates
                            )),
                        ));
                    }
                    _ => {}
                }
                summary.max_insert_probes = summary.max_insert_probes.max(c.insert_probes);
                summary.max_delete_candidates = summary.max_delete_candidates.max(c.delete_candidates);
                summary.recolors += c.recolored;
            }
            Engine::Pipeline(p) => summary.recolors = p.recolors(),
        }
        summary.steps = step;
    }
    Ok(summary)
}

fn check_same_graph(a: &DynamicGraph, b: &DynamicGraph) -> Result<()> {
    if a.m() != b.m() || !a.edges().eq(b.edges()) {
        return Err(Error::Invariant(format!(
            "maintained graph has {} edges, replay has {}",
            b.m(),
            a.m()
        )));
    }
    Ok(())
}

// Colors a non-edge, or gives an edge the color of an adjacent edge.
fn corrupt(engine: &mut Engine) {
    let g = engine.graph().clone();
    let n = g.n();
    let absent = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .map(|(a, b)| Edge::new(a, b).expect("distinct"))
        .find(|&e| !g.contains(e));
    let f = engine.coloring_mut();
    if let Some(e) = absent {
        f.tamper_assign(e, Color::new(1));
        return;
    }
    let colored: Vec<(Edge, Color)> = f.iter().collect();
    for (e, c) in colored {
        if let Some(y) = g.neighbors(e.u()).find(|&y| y != e.v()) {
            f.tamper_assign(Edge::new(e.u(), y).expect("distinct"), c);
            return;
        }
    }
}

/// Stream generation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    pub steps: usize,
    pub p_delete: f64,
    pub seed: u64,
    /// Written to the header.
    pub k: u32,
    /// Only insert edges between `0..n/2` and `n/2..n`.
    pub bipartite: bool,
    /// Delete whenever this many edges are present.
    pub max_edges: Option<usize>,
}

impl GenConfig {
    pub fn new(n: usize, steps: usize, p_delete: f64, seed: u64) -> Self {
        GenConfig {
            n,
            steps,
            p_delete,
            seed,
            k: 2,
            bipartite: false,
            max_edges: None,
        }
    }
}

/// A random valid stream: deletions hit present edges, insertions absent
/// ones. Each step deletes with probability `p_delete` (always when the
/// graph is full, never when it is empty).
pub fn generate_stream(cfg: &GenConfig) -> Result<Stream> {
    if !(0.0..=1.0).contains(&cfg.p_delete) {
        return Err(Error::InvalidParameter(format!("p_delete must lie in [0, 1], got {}", cfg.p_delete)));
    }
    if cfg.k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let n = cfg.n;
    let split = n / 2;
    let pair_count = if cfg.bipartite { split * (n - split) } else { n * n.saturating_sub(1) / 2 };
    let capacity = cfg.max_edges.map_or(pair_count, |c| c.min(pair_count));
    if cfg.steps > 0 && capacity == 0 {
        return Err(Error::InvalidParameter(format!("no edge can be inserted with n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut present = EdgeSet::default();
    // Built once the graph passes half density, where rejection sampling
    // would stall.
    let mut absent: Option<EdgeSet> = None;
    let mut events = Vec::with_capacity(cfg.steps);
    for _ in 0..cfg.steps {
        let delete = present.len() == capacity || (!present.is_empty() && rng.gen_bool(cfg.p_delete));
        if delete {
            let e = present.swap_remove(rng.gen_range(0..present.len()));
            if let Some(abs) = absent.as_mut() {
                abs.push(e);
            }
            events.push(UpdateEvent::delete(e));
        } else {
            if absent.is_none() && 2 * present.len() > pair_count {
                let mut abs = EdgeSet::default();
                for e in all_pairs(n, cfg.bipartite).filter(|e| !present.contains(e)) {
                    abs.push(e);
                }
                absent = Some(abs);
            }
            let e = match absent.as_mut() {
                Some(abs) => abs.swap_remove(rng.gen_range(0..abs.len())),
                None => loop {
                    let e = random_pair(&mut rng, n, cfg.bipartite);
                    if !present.contains(&e) {
                        break e;
                    }
                },
            };
            present.push(e);
            events.push(UpdateEvent::insert(e));
        }
    }
    Ok(Stream { n, k: cfg.k, events })
}

// Edges with O(1) membership and uniform removal by index.
#[derive(Default)]
struct EdgeSet {
    items: Vec<Edge>,
    pos: HashMap<Edge, usize>,
}

impl EdgeSet {
    fn len(&self) -> usize {
        self.items.len()
    }

    fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    fn contains(&self, e: &Edge) -> bool {
        self.pos.contains_key(e)
    }

    fn push(&mut self, e: Edge) {
        self.pos.insert(e, self.items.len());
        self.items.push(e);
    }

    fn swap_remove(&mut self, i: usize) -> Edge {
        let e = self.items.swap_remove(i);
        self.pos.remove(&e);
        if let Some(&moved) = self.items.get(i) {
            self.pos.insert(moved, i);
        }
        e
    }
}

fn random_pair(rng: &mut ChaCha8Rng, n: usize, bipartite: bool) -> Edge {
    if bipartite {
        let split = n / 2;
        let a = rng.gen_range(0..split);
        let b = rng.gen_range(split..n);
        return Edge::new(a, b).expect("sides are disjoint");
    }
    loop {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            return Edge::new(a, b).expect("distinct");
        }
    }
}

fn all_pairs(n: usize, bipartite: bool) -> impl Iterator<Item = Edge> {
    let split = n / 2;
    (0..n)
        .flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
        .filter(move |&(a, b)| !bipartite || (a < split && b >= split))
        .map(|(a, b)| Edge::new(a, b).expect("distinct"))
}

/// Per-step optima of the graph a stream builds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRecord {
    pub step: usize,
    pub m: usize,
    pub p_star: Option<usize>,
    pub s_star: Option<usize>,
    pub frac_opt: Option<f64>,
}

/// Runs every oracle after every update; fields are `None` once the graph
/// exceeds that oracle's size limit.
pub fn oracle_trace(stream: &Stream, k: u32) -> Result<Vec<OracleRecord>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let mut g = DynamicGraph::new(stream.n);
    let b = BVector::uniform(stream.n, k);
    let mut out = Vec::with_capacity(stream.events.len());
    for (idx, ev) in stream.events.iter().enumerate() {
        if !g.apply(ev)? {
            return Err(Error::InvalidEvent(format!("step {}: event {ev} does not apply", idx + 1)));
        }
        if g.m() > COLORING_LIMIT && out.last().is_none_or(|r: &OracleRecord| r.m <= COLORING_LIMIT) {
            warn!("step {}: {} edges exceed the coloring oracle limit", idx + 1, g.m());
        }
        out.push(OracleRecord {
            step: idx + 1,
            m: g.m(),
            p_star: brute_k_edge_coloring(&g, k).ok().map(|f| f.colored_count()),
            s_star: brute_k_matching(&g, k).ok().map(|m| m.len()),
            frac_opt: brute_fractional(&g, &b).ok().map(|x| x.value().to_f64()),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_stream;

    const C3: &str = "H 3 2\n+ 0 1\n+ 1 2\n+ 0 2\n";

    #[test]
    fn greedy_triangle_with_oracle() {
        let s = parse_stream(C3).unwrap();
        let cfg = RunConfig {
            oracle: true,
            ..RunConfig::new(Algo::Greedy, 2)
        };
        let recs = run(&cfg, &s).unwrap();
        assert_eq!(recs.len(), 3);
        let last = recs.last().unwrap();
        assert_eq!(last.colored, 2);
        assert_eq!(last.oracle_p_star, Some(2));
        assert_eq!(last.ratio, Some(1.0));
    }

    #[test]
    fn empty_stream_has_no_records() {
        let s = parse_stream("H 4 1\n").unwrap();
        let recs = run(&RunConfig::new(Algo::Pipeline(Variant::MatchO), 1), &s).unwrap();
        assert!(recs.is_empty());
    }

    #[test]
    fn matcha_epsilon_range() {
        let cfg = RunConfig {
            eps: 0.6,
            ..RunConfig::new(Algo::Pipeline(Variant::MatchA), 1)
        };
        assert!(cfg.validate().is_err());
        assert!(RunConfig::new(Algo::Greedy, 0).validate().is_err());
    }

    #[test]
    fn algo_names_round_trip() {
        for a in Algo::ALL {
            assert_eq!(a.to_string().parse::<Algo>().unwrap(), a);
        }
        assert!("vizing".parse::<Algo>().is_err());
    }

    #[test]
    fn generation_examples() {
        let s = generate_stream(&GenConfig::new(5, 0, 0.5, 1)).unwrap();
        assert_eq!(s.to_string(), "H 5 2\n");
        let s = generate_stream(&GenConfig::new(6, 15, 0.0, 1)).unwrap();
        assert!(s.events.iter().all(|e| e.kind == UpdateKind::Insert));
        assert_eq!(s.union_graph().m(), 15);
        let a = generate_stream(&GenConfig::new(30, 500, 0.4, 9)).unwrap().to_string();
        let b = generate_stream(&GenConfig::new(30, 500, 0.4, 9)).unwrap().to_string();
        assert_eq!(a, b);
        assert!(generate_stream(&GenConfig::new(5, 1, 1.5, 1)).is_err());
        assert!(generate_stream(&GenConfig::new(1, 1, 0.5, 1)).is_err());
    }

    #[test]
    fn generated_streams_are_valid() {
        let cfg = GenConfig {
            bipartite: true,
            max_edges: Some(10),
            ..GenConfig::new(12, 400, 0.3, 4)
        };
        let s = generate_stream(&cfg).unwrap();
        let reparsed = parse_stream(&s.to_string()).unwrap();
        assert_eq!(reparsed, s);
        let mut g = DynamicGraph::new(12);
        for ev in &s.events {
            assert!(g.apply(ev).unwrap());
            assert!(g.m() <= 10);
        }
        Bipartition::split_at(12, 6).check(&s.union_graph()).unwrap();
    }

    #[test]
    fn verify_passes_and_catches_corruption() {
        let s = generate_stream(&GenConfig::new(12, 300, 0.4, 2)).unwrap();
        for algo in [Algo::Greedy, Algo::Pipeline(Variant::MatchO), Algo::Pipeline(Variant::MatchA)] {
            let cfg = RunConfig::new(algo, 2);
            verify(&cfg, &s, VerifyOptions::default()).unwrap();
            let err = verify(&cfg, &s, VerifyOptions { corrupt_at: Some(40) }).unwrap_err();
            assert_eq!(err.step, 40);
        }
    }

    #[test]
    fn bipartite_algos_reject_odd_cycles() {
        let s = parse_stream(C3).unwrap();
        let cfg = RunConfig::new(Algo::Pipeline(Variant::BipartiteO), 2);
        assert!(matches!(Engine::for_stream(&cfg, &s), Err(Error::NotBipartite(_))));
    }

    #[test]
    fn byte_identical_metrics_without_timing() {
        let s = generate_stream(&GenConfig::new(20, 200, 0.3, 5)).unwrap();
        let cfg = RunConfig {
            timing: false,
            seed: 3,
            ..RunConfig::new(Algo::Pipeline(Variant::MatchA), 2)
        };
        let mut a = Vec::new();
        let mut b = Vec::new();
        run_to_writer(&cfg, &s, &mut a).unwrap();
        run_to_writer(&cfg, &s, &mut b).unwrap();
        assert_eq!(a, b);
        let first = String::from_utf8(a).unwrap().lines().next().unwrap().to_string();
        assert!(first.starts_with("{\"step\":1,\"op\":\"insert\",\"colored\":1,"), "{first}");
    }

    #[test]
    fn oracle_trace_triangle() {
        let s = parse_stream(C3).unwrap();
        let t = oracle_trace(&s, 2).unwrap();
        assert_eq!(t[2].p_star, Some(2));
        assert_eq!(t[2].s_star, Some(3));
        assert_eq!(t[2].frac_opt, Some(3.0));
        assert_eq!(ratio(0, 0), Some(1.0));
        assert_eq!(ratio(2, 0), None);
    }
}
