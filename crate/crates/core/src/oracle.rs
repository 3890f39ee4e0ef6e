//! Exhaustive ground truth on tiny graphs.
//!
//! These searches share no code with the algorithms they check: they work
//! on plain edge lists and bitmasks and only build library types for their
//! witnesses.

use std::collections::BTreeSet;

use crate::coloring::{Color, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::{edge, DynamicGraph, Edge};
use crate::polytope::{BVector, FractionalAssignment, HalfInt};

pub const COLORING_LIMIT: usize = 15;
pub const MATCHING_LIMIT: usize = 16;
pub const FRACTIONAL_LIMIT: usize = 10;

/// Optima of one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleResult {
    pub p_star: usize,
    pub s_star: usize,
    pub frac_opt: HalfInt,
}

/// `p*`, `s*` and the fractional optimum with `b ≡ k`.
pub fn oracle_all(g: &DynamicGraph, k: u32) -> Result<OracleResult> {
    Ok(OracleResult {
        p_star: brute_k_edge_coloring(g, k)?.colored_count(),
        s_star: brute_k_matching(g, k)?.len(),
        frac_opt: brute_fractional(g, &BVector::uniform(g.n(), k))?.value(),
    })
}

fn refuse(m: usize, limit: usize) -> Result<()> {
    if m > limit {
        return Err(Error::OracleTooLarge { m, limit });
    }
    Ok(())
}

/// Edges ordered by decreasing degree sum, ties by edge order.
fn search_order(g: &DynamicGraph) -> Vec<Edge> {
    let mut edges: Vec<Edge> = g.edges().collect();
    edges.sort_by_key(|e| std::cmp::Reverse(g.degree(e.u()) + g.degree(e.v())));
    edges
}

struct ColoringSearch {
    edges: Vec<Edge>,
    k: usize,
    used: Vec<u32>,
    rem_deg: Vec<usize>,
    assign: Vec<Option<usize>>,
    best: usize,
    best_assign: Vec<Option<usize>>,
    cap: usize,
}

impl ColoringSearch {
    fn bound(&self, colored: usize, from: usize) -> usize {
        let remaining = self.edges.len() - from;
        let mut slots = 0;
        for v in 0..self.used.len() {
            let free = self.k - self.used[v].count_ones() as usize;
            slots += free.min(self.rem_deg[v]);
        }
        colored + remaining.min(slots / 2)
    }

    fn go(&mut self, i: usize, colored: usize, max_color: usize) {
        if self.best >= self.cap {
            return;
        }
        if colored > self.best {
            self.best = colored;
            self.best_assign = self.assign.clone();
        }
        if i == self.edges.len() || self.bound(colored, i) <= self.best {
            return;
        }
        let e = self.edges[i];
        let (a, b) = (e.u(), e.v());
        self.rem_deg[a] -= 1;
        self.rem_deg[b] -= 1;
        let both = self.used[a] | self.used[b];
        for c in 0..self.k.min(max_color + 1) {
            if both & (1 << c) == 0 {
                self.used[a] |= 1 << c;
                self.used[b] |= 1 << c;
                self.assign[i] = Some(c);
                self.go(i + 1, colored + 1, max_color.max(c + 1));
                self.used[a] &= !(1 << c);
                self.used[b] &= !(1 << c);
                self.assign[i] = None;
            }
        }
        self.go(i + 1, colored, max_color);
        self.rem_deg[a] += 1;
        self.rem_deg[b] += 1;
    }
}

/// A maximum k-edge coloring by branch and bound (`m ≤ 15`).
pub fn brute_k_edge_coloring(g: &DynamicGraph, k: u32) -> Result<PartialColoring> {
    refuse(g.m(), COLORING_LIMIT)?;
    let edges = search_order(g);
    // More colors than edges never help.
    let k_eff = (k as usize).min(edges.len());
    let n = g.n();
    let cap = (0..n).map(|v| g.degree(v).min(k_eff)).sum::<usize>() / 2;
    let mut s = ColoringSearch {
        k: k_eff,
        used: vec![0; n],
        rem_deg: (0..n).map(|v| g.degree(v)).collect(),
        assign: vec![None; edges.len()],
        best: 0,
        best_assign: vec![None; edges.len()],
        cap: cap.min(k_eff * (n / 2)),
        edges,
    };
    s.go(0, 0, 0);
    let mut f = PartialColoring::new(n, k);
    for (e, c) in s.edges.iter().zip(&s.best_assign) {
        if let Some(c) = c {
            f.assign(*e, Color::new(*c as u32 + 1))?;
        }
    }
    Ok(f)
}

/// A maximum k-matching by include/exclude search (`m ≤ 16`).
pub fn brute_k_matching(g: &DynamicGraph, k: u32) -> Result<BTreeSet<Edge>> {
    refuse(g.m(), MATCHING_LIMIT)?;
    let edges = search_order(g);
    let mut load = vec![0u32; g.n()];
    let mut chosen = Vec::new();
    let mut best = Vec::new();
    fn go(edges: &[Edge], i: usize, k: u32, load: &mut [u32], chosen: &mut Vec<Edge>, best: &mut Vec<Edge>) {
        if chosen.len() > best.len() {
            *best = chosen.clone();
        }
        if i == edges.len() || chosen.len() + (edges.len() - i) <= best.len() {
            return;
        }
        let e = edges[i];
        if load[e.u()] < k && load[e.v()] < k {
            load[e.u()] += 1;
            load[e.v()] += 1;
            chosen.push(e);
            go(edges, i + 1, k, load, chosen, best);
            chosen.pop();
            load[e.u()] -= 1;
            load[e.v()] -= 1;
        }
        go(edges, i + 1, k, load, chosen, best);
    }
    go(&edges, 0, k, &mut load, &mut chosen, &mut best);
    Ok(best.into_iter().collect())
}

/// An optimal fractional b-matching over half-integral vectors (`m ≤ 10`).
pub fn brute_fractional(g: &DynamicGraph, b: &BVector) -> Result<FractionalAssignment> {
    refuse(g.m(), FRACTIONAL_LIMIT)?;
    if b.len() != g.n() {
        return Err(Error::InvalidParameter("capacity vector length mismatch".into()));
    }
    let edges: Vec<Edge> = g.edges().collect();
    let cap: Vec<u64> = b.as_slice().iter().map(|&c| 2 * c as u64).collect();
    let mut load = vec![0u64; g.n()];
    let mut cur = vec![0u8; edges.len()];
    let mut best = (0u64, cur.clone());
    #[allow(clippy::too_many_arguments)]
    fn go(
        edges: &[Edge],
        i: usize,
        cap: &[u64],
        load: &mut [u64],
        cur: &mut [u8],
        total: u64,
        best: &mut (u64, Vec<u8>),
    ) {
        if total > best.0 {
            *best = (total, cur.to_vec());
        }
        if i == edges.len() || total + 2 * (edges.len() - i) as u64 <= best.0 {
            return;
        }
        let e = edges[i];
        for t in [2u8, 1] {
            let t64 = t as u64;
            if load[e.u()] + t64 <= cap[e.u()] && load[e.v()] + t64 <= cap[e.v()] {
                load[e.u()] += t64;
                load[e.v()] += t64;
                cur[i] = t;
                go(edges, i + 1, cap, load, cur, total + t64, best);
                cur[i] = 0;
                load[e.u()] -= t64;
                load[e.v()] -= t64;
            }
        }
        go(edges, i + 1, cap, load, cur, total, best);
    }
    go(&edges, 0, &cap, &mut load, &mut cur, 0, &mut best);
    let mut x = FractionalAssignment::new(g.n());
    for (e, &t) in edges.iter().zip(&best.1) {
        if t > 0 {
            x.set_twice(*e, t);
        }
    }
    Ok(x)
}

/// Every connected simple graph on exactly `n` vertices, one per
/// isomorphism class (`n ≤ 7`), with edges on vertices `0..n`.
pub fn connected_graphs(n: usize) -> Vec<DynamicGraph> {
    assert!(n <= 7, "enumeration is exhaustive over all labelings");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let perms = permutations(n);
    let index = |a: usize, b: usize| -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        pairs.iter().position(|&p| p == (a, b)).unwrap()
    };
    // Image of pair j under permutation p.
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(a, b)| index(p[a], p[b])).collect())
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        if !mask_connected(n, &pairs, mask) {
            continue;
        }
        let canon = images
            .iter()
            .map(|img| {
                let mut m = 0u64;
                for (j, &t) in img.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        m |= 1 << t;
                    }
                }
                m
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            let edges = (0..pairs.len())
                .filter(|&j| mask >> j & 1 == 1)
                .map(|j| edge(pairs[j].0, pairs[j].1));
            out.push(DynamicGraph::from_edges(n, edges).expect("pairs are valid edges"));
        }
    }
    out
}

fn mask_connected(n: usize, pairs: &[(usize, usize)], mask: u64) -> bool {
    if n <= 1 {
        return true;
    }
    let mut reached = 1u32;
    loop {
        let before = reached;
        for (j, &(a, b)) in pairs.iter().enumerate() {
            if mask >> j & 1 == 1 && (reached >> a & 1 == 1 || reached >> b & 1 == 1) {
                reached |= (1 << a) | (1 << b);
            }
        }
        if reached == before {
            return reached.count_ones() as usize == n;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
