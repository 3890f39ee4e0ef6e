//! Bucketing fractional values and sampling a sparse support from them.

use kec::graph::{edge, Edge};
use kec::sparsifier::{bucket_count, default_d, SparsifierState};

fn main() -> kec::Result<()> {
    let (n, k, eps) = (200, 2, 0.25);
    let mut s = SparsifierState::new(n, k, eps, 3)?;
    println!("{} buckets for n = {n}", bucket_count(n, eps));
    // Every vertex gets load k = 2 spread evenly over its edges.
    let x = 2.0 / (n - 1) as f64;
    let edges: Vec<Edge> = (0..n).flat_map(|a| (a + 1..n).map(move |b| edge(a, b))).collect();
    for &e in &edges {
        s.apply_value_change(e, 0.0, x)?;
    }
    let i = s.bucket_of(edges[0]).expect("bucketed");
    println!("x = {x:.4} lands in bucket {i} with palette {}", s.bucket(i).unwrap().palette());
    let floor = default_d(k, eps)?;
    for d in [floor, 1.5 * floor, 3.0 * floor] {
        let h = s.request(d)?;
        println!("d = {d:>7.2}: keep probability {:.3}, sampled {} of {} edges", s.keep_probability(i, d)?, h.len(), edges.len());
    }
    s.check_invariants()?;
    Ok(())
}
