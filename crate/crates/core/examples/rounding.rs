//! Exact half-integral b-matching on a small graph, rounded to an integral
//! b-matching through an Euler partition of the half edges.

use kec::graph::{edge, DynamicGraph};
use kec::polytope::{euler_partition, half_integral_optimum, round_half_integral, BVector};

fn main() -> kec::Result<()> {
    // Two triangles joined by a path: odd cycles force half values.
    let g = DynamicGraph::from_edges(
        7,
        [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 6)].map(|(a, b)| edge(a, b)),
    )?;
    let b = BVector::uniform(7, 1);
    let x = half_integral_optimum(&g, &b)?;
    println!("optimum value {}", x.value());
    for (e, t) in x.iter() {
        println!("  x{e} = {}", t as f64 / 2.0);
    }
    let halves = DynamicGraph::from_edges(7, x.half_edges())?;
    let parts = euler_partition(&halves);
    println!("half edges split into {} trails and {} circuits", parts.trails.len(), parts.circuits.len());
    let y = round_half_integral(&x, &b)?;
    let kept: Vec<String> = y.integral_edges().iter().map(|e| e.to_string()).collect();
    println!("rounded value {}: {}", y.value(), kept.join(" "));
    Ok(())
}
