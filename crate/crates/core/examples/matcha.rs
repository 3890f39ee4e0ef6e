//! The sparsify-and-round pipeline on general and bipartite streams.

use kec::bench::{generate_stream, GenConfig};
use kec::graph::Bipartition;
use kec::sparsifier::default_d;
use kec::{Pipeline, Variant};

fn drive(variant: Variant, bipartite: bool) -> kec::Result<()> {
    let (k, eps) = (2, 0.25);
    let stream = generate_stream(&GenConfig { k, bipartite, ..GenConfig::new(60, 3000, 0.35, 21) })?;
    let sides = bipartite.then(|| Bipartition::split_at(stream.n, stream.n / 2));
    let mut p = Pipeline::new(variant, stream.n, k, eps, 5, sides)?;
    let mut h_max = 0;
    for ev in &stream.events {
        p.apply(ev)?;
        if p.recolored() {
            h_max = h_max.max(p.last_recolor().sparsifier_size.unwrap_or(0));
        }
    }
    p.check_invariants()?;
    let source = if variant.is_fractional() {
        format!("d={:.1}, sparsifier up to {h_max} edges", default_d(k, eps)?)
    } else {
        "maximal b-matching".into()
    };
    println!(
        "{variant:<10} {source}: {} recolors, {} of {} edges colored",
        p.recolors(),
        p.current_coloring().colored_count(),
        p.graph().m()
    );
    Ok(())
}

fn main() -> kec::Result<()> {
    drive(Variant::MatchA, false)?;
    drive(Variant::BipartiteA, true)?;
    drive(Variant::BipartiteO, true)
}
