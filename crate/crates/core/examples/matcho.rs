//! The matching-based pipeline: a maximal k-matching is colored with Vizing's
//! algorithm and trimmed to k colors, recomputed on an amortized schedule.

use kec::bench::{generate_stream, GenConfig};
use kec::{Pipeline, Variant};

fn main() -> kec::Result<()> {
    let (k, eps) = (3, 0.2);
    let stream = generate_stream(&GenConfig { k, ..GenConfig::new(40, 2000, 0.3, 7) })?;
    let mut p = Pipeline::new(Variant::MatchO, stream.n, k, eps, 0, None)?;
    for (i, ev) in stream.events.iter().enumerate() {
        p.apply(ev)?;
        p.check_invariants()?;
        if p.recolored() && p.recolors() % 25 == 0 {
            let r = p.last_recolor();
            println!(
                "step {:>4}: recolor #{:<3} matcher {:>3} edges, kept {:>3}, next in {} updates",
                i + 1,
                p.recolors(),
                r.source,
                r.kept,
                p.budget().remaining
            );
        }
    }
    println!(
        "{} updates, {} recolors, {} of {} edges colored",
        stream.events.len(),
        p.recolors(),
        p.current_coloring().colored_count(),
        p.graph().m()
    );
    Ok(())
}
