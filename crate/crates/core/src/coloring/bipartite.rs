use super::PartialColoring;
use crate::error::Result;
use crate::graph::{Bipartition, DynamicGraph};

/// Colors every edge of a bipartite graph with `Δ(g)` colors.
///
/// Each edge `(u, v)` takes a color `a` free at `u`. If `a` is taken at `v`,
/// the `a`/`b` alternating path from `v` (with `b` free at `v`) is flipped
/// first; in a bipartite graph that path never reaches `u`.
pub fn bipartite_color(g: &DynamicGraph, sides: &Bipartition) -> Result<PartialColoring> {
    sides.check(g)?;
    let mut f = PartialColoring::new(g.n(), g.max_degree() as u32);
    for e in g.edges() {
        let (u, v) = (e.u(), e.v());
        let a = f.smallest_free(u).expect("uncolored edge leaves a color free at u");
        if !f.is_free(v, a) {
            let b = f.smallest_free(v).expect("uncolored edge leaves a color free at v");
            f.invert_path(v, a, b);
        }
        f.assign(e, a)?;
    }
    Ok(f)
}
