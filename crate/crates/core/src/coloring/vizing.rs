use super::{Color, PartialColoring};
use crate::graph::{edge, DynamicGraph, VertexId};

/// Colors every edge of `g` with at most `Δ(g) + 1` colors using the
/// fan-rotation and alternating-path recoloring of Misra and Gries.
///
/// The returned coloring has palette exactly `Δ(g) + 1`.
pub fn vizing_color(g: &DynamicGraph) -> PartialColoring {
    let palette = g.max_degree() as u32 + 1;
    let mut f = PartialColoring::new(g.n(), palette);
    for e in g.edges() {
        color_edge(&mut f, e.u(), e.v());
    }
    f
}

fn color_edge(f: &mut PartialColoring, x: VertexId, y: VertexId) {
    let fan = maximal_fan(f, x, y);
    let c = f.smallest_free(x).expect("Δ+1 colors leave one free at x");
    let last = *fan.last().expect("fan is never empty");
    let d = f.smallest_free(last).expect("Δ+1 colors leave one free at the fan tip");
    if c != d {
        // Path starts with the d-edge at x; afterwards d is free at x.
        f.invert_path(x, d, c);
    }
    let w = (0..fan.len())
        .find(|&j| f.is_free(fan[j], d) && is_fan(f, x, &fan[..=j]))
        .expect("some fan prefix ends at a vertex where d is free");
    rotate(f, x, &fan[..=w]);
    f.assign(edge(x, fan[w]), d)
        .expect("d is free at both x and the rotated fan tip");
}

/// Fan `[y, f1, f2, ...]` around `x`: `(x, y)` is uncolored and each
/// `(x, f_{i+1})` carries a color free at `f_i`.
fn maximal_fan(f: &PartialColoring, x: VertexId, y: VertexId) -> Vec<VertexId> {
    let mut fan = vec![y];
    loop {
        let tip = *fan.last().unwrap();
        let next = f
            .at[x]
            .iter()
            .find(|&(&col, &z)| f.is_free(tip, col) && !fan.contains(&z))
            .map(|(_, &z)| z);
        match next {
            Some(z) => fan.push(z),
            None => return fan,
        }
    }
}

fn is_fan(f: &PartialColoring, x: VertexId, fan: &[VertexId]) -> bool {
    if f.color(edge(x, fan[0])).is_some() {
        return false;
    }
    fan.windows(2).all(|w| match f.color(edge(x, w[1])) {
        Some(col) => f.is_free(w[0], col),
        None => false,
    })
}

/// Shifts each fan edge's color one step towards the start of the fan,
/// leaving the last fan edge uncolored.
fn rotate(f: &mut PartialColoring, x: VertexId, fan: &[VertexId]) {
    let shifted: Vec<Color> = fan[1..]
        .iter()
        .map(|&z| f.color(edge(x, z)).expect("fan edges past the first are colored"))
        .collect();
    for &z in &fan[1..] {
        f.unassign(edge(x, z));
    }
    for (i, &col) in shifted.iter().enumerate() {
        f.assign(edge(x, fan[i]), col)
            .expect("fan colors are free one step earlier");
    }
}
