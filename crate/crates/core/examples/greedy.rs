//! Greedy fully dynamic k-edge coloring on a random stream, compared with the
//! exact optimum while the graph stays small.

use kec::bench::{generate_stream, GenConfig};
use kec::oracle::{brute_k_edge_coloring, COLORING_LIMIT};
use kec::GreedyState;

fn main() -> kec::Result<()> {
    let k = 2;
    let stream = generate_stream(&GenConfig { k, max_edges: Some(12), ..GenConfig::new(8, 40, 0.35, 11) })?;
    let mut st = GreedyState::new(stream.n, k);
    let mut worst: f64 = 1.0;
    for (i, ev) in stream.events.iter().enumerate() {
        st.apply(ev)?;
        let p = st.current_coloring().colored_count();
        let c = st.counters();
        let mut line = format!("{:>3} {ev:<8} m={:<3} colored={p:<3} probes={}", i + 1, st.graph().m(), c.insert_probes);
        if st.graph().m() <= COLORING_LIMIT {
            let best = brute_k_edge_coloring(st.graph(), k)?.colored_count();
            if p > 0 {
                worst = worst.max(best as f64 / p as f64);
            }
            line.push_str(&format!(" p*={best}"));
        }
        println!("{line}");
    }
    st.check_invariants()?;
    println!("worst ratio {worst:.3} (bound {:.3})", 1.0 + 2.0 * 3f64.sqrt() / 3.0);
    Ok(())
}
