//! Exact optima of small graphs: k-edge coloring, k-matching and the
//! fractional relaxation.

use kec::oracle::{connected_graphs, oracle_all};

fn main() -> kec::Result<()> {
    for n in 2..=5 {
        let graphs = connected_graphs(n);
        println!("n = {n}: {} connected graphs", graphs.len());
        for g in graphs.iter().filter(|g| g.m() == n) {
            let edges: Vec<String> = g.edges().map(|e| e.to_string()).collect();
            for k in 1..=2 {
                let r = oracle_all(g, k)?;
                println!(
                    "  k={k} {:<40} p*={} s*={} frac={}",
                    edges.join(" "),
                    r.p_star,
                    r.s_star,
                    r.frac_opt
                );
            }
        }
    }
    Ok(())
}
