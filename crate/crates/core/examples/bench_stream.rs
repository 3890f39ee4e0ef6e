//! Generate a stream, round trip it through text, then benchmark and verify
//! every algorithm on it.

use kec::bench::{generate_stream, run, verify, Algo, GenConfig, RunConfig, VerifyOptions};
use kec::parse_stream;

fn main() -> kec::Result<()> {
    let stream = generate_stream(&GenConfig { k: 2, bipartite: true, ..GenConfig::new(30, 1500, 0.4, 99) })?;
    let stream = parse_stream(&stream.to_string())?;
    for algo in Algo::ALL {
        let cfg = RunConfig { seed: 4, ..RunConfig::new(algo, stream.k) };
        let recs = run(&cfg, &stream)?;
        let colored: usize = recs.iter().map(|r| r.colored).sum();
        let micros: u64 = recs.iter().map(|r| r.elapsed_ns).sum::<u64>() / 1000;
        let summary = verify(&cfg, &stream, VerifyOptions::default()).map_err(|f| f.error)?;
        println!(
            "{algo:<10} mean colored {:>6.2}  recolors {:>4}  {micros:>6} us",
            colored as f64 / recs.len() as f64,
            summary.recolors
        );
    }
    Ok(())
}
