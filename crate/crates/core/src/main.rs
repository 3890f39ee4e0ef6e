use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use kec::bench::{self, Algo, GenConfig, RunConfig, VerifyOptions};
use kec::graph::{parse_stream, Stream};

#[derive(Parser)]
#[command(name = "kec", version, about = "Dynamic k-edge coloring benchmarks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Replay a stream and write one JSON metrics record per update.
    Run(RunArgs),
    /// Print a random update stream.
    Gen(GenArgs),
    /// Replay a stream checking every invariant after every update.
    Verify(RunArgs),
    /// Print exact optima after every update of a small stream.
    Oracle {
        #[arg(long)]
        stream: PathBuf,
        /// Defaults to the stream header's k.
        #[arg(long)]
        k: Option<u32>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// greedy, matcho, matcha, matcho-bip or matcha-bip.
    #[arg(long)]
    algo: Algo,
    /// Defaults to the stream header's k.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record the exact optimum and ratio while the graph is small enough.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    stream: PathBuf,
    /// Defaults to stdout.
    #[arg(long)]
    metrics: Option<PathBuf>,
    /// Write elapsed_ns as 0.
    #[arg(long)]
    no_timing: bool,
    #[arg(long, hide = true)]
    corrupt_at: Option<usize>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    steps: usize,
    #[arg(long, default_value_t = 0.3)]
    p_delete: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Header k.
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Only edges between the halves 0..n/2 and n/2..n.
    #[arg(long)]
    bipartite: bool,
    #[arg(long)]
    max_edges: Option<usize>,
}

fn load(path: &PathBuf) -> Result<Stream, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_stream(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run_config(a: &RunArgs, stream: &Stream) -> RunConfig {
    RunConfig {
        algo: a.algo,
        k: a.k.unwrap_or(stream.k),
        eps: a.epsilon,
        seed: a.seed,
        oracle: a.oracle,
        timing: !a.no_timing,
    }
}

fn real_main(cli: Cli) -> Result<(), String> {
    match cli.cmd {
        Cmd::Run(a) => {
            let stream = load(&a.stream)?;
            let cfg = run_config(&a, &stream);
            let out: Box<dyn Write> = match &a.metrics {
                Some(p) => Box::new(fs::File::create(p).map_err(|e| format!("{}: {e}", p.display()))?),
                None => Box::new(io::stdout().lock()),
            };
            let n = bench::run_to_writer(&cfg, &stream, BufWriter::new(out)).map_err(|e| e.to_string())?;
            info!("{} records written", n);
        }
        Cmd::Gen(a) => {
            let cfg = GenConfig {
                n: a.n,
                steps: a.steps,
                p_delete: a.p_delete,
                seed: a.seed,
                k: a.k,
                bipartite: a.bipartite,
                max_edges: a.max_edges,
            };
            let stream = bench::generate_stream(&cfg).map_err(|e| e.to_string())?;
            print!("{stream}");
        }
        Cmd::Verify(a) => {
            let stream = load(&a.stream)?;
            let cfg = run_config(&a, &stream);
            let opts = VerifyOptions { corrupt_at: a.corrupt_at };
            let s = bench::verify(&cfg, &stream, opts).map_err(|f| format!("verification failed at {f}"))?;
            println!("ok: {} steps, {} recolors", s.steps, s.recolors);
        }
        Cmd::Oracle { stream, k } => {
            let stream = load(&stream)?;
            let trace = bench::oracle_trace(&stream, k.unwrap_or(stream.k)).map_err(|e| e.to_string())?;
            let mut out = BufWriter::new(io::stdout().lock());
            for r in trace {
                let line = serde_json::to_string(&r).map_err(|e| e.to_string())?;
                writeln!(out, "{line}").map_err(|e| e.to_string())?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("KEC_LOG", "warn")).init();
    match real_main(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
