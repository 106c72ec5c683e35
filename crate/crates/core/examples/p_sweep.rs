//! Wall time of both engines as the fold count grows.
//!
//! cargo run --release --example p_sweep -- [N K]

use foldprod::cli::bench::{run_bench, write_bench_csv, BenchPlan, Engine};
use foldprod::PreprocessConfig;

fn main() -> foldprod::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let (n, k) = match args[..] {
        [n, k] => (n, k),
        _ => (4000, 50),
    };
    let plan = BenchPlan {
        n,
        k,
        m: 5,
        p_list: vec![5, 20, 100, 400],
        configs: vec![PreprocessConfig::CENTER_SCALE],
        engines: vec![Engine::Baseline, Engine::Fast],
        reps: 3,
        seed: 42,
    };
    let records = run_bench(&plan, |r| eprintln!("{} P={} {:.4}s", r.engine, r.p, r.wall_time))?;
    write_bench_csv(std::io::stdout().lock(), &records)?;
    Ok(())
}
