//! Command-line front end: `verify`, `bench`, `run` and `leakage`.
//!
//! Each command writes its report to the supplied writer and returns the
//! process exit status; errors carry their own status via
//! [`Error::exit_code`]:
//!
//! | code | meaning                         |
//! |------|---------------------------------|
//! | 0    | success                         |
//! | 1    | I/O or internal failure         |
//! | 2    | parse / argument error          |
//! | 3    | dimension mismatch              |
//! | 4    | invalid partitioning            |
//! | 5    | partitioning not scalable       |
//! | 6    | engines disagree beyond `--tol` |

pub mod bench;
pub mod gen;
pub mod io;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::baseline::baseline_fold_products_with;
use crate::combos::enumerate_configs;
use crate::data::{DatasetPair, FoldResult, PreprocessConfig};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fast::run_all_folds_with;
use crate::leakage::{canonical_example, centered_example, leakage_divergence, lindgren_centered_xtx, FoldSizeTerm};
use crate::matrix::max_relative_difference;
use crate::partition::{check_scalable, Partitioning};
use bench::{run_bench, write_bench_csv, BenchPlan, Engine};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 6;

#[derive(Debug, Parser)]
#[command(
    name = "foldprod",
    version,
    about = "Per-fold XᵀX / XᵀY with training-partition centering and scaling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the fast engine against the baseline for every configuration.
    Verify(VerifyArgs),
    /// Time both engines over a sweep of fold counts and write CSV.
    Bench(BenchArgs),
    /// Write per-fold products and statistics to a directory.
    Run(RunArgs),
    /// Compare Lindgren-style centering with proper training centering.
    Leakage(LeakageArgs),
}

fn parse_config(s: &str) -> std::result::Result<PreprocessConfig, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_engine(s: &str) -> std::result::Result<Engine, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Feature matrix CSV (N×K).
    #[arg(required_unless_present = "random")]
    pub x_file: Option<PathBuf>,
    /// Response matrix CSV (N×M).
    #[arg(required_unless_present = "random")]
    pub y_file: Option<PathBuf>,
    /// Fold labels, one per line.
    #[arg(required_unless_present = "random")]
    pub partition_file: Option<PathBuf>,
    /// Generate data instead of reading files.
    #[arg(long, num_args = 5, value_names = ["N", "K", "M", "P", "SEED"], conflicts_with_all = ["x_file", "y_file", "partition_file"])]
    pub random: Option<Vec<u64>>,
    /// Maximum allowed relative entrywise difference.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Restrict to these configurations (repeatable); default is all 16.
    #[arg(long = "config", value_parser = parse_config)]
    pub configs: Vec<PreprocessConfig>,
    /// Worker threads for fold evaluation.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 20_000)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub k: usize,
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    /// Comma-separated fold counts.
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    pub p_list: Vec<usize>,
    #[arg(long = "config", value_parser = parse_config, default_value = "center+scale")]
    pub configs: Vec<PreprocessConfig>,
    #[arg(long, value_delimiter = ',', value_parser = parse_engine, default_value = "baseline,fast")]
    pub engines: Vec<Engine>,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub x_file: PathBuf,
    pub y_file: PathBuf,
    pub partition_file: PathBuf,
    #[arg(long, value_parser = parse_config, default_value = "none")]
    pub config: PreprocessConfig,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long, value_parser = parse_engine, default_value = "fast")]
    pub engine: Engine,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct LeakageArgs {
    /// Seed for the random-data section.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 40)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    #[arg(long, default_value_t = 4)]
    pub p: usize,
    /// Use this feature matrix instead of random data.
    #[arg(long, requires = "partition_file")]
    pub x_file: Option<PathBuf>,
    #[arg(long, requires = "x_file")]
    pub partition_file: Option<PathBuf>,
    /// Use |V_p| instead of N/P in the Lindgren correction term.
    #[arg(long)]
    pub validation_size_term: bool,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
        Command::Run(a) => cmd_run(&a, out),
        Command::Leakage(a) => cmd_leakage(&a, out),
    }
}

/// Reads X, Y and the partition file, checking shapes against each other.
pub fn load_inputs(x_file: &Path, y_file: &Path, partition_file: &Path) -> Result<(DatasetPair, Partitioning)> {
    let x = io::read_matrix_csv(x_file)?;
    let y = io::read_matrix_csv(y_file)?;
    let data = DatasetPair::new(x, y)?;
    let labels = io::read_partition(partition_file)?;
    if labels.len() != data.n_rows() {
        return Err(Error::Dimension(format!(
            "partition file has {} labels but the data has {} rows",
            labels.len(),
            data.n_rows()
        )));
    }
    let part = Partitioning::from_labels(&labels)?;
    Ok((data, part))
}

fn max_fold_difference(a: &[FoldResult], b: &[FoldResult]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(f, g)| {
            max_relative_difference(f.xtx_t.view(), g.xtx_t.view())
                .max(max_relative_difference(f.xty_t.view(), g.xty_t.view()))
        })
        .fold(0.0, f64::max)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let (data, part) = match &args.random {
        Some(r) => {
            let [n, k, m, p, seed] = r[..] else {
                return Err(Error::Argument("--random takes N K M P SEED".into()));
            };
            let (n, k, m, p) = (n as usize, k as usize, m as usize, p as usize);
            (gen::random_dataset(n, k, m, seed)?, gen::random_partition(n, p, seed)?)
        }
        None => {
            let path = |p: &Option<PathBuf>| p.clone().ok_or_else(|| Error::Argument("missing input file".into()));
            load_inputs(&path(&args.x_file)?, &path(&args.y_file)?, &path(&args.partition_file)?)?
        }
    };
    let configs = if args.configs.is_empty() {
        enumerate_configs()
    } else {
        args.configs.clone()
    };
    if configs.iter().any(|c| c.any_scale()) {
        check_scalable(&part).map_err(Error::NotScalable)?;
    }
    let exec = Execution::from_thread_count(args.threads);

    writeln!(
        out,
        "verify: n={} k={} m={} p={} tol={:e}",
        data.n_rows(),
        data.n_features(),
        data.n_responses(),
        part.n_folds(),
        args.tol
    )?;
    writeln!(out, "{:<14} {:>14}  status", "config", "max_rel_diff")?;
    let mut all_ok = true;
    for cfg in configs {
        let fast = run_all_folds_with(&data, &part, cfg, exec)?;
        let base = baseline_fold_products_with(&data, &part, cfg, exec)?;
        let diff = max_fold_difference(&fast, &base);
        let ok = diff <= args.tol;
        all_ok &= ok;
        writeln!(
            out,
            "{:<14} {:>14.6e}  {}",
            cfg.to_string(),
            diff,
            if ok { "ok" } else { "FAIL" }
        )?;
    }
    writeln!(out, "overall: {}", if all_ok { "pass" } else { "fail" })?;
    Ok(if all_ok { EXIT_OK } else { EXIT_TOLERANCE })
}

pub fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<i32> {
    let (data, part) = load_inputs(&args.x_file, &args.y_file, &args.partition_file)?;
    let exec = Execution::from_thread_count(args.threads);
    let folds = match args.engine {
        Engine::Fast => run_all_folds_with(&data, &part, args.config, exec)?,
        Engine::Baseline => baseline_fold_products_with(&data, &part, args.config, exec)?,
    };
    write_fold_results(&args.out_dir, &folds)?;
    writeln!(
        out,
        "wrote {} folds ({} engine, config {}) to {}",
        folds.len(),
        args.engine,
        args.config,
        args.out_dir.display()
    )?;
    Ok(EXIT_OK)
}

/// Writes `fold_<p>_xtx.csv`, `fold_<p>_xty.csv` and `stats.csv` into `dir`,
/// creating it if needed.
pub fn write_fold_results(dir: &Path, folds: &[FoldResult]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut stats = String::from("fold,statistic,values\n");
    for f in folds {
        io::write_matrix_csv(&dir.join(format!("fold_{}_xtx.csv", f.fold_id)), &f.xtx_t)?;
        io::write_matrix_csv(&dir.join(format!("fold_{}_xty.csv", f.fold_id)), &f.xty_t)?;
        stats.push_str(&format!(
            "{},n_train,{}\n{},n_val,{}\n",
            f.fold_id, f.stats.n_train, f.fold_id, f.stats.n_val
        ));
        for (name, v) in [
            ("mean_x", &f.stats.mean_x_t),
            ("mean_y", &f.stats.mean_y_t),
            ("std_x", &f.stats.std_x_t),
            ("std_y", &f.stats.std_y_t),
        ] {
            if let Some(v) = v {
                stats.push_str(&io::stats_line(f.fold_id, name, v));
                stats.push('\n');
            }
        }
    }
    fs::write(dir.join("stats.csv"), stats)?;
    Ok(())
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let plan = BenchPlan {
        n: args.n,
        k: args.k,
        m: args.m,
        p_list: args.p_list.clone(),
        configs: args.configs.clone(),
        engines: args.engines.clone(),
        reps: args.reps,
        seed: args.seed,
    };
    let records = run_bench(&plan, |r| {
        eprintln!(
            "{:<8} {:<12} p={:<6} {:.4}s",
            r.engine.to_string(),
            r.config.to_string(),
            r.p,
            r.wall_time
        )
    })?;
    match &args.out {
        Some(path) => {
            write_bench_csv(fs::File::create(path)?, &records)?;
            writeln!(out, "wrote {} records to {}", records.len(), path.display())?;
        }
        None => write_bench_csv(out, &records)?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_leakage(args: &LeakageArgs, out: &mut dyn Write) -> Result<i32> {
    let term = if args.validation_size_term {
        FoldSizeTerm::ValidationSize
    } else {
        FoldSizeTerm::FoldCount
    };
    let center_x = PreprocessConfig {
        center_x: true,
        ..Default::default()
    };

    let (data, part) = canonical_example();
    let lindgren = lindgren_centered_xtx(&data, &part, 2, FoldSizeTerm::FoldCount)?[[0, 0]];
    let proper = crate::baseline::baseline_fold_products(&data, &part, center_x)?[1].xtx_t[[0, 0]];
    writeln!(
        out,
        "canonical example: X = [-1, 1, 4], labels = [1, 1, 2], fold 2 (training rows 1, 2)"
    )?;
    writeln!(out, "  training rows are centered, the dataset mean is 4/3")?;
    writeln!(out, "  lindgren centered X_T'X_T: {lindgren}")?;
    writeln!(out, "  proper centered X_T'X_T:   {proper}")?;
    writeln!(out, "  divergence:                {}", (lindgren - proper).abs())?;
    writeln!(out)?;

    let (data, part) = centered_example();
    let rep = leakage_divergence(&data, &part, term)?;
    writeln!(out, "mean-zero example (dataset and training partitions centered):")?;
    writeln!(out, "  max divergence: {:e}", rep.max())?;
    writeln!(out)?;

    let (data, part, label) = match (&args.x_file, &args.partition_file) {
        (Some(xf), Some(pf)) => {
            let x = io::read_matrix_csv(xf)?;
            let data = DatasetPair::new(x.clone(), x)?;
            let labels = io::read_partition(pf)?;
            if labels.len() != data.n_rows() {
                return Err(Error::Dimension(format!(
                    "partition file has {} labels but the data has {} rows",
                    labels.len(),
                    data.n_rows()
                )));
            }
            (data, Partitioning::from_labels(&labels)?, format!("{}", xf.display()))
        }
        _ => (
            gen::random_dataset(args.n, args.k, 1, args.seed)?,
            gen::random_partition(args.n, args.p, args.seed)?,
            format!(
                "seeded random data (n={}, k={}, p={}, seed={})",
                args.n, args.k, args.p, args.seed
            ),
        ),
    };
    let rep = leakage_divergence(&data, &part, term)?;
    writeln!(out, "{label}:")?;
    write!(out, "{rep}")?;
    writeln!(out, "  min over folds: {:e}", rep.min())?;
    Ok(EXIT_OK)
}
