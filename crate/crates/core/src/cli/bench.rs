//! Fold-count sweeps timing both engines on one seeded dataset.

use std::fmt;
use std::hint::black_box;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use crate::baseline::baseline_fold_products;
use crate::cli::gen::{random_dataset, random_partition};
use crate::data::{DatasetPair, PreprocessConfig};
use crate::error::{Error, Result};
use crate::fast::run_all_folds;
use crate::partition::Partitioning;

pub const MIN_REPETITIONS: usize = 3;
pub const CSV_HEADER: &str = "engine,config,n,k,m,p,wall_time,reps";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Baseline,
    Fast,
}

impl Engine {
    pub fn run(
        self,
        data: &DatasetPair,
        part: &Partitioning,
        cfg: PreprocessConfig,
    ) -> Result<Vec<crate::data::FoldResult>> {
        match self {
            Engine::Baseline => baseline_fold_products(data, part, cfg),
            Engine::Fast => run_all_folds(data, part, cfg),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Baseline => "baseline",
            Engine::Fast => "fast",
        })
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(Engine::Baseline),
            "fast" => Ok(Engine::Fast),
            other => Err(Error::Argument(format!("unknown engine {other:?}"))),
        }
    }
}

/// One timed (engine, config, P) cell. `wall_time` is the fastest repetition, in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub engine: Engine,
    pub config: PreprocessConfig,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub p: usize,
    pub wall_time: f64,
    pub repetitions: usize,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.6e},{}",
            self.engine, self.config, self.n, self.k, self.m, self.p, self.wall_time, self.repetitions
        )
    }
}

#[derive(Debug, Clone)]
pub struct BenchPlan {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub p_list: Vec<usize>,
    pub configs: Vec<PreprocessConfig>,
    pub engines: Vec<Engine>,
    pub reps: usize,
    pub seed: u64,
}

impl BenchPlan {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.k == 0 || self.m == 0 {
            return Err(Error::Argument("dimensions must be positive and n >= 2".into()));
        }
        if self.reps < MIN_REPETITIONS {
            return Err(Error::Argument(format!(
                "at least {MIN_REPETITIONS} repetitions are required, got {}",
                self.reps
            )));
        }
        if let Some(&p) = self.p_list.iter().find(|&&p| p < 2 || p > self.n) {
            return Err(Error::Argument(format!("fold count {p} outside 2..={}", self.n)));
        }
        Ok(())
    }
}

/// Minimum wall time of `reps` runs.
pub fn time_engine(
    engine: Engine,
    data: &DatasetPair,
    part: &Partitioning,
    cfg: PreprocessConfig,
    reps: usize,
) -> Result<f64> {
    let mut best = f64::INFINITY;
    for _ in 0..reps {
        let start = Instant::now();
        let out = engine.run(data, part, cfg)?;
        let elapsed = start.elapsed().as_secs_f64();
        black_box(out);
        best = best.min(elapsed);
    }
    Ok(best)
}

/// Generates the dataset once and times every (p, config, engine) cell in that order.
pub fn run_bench(plan: &BenchPlan, mut progress: impl FnMut(&BenchRecord)) -> Result<Vec<BenchRecord>> {
    plan.validate()?;
    let data = random_dataset(plan.n, plan.k, plan.m, plan.seed)?;
    let mut records = Vec::new();
    for &p in &plan.p_list {
        let part = random_partition(plan.n, p, plan.seed)?;
        for &cfg in &plan.configs {
            for &engine in &plan.engines {
                let wall_time = time_engine(engine, &data, &part, cfg, plan.reps)?;
                let rec = BenchRecord {
                    engine,
                    config: cfg,
                    n: plan.n,
                    k: plan.k,
                    m: plan.m,
                    p,
                    wall_time,
                    repetitions: plan.reps,
                };
                progress(&rec);
                records.push(rec);
            }
        }
    }
    Ok(records)
}

pub fn write_bench_csv(mut out: impl Write, records: &[BenchRecord]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}
