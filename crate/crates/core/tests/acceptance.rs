//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Every expected value is computed here, independently of the library's
//! internals (direct loops over extracted training rows, hand-derived
//! constants), and compared with what the engines produce.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use foldprod::baseline::{baseline_fold, baseline_fold_products, baseline_fold_products_with};
use foldprod::cli::bench::{time_engine, Engine, MIN_REPETITIONS};
use foldprod::cli::gen::{random_dataset, random_partition, random_unbalanced_partition};
use foldprod::cli::io::{write_matrix_csv, write_partition};
use foldprod::cli::{cmd_run, cmd_verify, RunArgs, VerifyArgs};
use foldprod::combos::{classify_combos, enumerate_configs};
use foldprod::fast::{fold_products, precompute_global, run_all_folds, run_all_folds_with};
use foldprod::leakage::{canonical_example, centered_example, leakage_divergence, lindgren_centered_xtx, FoldSizeTerm};
use foldprod::matrix::{max_abs_difference, max_relative_difference, Matrix};
use foldprod::partition::check_scalable;
use foldprod::{DatasetPair, Execution, FoldResult, Partitioning, PreprocessConfig};
use ndarray::array;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn fold_diff(a: &[FoldResult], b: &[FoldResult]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(f, g)| {
            assert_eq!(f.fold_id, g.fold_id);
            max_relative_difference(f.xtx_t.view(), g.xtx_t.view())
                .max(max_relative_difference(f.xty_t.view(), g.xty_t.view()))
        })
        .fold(0.0, f64::max)
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let data = random_dataset(200, 30, 5, 2024).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut cells = 0;
    for p in [2, 5, 10, 200] {
        let part = random_partition(200, p, 2024 + p as u64).map_err(|e| e.to_string())?;
        for cfg in enumerate_configs() {
            let fast = run_all_folds(&data, &part, cfg).map_err(|e| e.to_string())?;
            let base = baseline_fold_products(&data, &part, cfg).map_err(|e| e.to_string())?;
            check(
                fast.len() == p && base.len() == p,
                format!("P={p} {cfg}: wrong fold count"),
            )?;
            let d = fold_diff(&fast, &base);
            check(d <= 1e-8, format!("P={p} {cfg}: relative difference {d:e} > 1e-8"))?;
            worst = worst.max(d);
            cells += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 30.0, format!("took {secs:.1}s (budget 30s)"))?;
    Ok(format!(
        "{cells} (P, config) cells, max relative difference {worst:.2e}, {secs:.2}s"
    ))
}

fn micro_case() -> Outcome {
    let data = DatasetPair::new(array![[1.0], [3.0], [5.0]], array![[2.0], [4.0], [6.0]]).unwrap();
    // Fold 2 trains on rows 1 and 3: x_T = [1, 3], y_T = [2, 4].
    // raw: 1+9 = 10, 2+12 = 14; centered: (-1)²+1² = 2, (-1)(-1)+1·1 = 2;
    // scaled: std = √2 on both sides, so 2/2 = 1.
    let cases = [
        (PreprocessConfig::NONE, 10.0, 14.0),
        (PreprocessConfig::CENTER, 2.0, 2.0),
        (PreprocessConfig::CENTER_SCALE, 1.0, 1.0),
    ];
    for (cfg, xtx, xty) in cases {
        let cache = precompute_global(&data, cfg);
        let fast = fold_products(&cache, &data, 2, &[2], cfg).map_err(|e| e.to_string())?;
        let base = baseline_fold(&data, 2, &[2], cfg).map_err(|e| e.to_string())?;
        for (engine, r) in [("fast", fast), ("baseline", base)] {
            let (a, b) = (r.xtx_t[[0, 0]], r.xty_t[[0, 0]]);
            check(
                (a - xtx).abs() <= 1e-12 && (b - xty).abs() <= 1e-12,
                format!("{engine} {cfg}: got ({a}, {b}), want ({xtx}, {xty})"),
            )?;
        }
    }
    Ok("fold 2 gives (10, 14), (2, 2), (1, 1) from both engines".into())
}

/// Largest entrywise gap divided by the largest magnitude in `a`.
fn scale_relative(a: &Matrix, b: &Matrix) -> f64 {
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    max_abs_difference(a.view(), b.view()) / scale
}

fn centering_collapse() -> Outcome {
    let data = random_dataset(120, 10, 4, 18).map_err(|e| e.to_string())?;
    let part = random_partition(120, 6, 18).map_err(|e| e.to_string())?;
    let (mut fast_worst, mut base_worst, mut min_xtx_gap) = (0.0f64, 0.0f64, f64::INFINITY);
    for (scale_x, scale_y) in [(false, false), (true, false), (false, true), (true, true)] {
        let make = |center_x, center_y| PreprocessConfig {
            center_x,
            center_y,
            scale_x,
            scale_y,
        };
        let run = |cfg| -> Result<(Vec<FoldResult>, Vec<FoldResult>), String> {
            Ok((
                run_all_folds(&data, &part, cfg).map_err(|e| e.to_string())?,
                baseline_fold_products(&data, &part, cfg).map_err(|e| e.to_string())?,
            ))
        };
        let (fast_both, base_both) = run(make(true, true))?;
        let (fast_x, base_x) = run(make(true, false))?;
        let (fast_y, base_y) = run(make(false, true))?;
        for other in [&fast_x, &fast_y] {
            for (a, b) in fast_both.iter().zip(other) {
                fast_worst = fast_worst.max(max_relative_difference(a.xty_t.view(), b.xty_t.view()));
            }
        }
        for other in [&base_x, &base_y] {
            for (a, b) in base_both.iter().zip(other) {
                base_worst = base_worst.max(scale_relative(&a.xty_t, &b.xty_t));
            }
        }
        for (a, b) in base_both.iter().zip(&base_y) {
            min_xtx_gap = min_xtx_gap.min(max_relative_difference(a.xtx_t.view(), b.xtx_t.view()));
        }
    }
    check(
        fast_worst <= 1e-12,
        format!("fast xty_t differs by {fast_worst:e} relative"),
    )?;
    check(
        base_worst <= 1e-12,
        format!("baseline xty_t differs by {base_worst:e} of its scale"),
    )?;
    check(
        min_xtx_gap > 1e-3,
        format!("xtx_t with only Y centered is too close: {min_xtx_gap:e}"),
    )?;
    Ok(format!(
        "xty_t: fast entrywise {fast_worst:.1e}, baseline {base_worst:.1e} of matrix scale; \
         xtx_t (center Y only) differs by >= {min_xtx_gap:.2e}"
    ))
}

fn combination_classes() -> Outcome {
    let data = random_dataset(60, 6, 3, 7).map_err(|e| e.to_string())?;
    let part = random_partition(60, 5, 7).map_err(|e| e.to_string())?;
    let r = classify_combos(&data, &part, 1e-9).map_err(|e| e.to_string())?;
    check(r.n_xty_classes == 8, format!("{} xty classes", r.n_xty_classes))?;
    check(r.n_pair_classes == 12, format!("{} pair classes", r.n_pair_classes))?;
    check(
        r.min_xty_separation >= 1e-3 && r.min_pair_separation >= 1e-3,
        format!("separation {:e} / {:e}", r.min_xty_separation, r.min_pair_separation),
    )?;
    Ok(format!(
        "8 xty / 12 pair classes, separation {:.2e} / {:.2e}, spread {:.1e} / {:.1e}",
        r.min_xty_separation, r.min_pair_separation, r.max_xty_spread, r.max_pair_spread
    ))
}

fn training_size_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..100 {
        let n: usize = rng.random_range(2..500);
        let p: usize = rng.random_range(2..=n);
        let seed = rng.random();
        let part = if rng.random() {
            random_partition(n, p, seed)
        } else {
            random_unbalanced_partition(n, p, seed)
        }
        .map_err(|e| e.to_string())?;
        let sum: usize = part.training_sizes().iter().sum();
        check(sum == n * (p - 1), format!("trial {trial}: N={n} P={p} gives {sum}"))?;
    }
    Ok("100 partitionings satisfy sum |T_p| = N(P-1)".into())
}

fn leakage_reproduction() -> Outcome {
    let (data, part) = canonical_example();
    // Fold 2 trains on x = [-1, 1]; the dataset mean is 4/3.
    // Lindgren: 2 - (16/9)(6 - 3/2) + 0 + 0 = -6; proper: training mean 0 -> 2.
    let lindgren = lindgren_centered_xtx(&data, &part, 2, FoldSizeTerm::FoldCount).map_err(|e| e.to_string())?;
    let proper = baseline_fold(
        &data,
        2,
        &[2],
        PreprocessConfig {
            center_x: true,
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let (l, p) = (lindgren[[0, 0]], proper.xtx_t[[0, 0]]);
    check((l + 6.0).abs() <= 1e-12, format!("Lindgren product {l}, want -6"))?;
    check((p - 2.0).abs() <= 1e-12, format!("proper product {p}, want 2"))?;
    let report = leakage_divergence(&data, &part, FoldSizeTerm::FoldCount).map_err(|e| e.to_string())?;
    let d = report
        .folds
        .iter()
        .find(|f| f.fold == 2)
        .map(|f| f.max_abs_difference)
        .unwrap_or(f64::NAN);
    check((d - 8.0).abs() <= 1e-12, format!("divergence {d}, want 8"))?;

    let (data, part) = centered_example();
    let zero = leakage_divergence(&data, &part, FoldSizeTerm::FoldCount).map_err(|e| e.to_string())?;
    check(zero.max() <= 1e-12, format!("mean-zero divergence {:e}", zero.max()))?;
    Ok(format!("-6 vs 2, divergence {d}; mean-zero data {:.1e}", zero.max()))
}

fn p_independence() -> Outcome {
    let start = Instant::now();
    let (n, k, m, seed) = (20_000, 100, 5, 42);
    let cfg = PreprocessConfig::CENTER_SCALE;
    let data = random_dataset(n, k, m, seed).map_err(|e| e.to_string())?;
    let p10 = random_partition(n, 10, seed).map_err(|e| e.to_string())?;
    let p1000 = random_partition(n, 1000, seed).map_err(|e| e.to_string())?;
    let t =
        |engine, part: &Partitioning| time_engine(engine, &data, part, cfg, MIN_REPETITIONS).map_err(|e| e.to_string());
    let fast10 = t(Engine::Fast, &p10)?;
    let fast1000 = t(Engine::Fast, &p1000)?;
    let base10 = t(Engine::Baseline, &p10)?;
    let base1000 = t(Engine::Baseline, &p1000)?;
    let secs = start.elapsed().as_secs_f64();
    let detail = format!(
        "fast {fast10:.3}s -> {fast1000:.3}s ({:.2}x), baseline {base10:.2}s -> {base1000:.1}s ({:.0}x), \
         fast/baseline at P=1000 {:.0}x, {secs:.0}s total",
        fast1000 / fast10,
        base1000 / base10,
        base1000 / fast1000
    );
    check(fast1000 <= 3.0 * fast10, format!("fast grew with P: {detail}"))?;
    check(
        base1000 >= 20.0 * base10,
        format!("baseline did not grow with P: {detail}"),
    )?;
    check(base1000 >= 50.0 * fast1000, format!("fast not 50x faster: {detail}"))?;
    check(secs < 300.0, format!("over the 5 minute budget: {detail}"))?;
    Ok(detail)
}

fn direct_mean(rows: &[Vec<f64>]) -> Vec<f64> {
    let k = rows[0].len();
    let mut acc = vec![0.0; k];
    for r in rows {
        for j in 0..k {
            acc[j] += r[j];
        }
    }
    acc.iter().map(|s| s / rows.len() as f64).collect()
}

fn direct_std(rows: &[Vec<f64>], mean: &[f64]) -> Vec<f64> {
    (0..mean.len())
        .map(|j| {
            let ss: f64 = rows.iter().map(|r| (r[j] - mean[j]).powi(2)).sum();
            (ss / (rows.len() - 1) as f64).sqrt()
        })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn statistic_reconstruction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let (mut worst_mean, mut worst_std) = (0.0f64, 0.0f64);
    let mut folds = 0;
    while folds < 1000 {
        let n: usize = rng.random_range(10..300);
        let k: usize = rng.random_range(1..8);
        let m: usize = rng.random_range(1..4);
        let raw = random_dataset(n, k, m, rng.random()).map_err(|e| e.to_string())?;
        // shift and stretch every column differently
        let mut stretch = |a: ndarray::ArrayView2<'_, f64>| {
            let mut a = a.to_owned();
            for mut col in a.columns_mut() {
                let (offset, scale) = (rng.random_range(-3.0..3.0), rng.random_range(0.5..5.0));
                col.mapv_inplace(|v| offset + scale * v);
            }
            a
        };
        let data = DatasetPair::new(stretch(raw.x()), stretch(raw.y())).map_err(|e| e.to_string())?;
        // one fold of a random (balanced or unbalanced) scalable P-fold partitioning
        let p: usize = rng.random_range(2..=n.min(50));
        let seed = rng.random();
        let part = if rng.random() {
            random_partition(n, p, seed)
        } else {
            random_unbalanced_partition(n, p, seed)
        }
        .map_err(|e| e.to_string())?;
        if check_scalable(&part).is_err() {
            continue;
        }
        folds += 1;
        let fold = rng.random_range(1..=p);
        let v_rows: Vec<usize> = (0..n).filter(|&i| part.label(i) == fold).collect();
        let cache = precompute_global(&data, PreprocessConfig::CENTER_SCALE);
        let r =
            fold_products(&cache, &data, fold, &v_rows, PreprocessConfig::CENTER_SCALE).map_err(|e| e.to_string())?;

        for (a, mean, std) in [
            (data.x(), &r.stats.mean_x_t, &r.stats.std_x_t),
            (data.y(), &r.stats.mean_y_t, &r.stats.std_y_t),
        ] {
            let train: Vec<Vec<f64>> = (0..n)
                .filter(|&i| part.label(i) != fold)
                .map(|i| a.row(i).to_vec())
                .collect();
            let want_mean = direct_mean(&train);
            let want_std = direct_std(&train, &want_mean);
            let (mean, std) = (mean.as_ref().unwrap(), std.as_ref().unwrap());
            for j in 0..want_mean.len() {
                worst_mean = worst_mean.max(rel(mean[j], want_mean[j]));
                worst_std = worst_std.max(rel(std[j], want_std[j]));
            }
        }
        check(worst_mean <= 1e-12, format!("fold {folds}: mean off by {worst_mean:e}"))?;
        check(
            worst_std <= 1e-10,
            format!(
                "fold {folds}: std off by {worst_std:e} (N={n}, P={p}, |T|={})",
                r.stats.n_train
            ),
        )?;
    }

    // Constant columns (integer and dyadic values) in both engines.
    for (c, seed) in [(4.0, 1u64), (-0.75, 2), (1024.0, 3), (0.125, 4)] {
        let x = Matrix::from_shape_fn((30, 3), |(i, j)| if j == 1 { c } else { (i * (j + 2) % 11) as f64 });
        let y = x.slice(ndarray::s![.., 0..2]).to_owned();
        let data = DatasetPair::new(x, y).unwrap();
        let part = random_unbalanced_partition(30, 6, seed).map_err(|e| e.to_string())?;
        let fast = run_all_folds(&data, &part, PreprocessConfig::CENTER_SCALE).map_err(|e| e.to_string())?;
        let base = baseline_fold_products(&data, &part, PreprocessConfig::CENTER_SCALE).map_err(|e| e.to_string())?;
        for r in fast.iter().chain(&base) {
            let sx = r.stats.std_x_t.as_ref().unwrap()[1];
            let sy = r.stats.std_y_t.as_ref().unwrap()[1];
            check(
                sx == 1.0 && sy == 1.0,
                format!("constant {c}: fold {} std ({sx}, {sy})", r.fold_id),
            )?;
        }
    }
    Ok(format!(
        "1000 folds: mean within {worst_mean:.1e}, std within {worst_std:.1e}; constant columns give std 1"
    ))
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = random_dataset(90, 7, 3, 99).map_err(|e| e.to_string())?;
    let part = random_unbalanced_partition(90, 9, 99).map_err(|e| e.to_string())?;
    let (xf, yf, pf) = (
        tmp.path().join("x.csv"),
        tmp.path().join("y.csv"),
        tmp.path().join("p.txt"),
    );
    write_matrix_csv(&xf, &data.x().to_owned()).map_err(|e| e.to_string())?;
    write_matrix_csv(&yf, &data.y().to_owned()).map_err(|e| e.to_string())?;
    write_partition(&pf, &part.labels()).map_err(|e| e.to_string())?;

    let verify = |threads| -> Result<Vec<u8>, String> {
        let args = VerifyArgs {
            x_file: Some(xf.clone()),
            y_file: Some(yf.clone()),
            partition_file: Some(pf.clone()),
            random: None,
            tol: 1e-8,
            configs: vec![],
            threads,
        };
        let mut out = Vec::new();
        let code = cmd_verify(&args, &mut out).map_err(|e| e.to_string())?;
        check(code == 0, format!("verify exited {code}"))?;
        Ok(out)
    };
    let v1 = verify(1)?;
    check(v1 == verify(1)?, "verify output changed between runs")?;
    check(v1 == verify(4)?, "verify output differs with 4 threads")?;

    let mut compared = 0;
    for engine in [Engine::Fast, Engine::Baseline] {
        for config in [PreprocessConfig::NONE, PreprocessConfig::CENTER_SCALE] {
            let mut outputs = Vec::new();
            for (run, threads) in [(0, 1), (1, 1), (2, 3)] {
                let dir = tmp.path().join(format!("{engine}-{}-{run}", config.bits()));
                let args = RunArgs {
                    x_file: xf.clone(),
                    y_file: yf.clone(),
                    partition_file: pf.clone(),
                    config,
                    out_dir: dir.clone(),
                    engine,
                    threads,
                };
                let mut out = Vec::new();
                cmd_run(&args, &mut out).map_err(|e| e.to_string())?;
                outputs.push(read_dir_bytes(&dir));
            }
            check(
                outputs[0].len() == 2 * 9 + 1,
                format!("{} files written", outputs[0].len()),
            )?;
            check(
                outputs[0] == outputs[1],
                format!("{engine} {config}: run output changed between runs"),
            )?;
            check(
                outputs[0] == outputs[2],
                format!("{engine} {config}: run output differs with 3 threads"),
            )?;
            compared += 1;
        }
    }

    // The library entry points agree bit for bit too.
    let cfg = PreprocessConfig::CENTER_SCALE;
    check(
        run_all_folds(&data, &part, cfg).unwrap()
            == run_all_folds_with(&data, &part, cfg, Execution::Threads(4)).unwrap(),
        "fast engine differs across thread counts",
    )?;
    check(
        baseline_fold_products(&data, &part, cfg).unwrap()
            == baseline_fold_products_with(&data, &part, cfg, Execution::Threads(4)).unwrap(),
        "baseline engine differs across thread counts",
    )?;
    Ok(format!(
        "verify and {compared} run setups byte-identical across runs and thread counts"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("worked micro-case", micro_case),
        ("centering collapse", centering_collapse),
        ("combination classes", combination_classes),
        ("training size identity", training_size_identity),
        ("leakage reproduction", leakage_reproduction),
        ("fold-count independence", p_independence),
        ("statistic reconstruction", statistic_reconstruction),
        ("determinism", determinism),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  {id}. {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {id}. {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
