//! Cross-check the fast engine against the baseline for all 16 preprocessing
//! configurations on seeded random data.
//!
//! cargo run --example verify_engines -- [N K M P SEED]

use foldprod::baseline::baseline_fold_products;
use foldprod::cli::gen::{random_dataset, random_partition};
use foldprod::combos::enumerate_configs;
use foldprod::fast::run_all_folds;
use foldprod::matrix::max_relative_difference;

fn main() -> foldprod::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let [n, k, m, p, seed] = match args[..] {
        [n, k, m, p, seed] => [n, k, m, p, seed],
        _ => [200, 30, 5, 10, 1],
    };
    let (n, k, m, p) = (n as usize, k as usize, m as usize, p as usize);
    let data = random_dataset(n, k, m, seed)?;
    let part = random_partition(n, p, seed)?;
    println!("N={n} K={k} M={m} P={p} seed={seed}");
    for cfg in enumerate_configs() {
        let fast = run_all_folds(&data, &part, cfg)?;
        let base = baseline_fold_products(&data, &part, cfg)?;
        let worst = fast
            .iter()
            .zip(&base)
            .map(|(f, b)| {
                max_relative_difference(f.xtx_t.view(), b.xtx_t.view())
                    .max(max_relative_difference(f.xty_t.view(), b.xty_t.view()))
            })
            .fold(0.0, f64::max);
        println!("{:<14} {worst:.3e}", cfg.to_string());
    }
    Ok(())
}
