//! Per-fold products and training statistics from the fast engine, including
//! evaluating a single fold from its validation rows alone.

use foldprod::fast::{fold_products, precompute_global, run_all_folds};
use foldprod::partition::build_validation_partitions;
use foldprod::{DatasetPair, Partitioning, PreprocessConfig};
use ndarray::array;

fn main() -> foldprod::Result<()> {
    let data = DatasetPair::new(
        array![[1.0, 2.0], [3.0, 1.0], [5.0, 0.0], [2.0, 4.0], [4.0, 4.0], [0.0, 1.0]],
        array![[1.0], [2.0], [2.0], [0.5], [3.0], [1.5]],
    )?;
    let part = Partitioning::new(&[1, 2, 3, 1, 2, 3], 3)?;
    let cfg: PreprocessConfig = "center+scale".parse()?;

    for r in run_all_folds(&data, &part, cfg)? {
        println!(
            "fold {} (|T| = {}, |V| = {})",
            r.fold_id, r.stats.n_train, r.stats.n_val
        );
        println!("  mean_x_t = {}", r.stats.mean_x_t.as_ref().unwrap());
        println!("  std_x_t  = {}", r.stats.std_x_t.as_ref().unwrap());
        println!("  X_T'X_T  =\n{}", r.xtx_t);
        println!("  X_T'Y_T  =\n{}", r.xty_t);
    }

    // The cache is computed once; any fold can then be recovered on its own.
    let cache = precompute_global(&data, cfg);
    let index = build_validation_partitions(&part);
    let one = fold_products(&cache, &data, 2, index.rows(2), cfg)?;
    println!(
        "fold 2 again, from its validation rows {:?}:\n{}",
        index.rows(2),
        one.xtx_t
    );
    Ok(())
}
