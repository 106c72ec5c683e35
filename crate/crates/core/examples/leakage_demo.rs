//! Centering training rows with the full-dataset mean (the Lindgren
//! correction) versus with the training mean.

use foldprod::baseline::baseline_fold;
use foldprod::cli::gen::{random_dataset, random_unbalanced_partition};
use foldprod::leakage::{canonical_example, leakage_divergence, lindgren_centered_xtx, FoldSizeTerm};
use foldprod::PreprocessConfig;

fn main() -> foldprod::Result<()> {
    let (data, part) = canonical_example();
    let center_x = PreprocessConfig {
        center_x: true,
        ..Default::default()
    };
    let lindgren = lindgren_centered_xtx(&data, &part, 2, FoldSizeTerm::FoldCount)?;
    let proper = baseline_fold(&data, 2, &[2], center_x)?;
    println!("X = [-1, 1, 4], fold 2 trains on the first two rows");
    println!("  lindgren: {}   proper: {}", lindgren[[0, 0]], proper.xtx_t[[0, 0]]);

    let data = random_dataset(50, 3, 1, 5)?;
    let part = random_unbalanced_partition(50, 5, 5)?;
    for term in [FoldSizeTerm::FoldCount, FoldSizeTerm::ValidationSize] {
        let report = leakage_divergence(&data, &part, term)?;
        println!("\nrandom data, unequal folds, {term:?} term:");
        print!("{report}");
    }
    Ok(())
}
