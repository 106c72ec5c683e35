//! Which of the 16 centering/scaling configurations give the same products.

use foldprod::cli::gen::{random_dataset, random_partition};
use foldprod::combos::{classify_combos, DEFAULT_TOLERANCE};

fn main() -> foldprod::Result<()> {
    let data = random_dataset(80, 6, 3, 11)?;
    let part = random_partition(80, 5, 11)?;
    let report = classify_combos(&data, &part, DEFAULT_TOLERANCE)?;
    print!("{report}");
    println!(
        "{} classes by X_T'Y_T, {} by the (X_T'X_T, X_T'Y_T) pair",
        report.n_xty_classes, report.n_pair_classes
    );
    Ok(())
}
