//! The fractionated-subparts centering of Lindgren, Geladi and Wold (1994),
//! kept only to measure how far it drifts from proper training-partition
//! centering.
//!
//! Their centered training product is
//!
//! ```text
//! (X_TᵀX_T)ij - x̄i·x̄j·(2N - w) + |T|·x̄i·x̄T,j + |T|·x̄j·x̄T,i
//! ```
//!
//! with `x̄` the whole-dataset mean and `w = N/P`. Because `x̄` includes the
//! validation rows, the result generally differs from `X_TᵀX_T - |T|·x̄_Tᵀx̄_T`
//! even when the training columns are already centered.

use std::fmt;

use ndarray::array;

use crate::baseline::baseline_fold_products;
use crate::data::{DatasetPair, PreprocessConfig};
use crate::error::{Error, Result};
use crate::matrix::{column_means, column_sums, gather_rows, gram, max_abs_difference, Matrix};
use crate::partition::{build_validation_partitions, Partitioning};

/// What stands in for the per-fold validation size in the `w` term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FoldSizeTerm {
    /// `N/P`, as the original formula writes it (exact for balanced folds).
    #[default]
    FoldCount,
    /// `|V_p|`, the quantity `N/P` approximates when folds are unbalanced.
    ValidationSize,
}

/// Lindgren-style centered `X_TᵀX_T` for 1-based fold `fold`.
pub fn lindgren_centered_xtx(
    data: &DatasetPair,
    part: &Partitioning,
    fold: usize,
    term: FoldSizeTerm,
) -> Result<Matrix> {
    if part.n_rows() != data.n_rows() {
        return Err(Error::Dimension(format!(
            "partitioning labels {} samples but the data has {}",
            part.n_rows(),
            data.n_rows()
        )));
    }
    if fold == 0 || fold > part.n_folds() {
        return Err(Error::Argument(format!("fold {fold} outside 1..={}", part.n_folds())));
    }
    let index = build_validation_partitions(part);
    let v_rows = index.rows(fold);
    let x = data.x();
    let n = data.n_rows();
    let n_v = v_rows.len();
    let n_t = n - n_v;

    let x_v = gather_rows(x, v_rows);
    let mut out = gram(x) - gram(x_v.view());
    let mean = column_means(x);
    let mean_t = (column_sums(x) - column_sums(x_v.view())) / n_t as f64;
    let w = match term {
        FoldSizeTerm::FoldCount => n as f64 / part.n_folds() as f64,
        FoldSizeTerm::ValidationSize => n_v as f64,
    };
    let coeff = 2.0 * n as f64 - w;
    let nt = n_t as f64;
    let k = out.nrows();
    for i in 0..k {
        for j in 0..k {
            out[[i, j]] += -mean[i] * mean[j] * coeff + nt * mean[i] * mean_t[j] + nt * mean[j] * mean_t[i];
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldDivergence {
    pub fold: usize,
    pub max_abs_difference: f64,
}

/// Per-fold gap between Lindgren centering and proper training centering of `XᵀX`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeakageReport {
    pub term: FoldSizeTerm,
    pub folds: Vec<FoldDivergence>,
}

impl LeakageReport {
    pub fn max(&self) -> f64 {
        self.folds.iter().map(|f| f.max_abs_difference).fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.folds
            .iter()
            .map(|f| f.max_abs_difference)
            .fold(f64::INFINITY, f64::min)
    }
}

impl fmt::Display for LeakageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>6}  {:>22}", "fold", "max |lindgren - proper|")?;
        for d in &self.folds {
            writeln!(f, "{:>6}  {:>22.6e}", d.fold, d.max_abs_difference)?;
        }
        Ok(())
    }
}

pub fn leakage_divergence(data: &DatasetPair, part: &Partitioning, term: FoldSizeTerm) -> Result<LeakageReport> {
    let cfg = PreprocessConfig {
        center_x: true,
        ..Default::default()
    };
    let proper = baseline_fold_products(data, part, cfg)?;
    let folds = proper
        .iter()
        .map(|r| {
            let l = lindgren_centered_xtx(data, part, r.fold_id, term)?;
            Ok(FoldDivergence {
                fold: r.fold_id,
                max_abs_difference: max_abs_difference(l.view(), r.xtx_t.view()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LeakageReport { term, folds })
}

/// Three samples, two folds: the training rows of fold 2 (samples 1 and 2)
/// are centered but the dataset is not. Lindgren gives -6 where proper centering gives 2.
pub fn canonical_example() -> (DatasetPair, Partitioning) {
    let x = array![[-1.0], [1.0], [4.0]];
    let data = DatasetPair::new(x.clone(), x).expect("static example");
    let part = Partitioning::new(&[1, 1, 2], 2).expect("static example");
    (data, part)
}

/// Mean-zero dataset whose training partitions are mean-zero too.
pub fn centered_example() -> (DatasetPair, Partitioning) {
    let x = array![[-1.0, 3.0], [1.0, -3.0], [-2.0, 0.5], [2.0, -0.5]];
    let data = DatasetPair::new(x.clone(), x).expect("static example");
    let part = Partitioning::new(&[1, 1, 2, 2], 2).expect("static example");
    (data, part)
}
