//! Reference engine: every fold extracts its training submatrices, preprocesses
//! them with statistics computed on those rows alone, and multiplies.
//!
//! Cost grows linearly with the number of folds. Nothing is shared between
//! folds, which is what makes this engine usable as the correctness oracle
//! for [`crate::fast`].

use ndarray::{ArrayView2, Axis, Zip};

use crate::data::{DatasetPair, FoldResult, FoldStats, PreprocessConfig};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::matrix::{column_means, cross, gather_rows, gram, Matrix, Vector};
use crate::partition::{build_validation_partitions, check_scalable, Partitioning};

/// Bessel-corrected column standard deviations around `mean`, with exact
/// zeros replaced by 1. Near-zero values are left alone.
pub fn sample_std(a: ArrayView2<'_, f64>, mean: &Vector) -> Vector {
    let n = a.nrows();
    let mut ss = Vector::zeros(a.ncols());
    for row in a.rows() {
        Zip::from(&mut ss)
            .and(&row)
            .and(mean)
            .for_each(|s, &v, &m| *s += (v - m) * (v - m));
    }
    ss.mapv_into(|s| {
        let sd = (s / (n - 1) as f64).sqrt();
        if sd == 0.0 {
            1.0
        } else {
            sd
        }
    })
}

pub(crate) fn check_inputs(data: &DatasetPair, part: &Partitioning, cfg: PreprocessConfig) -> Result<()> {
    if part.n_rows() != data.n_rows() {
        return Err(Error::Dimension(format!(
            "partitioning labels {} samples but the data has {}",
            part.n_rows(),
            data.n_rows()
        )));
    }
    if cfg.any_scale() {
        check_scalable(part).map_err(Error::NotScalable)?;
    }
    Ok(())
}

/// Centers and/or scales `a` in place, returning the statistics used.
fn preprocess(
    a: &mut Matrix,
    center: bool,
    scale: bool,
    need_mean: bool,
    need_std: bool,
) -> (Option<Vector>, Option<Vector>) {
    let mean = need_mean.then(|| column_means(a.view()));
    let std = need_std.then(|| sample_std(a.view(), mean.as_ref().expect("std needs mean")));
    if center {
        let m = mean.as_ref().expect("centering needs mean");
        a.axis_iter_mut(Axis(0)).for_each(|mut row| row -= m);
    }
    if scale {
        let s = std.as_ref().expect("scaling needs std");
        a.axis_iter_mut(Axis(0)).for_each(|mut row| row /= s);
    }
    (mean, std)
}

/// Preprocessed training products for the fold whose validation rows are `v_rows`.
pub fn baseline_fold(
    data: &DatasetPair,
    fold_id: usize,
    v_rows: &[usize],
    cfg: PreprocessConfig,
) -> Result<FoldResult> {
    let n = data.n_rows();
    let mut in_val = vec![false; n];
    for &r in v_rows {
        if r >= n {
            return Err(Error::Dimension(format!(
                "validation row {r} out of range for {n} samples"
            )));
        }
        in_val[r] = true;
    }
    if v_rows.is_empty() {
        return Err(Error::DegenerateFold { fold: fold_id });
    }
    let t_rows: Vec<usize> = (0..n).filter(|&r| !in_val[r]).collect();
    if t_rows.is_empty() {
        return Err(Error::DegenerateFold { fold: fold_id });
    }
    if cfg.any_scale() && t_rows.len() < 2 {
        return Err(Error::NotScalable(
            crate::partition::PartitionViolation::TrainingTooSmall {
                fold: fold_id,
                n_train: t_rows.len(),
            },
        ));
    }

    let need_mean = !cfg.is_none();
    let need_std = cfg.any_scale();
    let mut x_t = gather_rows(data.x(), &t_rows);
    let mut y_t = gather_rows(data.y(), &t_rows);
    let (mean_x_t, std_x_t) = preprocess(&mut x_t, cfg.center_x, cfg.scale_x, need_mean, need_std);
    let (mean_y_t, std_y_t) = preprocess(&mut y_t, cfg.center_y, cfg.scale_y, need_mean, need_std);

    Ok(FoldResult {
        fold_id,
        xtx_t: gram(x_t.view()),
        xty_t: cross(x_t.view(), y_t.view()),
        stats: FoldStats {
            mean_x_t,
            mean_y_t,
            std_x_t,
            std_y_t,
            n_train: t_rows.len(),
            n_val: v_rows.len(),
        },
    })
}

/// Runs [`baseline_fold`] for every fold, in ascending fold order.
pub fn baseline_fold_products(
    data: &DatasetPair,
    part: &Partitioning,
    cfg: PreprocessConfig,
) -> Result<Vec<FoldResult>> {
    baseline_fold_products_with(data, part, cfg, Execution::Sequential)
}

pub fn baseline_fold_products_with(
    data: &DatasetPair,
    part: &Partitioning,
    cfg: PreprocessConfig,
    exec: Execution,
) -> Result<Vec<FoldResult>> {
    check_inputs(data, part, cfg)?;
    let index = build_validation_partitions(part);
    let folds: Vec<(usize, &[usize])> = index.iter().collect();
    exec.map(&folds, |&(fold, rows)| baseline_fold(data, fold, rows, cfg))
}
