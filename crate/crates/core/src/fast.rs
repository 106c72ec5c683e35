//! Fast engine: aggregate the whole dataset once, then recover each fold's
//! training-partition products and statistics by removing the contribution
//! of its validation rows.
//!
//! Per fold the work is proportional to the validation block (`|V|·K·(K+M)`)
//! plus `O(K·(K+M))` bookkeeping, so the total over all folds is one pass of
//! `XᵀX`/`XᵀY` regardless of the fold count.
//!
//! With `T` the training rows and `V` the validation rows of a fold:
//!
//! ```text
//! X_TᵀX_T   = XᵀX - X_VᵀX_V
//! x̄_T       = (N·x̄ - |V|·x̄_V) / |T|
//! centered  = X_TᵀY_T - |T|·(x̄_Tᵀȳ_T)
//! x̂_T       = sqrt((-2·x̄_T⊙Σ_T x + |T|·x̄_T°² + Σ_T x°²) / (|T| - 1))
//! scaled    = centered ⊘ (x̂_Tᵀŷ_T)
//! ```
//!
//! `X_TᵀY_T` is centered when either side is centered; `X_TᵀX_T` only when
//! X is. An unscaled side contributes an all-ones vector to the divisor.

use ndarray::{ArrayView1, ArrayView2, Zip};

use crate::baseline::check_inputs;
use crate::data::{DatasetPair, FoldResult, FoldStats, GlobalCache, PreprocessConfig};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::matrix::{
    column_sums, column_sums_sq, cross, gather_rows, gram, hadamard_outer_divide_inplace, Matrix, Vector,
};
use crate::partition::{build_validation_partitions, Partitioning};

/// Whole-dataset products plus whichever column moments `cfg` will need.
pub fn precompute_global(data: &DatasetPair, cfg: PreprocessConfig) -> GlobalCache {
    let n = data.n_rows();
    let (x, y) = (data.x(), data.y());
    let mut cache = GlobalCache {
        xtx: gram(x),
        xty: cross(x, y),
        mean_x: None,
        mean_y: None,
        sum_x: None,
        sum_y: None,
        sum_sq_x: None,
        sum_sq_y: None,
        n_rows: n,
    };
    if !cfg.is_none() {
        let sx = column_sums(x);
        let sy = column_sums(y);
        cache.mean_x = Some(&sx / n as f64);
        cache.mean_y = Some(&sy / n as f64);
        cache.sum_x = Some(sx);
        cache.sum_y = Some(sy);
    }
    if cfg.any_scale() {
        cache.sum_sq_x = Some(column_sums_sq(x));
        cache.sum_sq_y = Some(column_sums_sq(y));
    }
    cache
}

/// Training-partition mean from the whole-dataset mean and the validation mean.
///
/// Evaluated as `(n·global - n_val·val) / (n - n_val)`, which equals
/// `(n/n_t)·global - (n_val/n_t)·val` and keeps integer-valued constant
/// columns exact.
pub fn training_mean(
    global_mean: ArrayView1<'_, f64>,
    val_mean: ArrayView1<'_, f64>,
    n: usize,
    n_val: usize,
) -> Result<Vector> {
    if n_val >= n {
        return Err(Error::DegenerateFold { fold: 0 });
    }
    if global_mean.len() != val_mean.len() {
        return Err(Error::Dimension(format!(
            "mean vectors have lengths {} and {}",
            global_mean.len(),
            val_mean.len()
        )));
    }
    let (nf, nv, nt) = (n as f64, n_val as f64, (n - n_val) as f64);
    Ok(Zip::from(&global_mean)
        .and(&val_mean)
        .map_collect(|&g, &v| (nf * g - nv * v) / nt))
}

/// Bessel-corrected training standard deviation from training sums.
///
/// Round-off can push the radicand slightly below zero for constant columns;
/// it is clamped to zero, and exact zeros in the result become 1.
pub fn training_std(
    mean_t: ArrayView1<'_, f64>,
    sum_t: ArrayView1<'_, f64>,
    sum_sq_t: ArrayView1<'_, f64>,
    n_train: usize,
) -> Result<Vector> {
    if n_train < 2 {
        return Err(Error::TooFewTrainingRows { n_train });
    }
    if mean_t.len() != sum_t.len() || mean_t.len() != sum_sq_t.len() {
        return Err(Error::Dimension("moment vectors differ in length".into()));
    }
    let nt = n_train as f64;
    let dof = (n_train - 1) as f64;
    Ok(Zip::from(&mean_t)
        .and(&sum_t)
        .and(&sum_sq_t)
        .map_collect(|&m, &s, &sq| {
            let radicand = (-2.0 * m * s + nt * m * m + sq).max(0.0);
            let sd = (radicand / dof).sqrt();
            if sd == 0.0 {
                1.0
            } else {
                sd
            }
        }))
}

/// `m[i,j] -= n_t · (a[i]·b[j])`; the outer product is formed before scaling by `n_t`.
fn subtract_scaled_outer(m: &mut Matrix, a: &Vector, b: &Vector, n_t: f64) {
    for (mut row, &ai) in m.rows_mut().into_iter().zip(a.iter()) {
        Zip::from(&mut row).and(b).for_each(|v, &bj| *v -= n_t * (ai * bj));
    }
}

fn cached<'a>(v: &'a Option<Vector>, what: &'static str) -> Result<&'a Vector> {
    v.as_ref().ok_or(Error::CacheMissing(what))
}

/// Training products for one fold given only its validation rows.
///
/// The fold sees the cache and the gathered validation block, nothing else.
pub fn fold_products_from_block(
    cache: &GlobalCache,
    fold_id: usize,
    x_v: ArrayView2<'_, f64>,
    y_v: ArrayView2<'_, f64>,
    cfg: PreprocessConfig,
) -> Result<FoldResult> {
    let n = cache.n_rows;
    let n_v = x_v.nrows();
    if n_v == 0 || n_v >= n {
        return Err(Error::DegenerateFold { fold: fold_id });
    }
    if y_v.nrows() != n_v || x_v.ncols() != cache.xtx.nrows() || y_v.ncols() != cache.xty.ncols() {
        return Err(Error::Dimension(format!(
            "validation block {}x{} / {}x{} does not match cache {}x{}",
            x_v.nrows(),
            x_v.ncols(),
            y_v.nrows(),
            y_v.ncols(),
            cache.xty.nrows(),
            cache.xty.ncols()
        )));
    }
    let n_t = n - n_v;
    if cfg.any_scale() && n_t < 2 {
        return Err(Error::NotScalable(
            crate::partition::PartitionViolation::TrainingTooSmall {
                fold: fold_id,
                n_train: n_t,
            },
        ));
    }

    let mut xtx_t = gram(x_v);
    Zip::from(&mut xtx_t).and(&cache.xtx).for_each(|v, &g| *v = g - *v);
    let mut xty_t = cross(x_v, y_v);
    Zip::from(&mut xty_t).and(&cache.xty).for_each(|v, &g| *v = g - *v);
    let mut stats = FoldStats {
        mean_x_t: None,
        mean_y_t: None,
        std_x_t: None,
        std_y_t: None,
        n_train: n_t,
        n_val: n_v,
    };
    if cfg.is_none() {
        return Ok(FoldResult {
            fold_id,
            xtx_t,
            xty_t,
            stats,
        });
    }

    let sum_xv = column_sums(x_v);
    let sum_yv = column_sums(y_v);
    let mean_x_t = training_mean(
        cached(&cache.mean_x, "column means of X")?.view(),
        (&sum_xv / n_v as f64).view(),
        n,
        n_v,
    )?;
    let mean_y_t = training_mean(
        cached(&cache.mean_y, "column means of Y")?.view(),
        (&sum_yv / n_v as f64).view(),
        n,
        n_v,
    )?;

    if cfg.center_x {
        subtract_scaled_outer(&mut xtx_t, &mean_x_t, &mean_x_t, n_t as f64);
    }
    if cfg.centers_cross_product() {
        subtract_scaled_outer(&mut xty_t, &mean_x_t, &mean_y_t, n_t as f64);
    }

    if cfg.any_scale() {
        let sum_x_t = cached(&cache.sum_x, "column sums of X")? - &sum_xv;
        let sum_y_t = cached(&cache.sum_y, "column sums of Y")? - &sum_yv;
        let sq_x_t = cached(&cache.sum_sq_x, "column sums of squares of X")? - &column_sums_sq(x_v);
        let sq_y_t = cached(&cache.sum_sq_y, "column sums of squares of Y")? - &column_sums_sq(y_v);
        let std_x_t = training_std(mean_x_t.view(), sum_x_t.view(), sq_x_t.view(), n_t)?;
        let std_y_t = training_std(mean_y_t.view(), sum_y_t.view(), sq_y_t.view(), n_t)?;

        if cfg.scale_x {
            hadamard_outer_divide_inplace(&mut xtx_t, std_x_t.view(), std_x_t.view())?;
        }
        let ones_x;
        let ones_y;
        let left = if cfg.scale_x {
            std_x_t.view()
        } else {
            ones_x = Vector::ones(std_x_t.len());
            ones_x.view()
        };
        let right = if cfg.scale_y {
            std_y_t.view()
        } else {
            ones_y = Vector::ones(std_y_t.len());
            ones_y.view()
        };
        hadamard_outer_divide_inplace(&mut xty_t, left, right)?;
        stats.std_x_t = Some(std_x_t);
        stats.std_y_t = Some(std_y_t);
    }
    stats.mean_x_t = Some(mean_x_t);
    stats.mean_y_t = Some(mean_y_t);
    Ok(FoldResult {
        fold_id,
        xtx_t,
        xty_t,
        stats,
    })
}

/// Gathers the validation rows of one fold and hands them to
/// [`fold_products_from_block`].
pub fn fold_products(
    cache: &GlobalCache,
    data: &DatasetPair,
    fold_id: usize,
    v_rows: &[usize],
    cfg: PreprocessConfig,
) -> Result<FoldResult> {
    if let Some(&r) = v_rows.iter().find(|&&r| r >= data.n_rows()) {
        return Err(Error::Dimension(format!(
            "validation row {r} out of range for {} samples",
            data.n_rows()
        )));
    }
    let x_v = gather_rows(data.x(), v_rows);
    let y_v = gather_rows(data.y(), v_rows);
    fold_products_from_block(cache, fold_id, x_v.view(), y_v.view(), cfg)
}

/// Precomputes once, then produces every fold in ascending fold order.
pub fn run_all_folds(data: &DatasetPair, part: &Partitioning, cfg: PreprocessConfig) -> Result<Vec<FoldResult>> {
    run_all_folds_with(data, part, cfg, Execution::Sequential)
}

pub fn run_all_folds_with(
    data: &DatasetPair,
    part: &Partitioning,
    cfg: PreprocessConfig,
    exec: Execution,
) -> Result<Vec<FoldResult>> {
    check_inputs(data, part, cfg)?;
    let index = build_validation_partitions(part);
    let cache = precompute_global(data, cfg);
    let folds: Vec<(usize, &[usize])> = index.iter().collect();
    exec.map(&folds, |&(fold, rows)| fold_products(&cache, data, fold, rows, cfg))
}
