//! Dense row-major matrix helpers shared by both engines.
//!
//! Matrices are `ndarray` arrays in standard (row-major) layout. Products go
//! through `ndarray`'s `dot`, which dispatches to the single-threaded
//! `matrixmultiply` gemm kernel; for fixed shapes its blocking, and hence its
//! summation order, is fixed, so repeated runs produce identical bits.
//! Column reductions (sums, sums of squares) accumulate rows in ascending
//! row order.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis, Zip};

use crate::error::{Error, Result};

pub type Matrix = Array2<f64>;
pub type Vector = Array1<f64>;

/// `aᵀa`, mirrored from the upper triangle so the result is exactly symmetric.
pub fn gram(a: ArrayView2<'_, f64>) -> Matrix {
    let mut g = a.t().dot(&a);
    let k = g.nrows();
    for i in 0..k {
        for j in 0..i {
            g[[i, j]] = g[[j, i]];
        }
    }
    g
}

/// `aᵀb`.
pub fn cross(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>) -> Matrix {
    a.t().dot(&b)
}

pub fn column_sums(a: ArrayView2<'_, f64>) -> Vector {
    let mut acc = Vector::zeros(a.ncols());
    for row in a.rows() {
        acc += &row;
    }
    acc
}

pub fn column_sums_sq(a: ArrayView2<'_, f64>) -> Vector {
    let mut acc = Vector::zeros(a.ncols());
    for row in a.rows() {
        Zip::from(&mut acc).and(&row).for_each(|s, &v| *s += v * v);
    }
    acc
}

pub fn column_means(a: ArrayView2<'_, f64>) -> Vector {
    column_sums(a) / a.nrows() as f64
}

/// Copies the listed rows, in the given order, into a new matrix.
pub fn gather_rows(a: ArrayView2<'_, f64>, rows: &[usize]) -> Matrix {
    a.select(Axis(0), rows)
}

/// Entry `(i, j)` of the result is `m[i, j] / (left[i] * right[j])`.
///
/// Both divisor vectors must be strictly positive; the outer product is never
/// materialized.
pub fn hadamard_outer_divide(
    m: ArrayView2<'_, f64>,
    left: ArrayView1<'_, f64>,
    right: ArrayView1<'_, f64>,
) -> Result<Matrix> {
    let mut out = m.to_owned();
    hadamard_outer_divide_inplace(&mut out, left, right)?;
    Ok(out)
}

/// In-place form of [`hadamard_outer_divide`]; `m` is untouched on error.
pub fn hadamard_outer_divide_inplace(
    m: &mut Matrix,
    left: ArrayView1<'_, f64>,
    right: ArrayView1<'_, f64>,
) -> Result<()> {
    if m.nrows() != left.len() || m.ncols() != right.len() {
        return Err(Error::Dimension(format!(
            "cannot divide {}x{} matrix by outer product of lengths {} and {}",
            m.nrows(),
            m.ncols(),
            left.len(),
            right.len()
        )));
    }
    if let Some(bad) = left.iter().chain(right.iter()).find(|&&d| !(d > 0.0)) {
        return Err(Error::Precondition(format!(
            "divisor entries must be strictly positive, found {bad}"
        )));
    }
    for (mut row, &l) in m.rows_mut().into_iter().zip(left.iter()) {
        Zip::from(&mut row).and(&right).for_each(|v, &r| *v /= l * r);
    }
    Ok(())
}

/// `|a - b| / max(|a|, |b|)`, and zero when both are zero.
pub fn relative_difference(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Largest entrywise [`relative_difference`] between two equally shaped matrices.
pub fn max_relative_difference(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>) -> f64 {
    assert_eq!(a.dim(), b.dim(), "shape mismatch");
    Zip::from(&a)
        .and(&b)
        .fold(0.0_f64, |acc, &x, &y| acc.max(relative_difference(x, y)))
}

pub fn max_abs_difference(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>) -> f64 {
    assert_eq!(a.dim(), b.dim(), "shape mismatch");
    Zip::from(&a)
        .and(&b)
        .fold(0.0_f64, |acc, &x, &y| acc.max((x - y).abs()))
}
