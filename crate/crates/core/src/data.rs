//! Domain types shared by the engines.

use std::fmt;
use std::str::FromStr;

use ndarray::ArrayView2;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Vector};

/// Feature matrix `x` (N×K) and response matrix `y` (N×M); one row per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetPair {
    x: Matrix,
    y: Matrix,
}

impl DatasetPair {
    pub fn new(x: Matrix, y: Matrix) -> Result<Self> {
        if x.nrows() != y.nrows() {
            return Err(Error::Dimension(format!(
                "x has {} rows but y has {}",
                x.nrows(),
                y.nrows()
            )));
        }
        if x.nrows() < 2 {
            return Err(Error::Dimension(format!("need at least 2 samples, got {}", x.nrows())));
        }
        if x.ncols() == 0 || y.ncols() == 0 {
            return Err(Error::Dimension(format!(
                "x and y need at least one column each (got {} and {})",
                x.ncols(),
                y.ncols()
            )));
        }
        check_finite("x", &x)?;
        check_finite("y", &y)?;
        // Row-major storage is assumed by every reduction.
        let x = x.as_standard_layout().into_owned();
        let y = y.as_standard_layout().into_owned();
        Ok(DatasetPair { x, y })
    }

    pub fn x(&self) -> ArrayView2<'_, f64> {
        self.x.view()
    }

    pub fn y(&self) -> ArrayView2<'_, f64> {
        self.y.view()
    }

    pub fn n_rows(&self) -> usize {
        self.x.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.x.ncols()
    }

    pub fn n_responses(&self) -> usize {
        self.y.ncols()
    }
}

fn check_finite(name: &'static str, m: &Matrix) -> Result<()> {
    match m.indexed_iter().find(|(_, v)| !v.is_finite()) {
        Some(((row, col), _)) => Err(Error::NonFinite { matrix: name, row, col }),
        None => Ok(()),
    }
}

/// Which column-wise preprocessing to apply to the training partition of each fold.
///
/// Centering happens before scaling whenever both are requested for the same
/// matrix. Scaling divides by the Bessel-corrected training standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PreprocessConfig {
    pub center_x: bool,
    pub center_y: bool,
    pub scale_x: bool,
    pub scale_y: bool,
}

impl PreprocessConfig {
    pub const NONE: Self = Self::from_bits(0);
    pub const CENTER: Self = Self::from_bits(0b1100);
    pub const CENTER_SCALE: Self = Self::from_bits(0b1111);

    /// Decodes a 4-bit counter, `center_x` being the most significant bit
    /// and `scale_y` the least.
    pub const fn from_bits(bits: u8) -> Self {
        PreprocessConfig {
            center_x: bits & 0b1000 != 0,
            center_y: bits & 0b0100 != 0,
            scale_x: bits & 0b0010 != 0,
            scale_y: bits & 0b0001 != 0,
        }
    }

    pub const fn bits(self) -> u8 {
        (self.center_x as u8) << 3 | (self.center_y as u8) << 2 | (self.scale_x as u8) << 1 | self.scale_y as u8
    }

    pub fn any_center(self) -> bool {
        self.center_x || self.center_y
    }

    pub fn any_scale(self) -> bool {
        self.scale_x || self.scale_y
    }

    pub fn is_none(self) -> bool {
        self.bits() == 0
    }

    /// Whether `XᵀY` comes out centered; centering either side is enough.
    pub fn centers_cross_product(self) -> bool {
        self.any_center()
    }
}

impl fmt::Display for PreprocessConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_none() {
            return f.write_str("none");
        }
        let parts: Vec<&str> = [
            (self.center_x, "cx"),
            (self.center_y, "cy"),
            (self.scale_x, "sx"),
            (self.scale_y, "sy"),
        ]
        .into_iter()
        .filter_map(|(on, name)| on.then_some(name))
        .collect();
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for PreprocessConfig {
    type Err = Error;

    /// Accepts `none`, or `+`-joined tokens from `cx`, `cy`, `sx`, `sy`,
    /// `center` (both sides) and `scale` (both sides).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut cfg = PreprocessConfig::NONE;
        if s.eq_ignore_ascii_case("none") {
            return Ok(cfg);
        }
        for token in s.split('+') {
            match token.trim().to_ascii_lowercase().as_str() {
                "cx" | "center-x" => cfg.center_x = true,
                "cy" | "center-y" => cfg.center_y = true,
                "sx" | "scale-x" => cfg.scale_x = true,
                "sy" | "scale-y" => cfg.scale_y = true,
                "center" => {
                    cfg.center_x = true;
                    cfg.center_y = true;
                }
                "scale" => {
                    cfg.scale_x = true;
                    cfg.scale_y = true;
                }
                other => {
                    return Err(Error::Argument(format!(
                        "unknown preprocessing token {other:?} in {s:?}"
                    )))
                }
            }
        }
        Ok(cfg)
    }
}

/// Whole-dataset aggregates computed once before the fold loop.
///
/// The moment vectors are only filled in when the configuration that built
/// the cache needs them.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalCache {
    pub xtx: Matrix,
    pub xty: Matrix,
    pub mean_x: Option<Vector>,
    pub mean_y: Option<Vector>,
    pub sum_x: Option<Vector>,
    pub sum_y: Option<Vector>,
    pub sum_sq_x: Option<Vector>,
    pub sum_sq_y: Option<Vector>,
    pub n_rows: usize,
}

/// Training-partition statistics a fold actually used.
///
/// Means are present whenever any preprocessing flag is set (scaling needs
/// them too); standard deviations whenever any scale flag is set. Standard
/// deviations have had exact zeros replaced by 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldStats {
    pub mean_x_t: Option<Vector>,
    pub mean_y_t: Option<Vector>,
    pub std_x_t: Option<Vector>,
    pub std_y_t: Option<Vector>,
    pub n_train: usize,
    pub n_val: usize,
}

/// Preprocessed training-partition products for one fold.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldResult {
    /// 1-based fold identifier.
    pub fold_id: usize,
    pub xtx_t: Matrix,
    pub xty_t: Matrix,
    pub stats: FoldStats,
}
