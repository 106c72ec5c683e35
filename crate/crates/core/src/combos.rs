//! Numeric certification of which preprocessing configurations give the same
//! training products.
//!
//! Centering X, Y, or both has the same effect on `X_TᵀY_T`, so the 16
//! configurations yield 8 distinct `X_TᵀY_T` and 12 distinct
//! `(X_TᵀX_T, X_TᵀY_T)` pairs. Scaling never collapses.

use std::fmt;

use crate::data::{DatasetPair, FoldResult, PreprocessConfig};
use crate::error::{Error, Result};
use crate::fast::run_all_folds;
use crate::partition::{check_scalable, Partitioning};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const EXPECTED_XTY_CLASSES: usize = 8;
pub const EXPECTED_PAIR_CLASSES: usize = 12;

/// All 16 configurations; `center_x` is the most significant bit of the counter.
pub fn enumerate_configs() -> Vec<PreprocessConfig> {
    (0..16u8).map(PreprocessConfig::from_bits).collect()
}

/// Equivalence classes of the 16 configurations on one dataset.
#[derive(Debug, Clone)]
pub struct ComboClassReport {
    pub configs: Vec<PreprocessConfig>,
    /// Class id per config (parallel to `configs`) by `X_TᵀY_T`.
    pub xty_class: Vec<usize>,
    /// Class id per config by the `(X_TᵀX_T, X_TᵀY_T)` pair.
    pub pair_class: Vec<usize>,
    pub n_xty_classes: usize,
    pub n_pair_classes: usize,
    /// Smallest distance between configs placed in different classes.
    pub min_xty_separation: f64,
    pub min_pair_separation: f64,
    /// Largest distance between configs placed in the same class.
    pub max_xty_spread: f64,
    pub max_pair_spread: f64,
    pub tol: f64,
}

impl ComboClassReport {
    /// True when the data did not separate the expected 8 and 12 classes.
    pub fn is_degenerate(&self) -> bool {
        self.n_xty_classes != EXPECTED_XTY_CLASSES || self.n_pair_classes != EXPECTED_PAIR_CLASSES
    }

    pub fn xty_class_of(&self, cfg: PreprocessConfig) -> usize {
        self.xty_class[cfg.bits() as usize]
    }

    pub fn pair_class_of(&self, cfg: PreprocessConfig) -> usize {
        self.pair_class[cfg.bits() as usize]
    }
}

/// Relative Frobenius distance between two stacks of matrices.
fn stack_distance<'a>(a: impl Iterator<Item = (&'a ndarray::Array2<f64>, &'a ndarray::Array2<f64>)>) -> f64 {
    let (mut diff, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (x, y) in a {
        ndarray::Zip::from(x).and(y).for_each(|&u, &v| {
            diff += (u - v) * (u - v);
            na += u * u;
            nb += v * v;
        });
    }
    let scale = na.max(nb).sqrt();
    if scale == 0.0 {
        0.0
    } else {
        diff.sqrt() / scale
    }
}

fn xty_distance(a: &[FoldResult], b: &[FoldResult]) -> f64 {
    stack_distance(a.iter().zip(b).map(|(x, y)| (&x.xty_t, &y.xty_t)))
}

fn xtx_distance(a: &[FoldResult], b: &[FoldResult]) -> f64 {
    stack_distance(a.iter().zip(b).map(|(x, y)| (&x.xtx_t, &y.xtx_t)))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut i = i;
        while self.0[i] != root {
            let next = self.0[i];
            self.0[i] = root;
            i = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

struct Grouping {
    class: Vec<usize>,
    n_classes: usize,
    min_separation: f64,
    max_spread: f64,
}

fn group(dist: &[Vec<f64>], tol: f64) -> Grouping {
    let n = dist.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if dist[i][j] <= tol {
                uf.union(i, j);
            }
        }
    }
    // ids in order of first appearance
    let mut ids = vec![usize::MAX; n];
    let mut class = vec![0; n];
    let mut next = 0;
    for i in 0..n {
        let r = uf.find(i);
        if ids[r] == usize::MAX {
            ids[r] = next;
            next += 1;
        }
        class[i] = ids[r];
    }
    let (mut min_separation, mut max_spread) = (f64::INFINITY, 0.0_f64);
    for i in 0..n {
        for j in i + 1..n {
            if class[i] == class[j] {
                max_spread = max_spread.max(dist[i][j]);
            } else {
                min_separation = min_separation.min(dist[i][j]);
            }
        }
    }
    Grouping {
        class,
        n_classes: next,
        min_separation,
        max_spread,
    }
}

/// Runs the fast engine for every configuration and groups configurations
/// whose outputs agree within `tol` (relative Frobenius, over all folds).
pub fn classify_combos(data: &DatasetPair, part: &Partitioning, tol: f64) -> Result<ComboClassReport> {
    check_scalable(part).map_err(Error::NotScalable)?;
    let configs = enumerate_configs();
    let runs = configs
        .iter()
        .map(|&cfg| run_all_folds(data, part, cfg))
        .collect::<Result<Vec<_>>>()?;

    let n = configs.len();
    let mut d_xty = vec![vec![0.0; n]; n];
    let mut d_pair = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let xy = xty_distance(&runs[i], &runs[j]);
            let pair = xy.max(xtx_distance(&runs[i], &runs[j]));
            d_xty[i][j] = xy;
            d_xty[j][i] = xy;
            d_pair[i][j] = pair;
            d_pair[j][i] = pair;
        }
    }
    let by_xty = group(&d_xty, tol);
    let by_pair = group(&d_pair, tol);
    Ok(ComboClassReport {
        configs,
        xty_class: by_xty.class,
        pair_class: by_pair.class,
        n_xty_classes: by_xty.n_classes,
        n_pair_classes: by_pair.n_classes,
        min_xty_separation: by_xty.min_separation,
        min_pair_separation: by_pair.min_separation,
        max_xty_spread: by_xty.max_spread,
        max_pair_spread: by_pair.max_spread,
        tol,
    })
}

const CENTER_LABELS: [(&str, bool, bool); 4] = [
    ("no centering", false, false),
    ("center X", true, false),
    ("center Y", false, true),
    ("center both", true, true),
];
const SCALE_LABELS: [(&str, bool, bool); 4] = [
    ("no scaling", false, false),
    ("scale X", true, false),
    ("scale Y", false, true),
    ("scale both", true, true),
];

impl ComboClassReport {
    fn write_table(&self, f: &mut fmt::Formatter<'_>, title: &str, classes: &[usize]) -> fmt::Result {
        writeln!(f, "{title}")?;
        write!(f, "{:<14}", "")?;
        for (name, _, _) in SCALE_LABELS {
            write!(f, "{name:>12}")?;
        }
        writeln!(f)?;
        for (cname, cx, cy) in CENTER_LABELS {
            write!(f, "{cname:<14}")?;
            for (_, sx, sy) in SCALE_LABELS {
                let cfg = PreprocessConfig {
                    center_x: cx,
                    center_y: cy,
                    scale_x: sx,
                    scale_y: sy,
                };
                write!(f, "{:>12}", classes[cfg.bits() as usize])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Display for ComboClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_table(f, "X_T'Y_T class per configuration", &self.xty_class)?;
        writeln!(f)?;
        self.write_table(f, "(X_T'X_T, X_T'Y_T) class per configuration", &self.pair_class)?;
        writeln!(f)?;
        writeln!(
            f,
            "xty classes: {} (expected {}), min separation {:.3e}, max spread {:.3e}",
            self.n_xty_classes, EXPECTED_XTY_CLASSES, self.min_xty_separation, self.max_xty_spread
        )?;
        writeln!(
            f,
            "pair classes: {} (expected {}), min separation {:.3e}, max spread {:.3e}",
            self.n_pair_classes, EXPECTED_PAIR_CLASSES, self.min_pair_separation, self.max_pair_spread
        )?;
        writeln!(f, "tolerance: {:e}", self.tol)?;
        if self.is_degenerate() {
            write!(f, "\nwarning: data too degenerate to certify the expected class counts")?;
        }
        Ok(())
    }
}
