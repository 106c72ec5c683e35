//! Training-partition matrix products `X_TᵀX_T` and `X_TᵀY_T` for every fold
//! of a P-fold cross-validation, with optional column centering and scaling
//! computed from training rows only.
//!
//! Two engines produce identical results:
//!
//! - [`fast`] computes `XᵀX`, `XᵀY` and column moments once, then removes each
//!   fold's validation block. Total cost does not grow with the fold count.
//! - [`baseline`] extracts and preprocesses each training partition from
//!   scratch. It is slow on purpose and serves as the reference.
//!
//! ```
//! use foldprod::{fast, baseline, DatasetPair, Partitioning, PreprocessConfig};
//! use ndarray::array;
//!
//! let data = DatasetPair::new(array![[1.0], [3.0], [5.0]], array![[2.0], [4.0], [6.0]]).unwrap();
//! let part = Partitioning::new(&[1, 1, 2], 2).unwrap();
//! let folds = fast::run_all_folds(&data, &part, PreprocessConfig::CENTER).unwrap();
//! assert_eq!(folds[1].xtx_t[[0, 0]], 2.0);
//! let reference = baseline::baseline_fold_products(&data, &part, PreprocessConfig::CENTER).unwrap();
//! assert_eq!(folds[1].xty_t, reference[1].xty_t);
//! ```

pub mod baseline;
pub mod cli;
pub mod combos;
pub mod data;
pub mod error;
pub mod exec;
pub mod fast;
pub mod leakage;
pub mod matrix;
pub mod partition;

pub use data::{DatasetPair, FoldResult, FoldStats, GlobalCache, PreprocessConfig};
pub use error::{Error, Result};
pub use exec::Execution;
pub use partition::{PartitionViolation, Partitioning, ValidationIndex};
