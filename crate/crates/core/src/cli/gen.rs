//! Seeded synthetic data.
//!
//! The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`.
//! Entries are i.i.d. uniform on [0, 1): X is filled row by row, then Y.
//! Partitions draw from a separate ChaCha8 stream (stream 1) of the same seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::DatasetPair;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::partition::Partitioning;

pub fn random_dataset(n: usize, k: usize, m: usize, seed: u64) -> Result<DatasetPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = Matrix::from_shape_simple_fn((n, k), || rng.random::<f64>());
    let y = Matrix::from_shape_simple_fn((n, m), || rng.random::<f64>());
    DatasetPair::new(x, y)
}

/// Balanced labels (fold sizes differ by at most one) in seeded random order.
pub fn random_partition(n: usize, p: usize, seed: u64) -> Result<Partitioning> {
    if p == 0 || p > n {
        return Err(Error::Argument(format!("cannot split {n} samples into {p} folds")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut labels: Vec<usize> = (0..n).map(|i| i % p + 1).collect();
    labels.shuffle(&mut rng);
    Partitioning::new(&labels, p)
}

/// Labels drawn independently and uniformly, then patched so every fold is
/// used. Fold sizes are unbalanced.
pub fn random_unbalanced_partition(n: usize, p: usize, seed: u64) -> Result<Partitioning> {
    if p == 0 || p > n {
        return Err(Error::Argument(format!("cannot split {n} samples into {p} folds")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2);
    let mut labels: Vec<usize> = (0..n).map(|_| rng.random_range(1..=p)).collect();
    let mut rows: Vec<usize> = (0..n).collect();
    rows.shuffle(&mut rng);
    for (fold, &row) in (1..=p).zip(rows.iter()) {
        labels[row] = fold;
    }
    Partitioning::new(&labels, p)
}
