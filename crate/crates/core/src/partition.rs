//! Fold labelings and the validation index built from them.
//!
//! Fold labels are 1-based at every interface. Internally a fold is
//! addressed by its 0-based position.

use std::fmt;

use crate::error::{Error, Result};

/// The first clause a labeling (or a fold in it) fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionViolation {
    TooFewFolds { p: usize },
    MoreFoldsThanSamples { p: usize, n: usize },
    LabelOutOfRange { row: usize, label: usize, p: usize },
    EmptyFold { fold: usize },
    TrainingTooSmall { fold: usize, n_train: usize },
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PartitionViolation::TooFewFolds { p } => {
                write!(f, "fold count {p} is below the minimum of 2")
            }
            PartitionViolation::MoreFoldsThanSamples { p, n } => {
                write!(f, "fold count {p} exceeds sample count {n}")
            }
            PartitionViolation::LabelOutOfRange { row, label, p } => {
                write!(f, "sample {} has label {label}, outside 1..={p}", row + 1)
            }
            PartitionViolation::EmptyFold { fold } => write!(f, "fold {fold} has no samples"),
            PartitionViolation::TrainingTooSmall { fold, n_train } => write!(
                f,
                "fold {fold} leaves {n_train} training sample(s), scaling needs at least 2"
            ),
        }
    }
}

/// Checks that `labels` (1-based) form a valid partitioning into `p` folds.
pub fn validate_partitioning(labels: &[usize], p: usize) -> std::result::Result<(), PartitionViolation> {
    let n = labels.len();
    if p < 2 {
        return Err(PartitionViolation::TooFewFolds { p });
    }
    if p > n {
        return Err(PartitionViolation::MoreFoldsThanSamples { p, n });
    }
    let mut seen = vec![false; p];
    for (row, &label) in labels.iter().enumerate() {
        if label == 0 || label > p {
            return Err(PartitionViolation::LabelOutOfRange { row, label, p });
        }
        seen[label - 1] = true;
    }
    match seen.iter().position(|&s| !s) {
        Some(i) => Err(PartitionViolation::EmptyFold { fold: i + 1 }),
        None => Ok(()),
    }
}

/// A validated assignment of each of `N` samples to one of `P` folds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partitioning {
    // 0-based fold index per sample.
    folds: Vec<usize>,
    p: usize,
}

impl Partitioning {
    /// Builds a partitioning from 1-based labels.
    pub fn new(labels: &[usize], p: usize) -> Result<Self> {
        validate_partitioning(labels, p).map_err(Error::InvalidPartition)?;
        Ok(Partitioning {
            folds: labels.iter().map(|&l| l - 1).collect(),
            p,
        })
    }

    /// Builds a partitioning whose fold count is the largest label.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let p = labels.iter().copied().max().unwrap_or(0);
        Self::new(labels, p)
    }

    pub fn n_rows(&self) -> usize {
        self.folds.len()
    }

    pub fn n_folds(&self) -> usize {
        self.p
    }

    /// 1-based fold label of sample `row` (0-based).
    pub fn label(&self, row: usize) -> usize {
        self.folds[row] + 1
    }

    pub fn labels(&self) -> Vec<usize> {
        self.folds.iter().map(|&f| f + 1).collect()
    }

    /// `|V_p|` for each fold, in fold order.
    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.p];
        for &f in &self.folds {
            sizes[f] += 1;
        }
        sizes
    }

    /// `|T_p| = N - |V_p|` for each fold, in fold order.
    pub fn training_sizes(&self) -> Vec<usize> {
        let n = self.n_rows();
        self.fold_sizes().into_iter().map(|v| n - v).collect()
    }
}

/// Checks that every training partition has at least two rows.
pub fn check_scalable(part: &Partitioning) -> std::result::Result<(), PartitionViolation> {
    match part.training_sizes().into_iter().enumerate().find(|&(_, t)| t < 2) {
        Some((i, n_train)) => Err(PartitionViolation::TrainingTooSmall { fold: i + 1, n_train }),
        None => Ok(()),
    }
}

/// Row indices of each validation partition, ascending within each fold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIndex {
    sets: Vec<Vec<usize>>,
}

impl ValidationIndex {
    /// Rows (0-based) of the validation partition of 1-based fold `fold`.
    pub fn rows(&self, fold: usize) -> &[usize] {
        &self.sets[fold - 1]
    }

    pub fn n_folds(&self) -> usize {
        self.sets.len()
    }

    /// `(fold_id, rows)` pairs in ascending fold order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &[usize])> + '_ {
        self.sets.iter().enumerate().map(|(i, s)| (i + 1, s.as_slice()))
    }
}

/// One pass over the labels; rows come out sorted because they are visited in order.
pub fn build_validation_partitions(part: &Partitioning) -> ValidationIndex {
    let mut sets = vec![Vec::new(); part.p];
    for (row, &f) in part.folds.iter().enumerate() {
        sets[f].push(row);
    }
    ValidationIndex { sets }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn part(labels: &[usize], p: usize) -> Partitioning {
        Partitioning::new(labels, p).unwrap()
    }

    #[test]
    fn validation_sets_small_cases() {
        let v = build_validation_partitions(&part(&[1, 2, 1], 2));
        assert_eq!(v.rows(1), &[0, 2]);
        assert_eq!(v.rows(2), &[1]);

        let v = build_validation_partitions(&part(&[1, 2, 3], 3));
        assert_eq!((v.rows(1), v.rows(2), v.rows(3)), (&[0][..], &[1][..], &[2][..]));

        let v = build_validation_partitions(&part(&[1, 1, 1, 2], 2));
        assert_eq!(v.rows(1), &[0, 1, 2]);
        assert_eq!(v.rows(2), &[3]);
    }

    #[test]
    fn validity_clauses() {
        assert_eq!(
            validate_partitioning(&[1, 3, 1], 3),
            Err(PartitionViolation::EmptyFold { fold: 2 })
        );
        assert_eq!(validate_partitioning(&[1, 2], 2), Ok(()));
        assert_eq!(
            validate_partitioning(&[1, 2, 0], 2),
            Err(PartitionViolation::LabelOutOfRange { row: 2, label: 0, p: 2 })
        );
        assert_eq!(
            validate_partitioning(&[1, 1, 1], 1),
            Err(PartitionViolation::TooFewFolds { p: 1 })
        );
        assert_eq!(
            validate_partitioning(&[1, 2], 3),
            Err(PartitionViolation::MoreFoldsThanSamples { p: 3, n: 2 })
        );
        assert!(matches!(
            Partitioning::new(&[1, 1], 2),
            Err(Error::InvalidPartition(PartitionViolation::EmptyFold { fold: 2 }))
        ));
    }

    #[test]
    fn scalability() {
        assert_eq!(check_scalable(&part(&[1, 2, 3], 3)), Ok(()));
        assert_eq!(
            check_scalable(&part(&[1, 2], 2)),
            Err(PartitionViolation::TrainingTooSmall { fold: 1, n_train: 1 })
        );
        assert_eq!(
            check_scalable(&part(&[1, 1, 1, 2], 2)),
            Err(PartitionViolation::TrainingTooSmall { fold: 1, n_train: 1 })
        );
    }

    fn labeling() -> impl Strategy<Value = (Vec<usize>, usize)> {
        (2usize..8)
            .prop_flat_map(|p| (Just(p), p..40, any::<u64>()))
            .prop_map(|(p, n, seed)| {
                use rand::{seq::SliceRandom, Rng, SeedableRng};
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                // every fold at least once, the rest uniform, then shuffled
                let mut labels: Vec<usize> = (1..=p).chain((p..n).map(|_| rng.random_range(1..=p))).collect();
                labels.shuffle(&mut rng);
                (labels, p)
            })
    }

    proptest! {
        #[test]
        fn sizes_sum_identities((labels, p) in labeling()) {
            let part = part(&labels, p);
            let n = labels.len();
            let v = build_validation_partitions(&part);
            prop_assert_eq!(v.iter().map(|(_, r)| r.len()).sum::<usize>(), n);
            prop_assert_eq!(part.training_sizes().iter().sum::<usize>(), n * (p - 1));
            for (fold, rows) in v.iter() {
                prop_assert!(rows.windows(2).all(|w| w[0] < w[1]));
                for &r in rows {
                    prop_assert_eq!(labels[r], fold);
                }
            }
        }

        #[test]
        fn relabeling_permutes_sets((labels, p) in labeling(), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut perm: Vec<usize> = (1..=p).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let relabeled: Vec<usize> = labels.iter().map(|&l| perm[l - 1]).collect();
            let a = build_validation_partitions(&part(&labels, p));
            let b = build_validation_partitions(&part(&relabeled, p));
            for fold in 1..=p {
                prop_assert_eq!(a.rows(fold), b.rows(perm[fold - 1]));
            }
        }
    }
}
