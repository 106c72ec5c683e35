use rayon::prelude::*;

use crate::error::{Error, Result};

/// How fold computations are scheduled. Outputs do not depend on the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Sequential,
    /// Folds are spread over a dedicated pool with this many threads.
    Threads(usize),
}

impl Execution {
    pub fn from_thread_count(threads: usize) -> Self {
        if threads <= 1 {
            Execution::Sequential
        } else {
            Execution::Threads(threads)
        }
    }

    /// Applies `f` to every item and returns results in item order.
    pub(crate) fn map<T, R, F>(self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Result<R> + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            Execution::Threads(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::Argument(format!("cannot build thread pool: {e}")))?;
                pool.install(|| items.par_iter().map(f).collect())
            }
        }
    }
}
