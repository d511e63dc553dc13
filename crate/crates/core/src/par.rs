//! Index-ordered maps over independent jobs.
//!
//! With the `parallel` feature the jobs run on the rayon pool; without it they
//! run in order on the calling thread. Results are always returned in index
//! order, so reports do not depend on scheduling.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    /// Parallel when the `parallel` feature is enabled, sequential otherwise.
    #[default]
    Parallel,
}

impl Strategy {
    pub fn is_parallel(self) -> bool {
        self == Strategy::Parallel && cfg!(feature = "parallel")
    }
}

/// `(0..count).map(job)` under the given strategy.
pub fn map_indexed<T, F>(count: usize, strategy: Strategy, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy == Strategy::Parallel {
        use rayon::prelude::*;
        return (0..count).into_par_iter().map(job).collect();
    }
    let _ = strategy;
    (0..count).map(job).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_and_keep_order() {
        let seq = map_indexed(100, Strategy::Sequential, |i| i * i);
        let par = map_indexed(100, Strategy::Parallel, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq[7], 49);
    }
}
