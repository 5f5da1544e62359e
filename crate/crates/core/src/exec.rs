//! Execution mode for batch work (restarts, instance grids).

/// How independent jobs are executed.
///
/// `Parallel` uses the rayon pool when the `parallel` feature is enabled and
/// silently runs sequentially otherwise. Results never depend on the mode:
/// reductions pick the lowest job index on ties.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Runs `f` over `0..count`, keeping results in index order.
    pub fn map<T, F>(self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..count).into_par_iter().map(f).collect()
            }
            _ => (0..count).map(f).collect(),
        }
    }

    /// Number of jobs worth launching at once.
    pub fn width(self) -> usize {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => rayon::current_num_threads().max(1),
            _ => 1,
        }
    }
}
