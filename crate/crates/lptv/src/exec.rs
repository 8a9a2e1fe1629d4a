//! Choice between sequential and data-parallel execution of independent
//! work items (sweep points, sample grids, solver candidates).

/// Execution strategy for batch operations.
///
/// `Parallel` uses rayon when the `parallel` feature is enabled and falls
/// back to sequential execution otherwise. Results are always returned in
/// input order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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
    /// Maps `f` over `items`, preserving order.
    pub fn map<I, O, F>(self, items: &[I], f: F) -> Vec<O>
    where
        I: Sync,
        O: Send,
        F: Fn(&I) -> O + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// The result for the lowest index at which `f` returns `Some`.
    ///
    /// The parallel path may evaluate items past the winner but never
    /// reports a later one.
    pub fn find_first<I, O, F>(self, items: &[I], f: F) -> Option<O>
    where
        I: Sync,
        O: Send,
        F: Fn(&I) -> Option<O> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).find_first(Option::is_some).flatten()
            }
            _ => items.iter().find_map(f),
        }
    }
}
