//! Execution mode for per-bidegree work.
//!
//! With the `parallel` feature (on by default) [`Exec::Parallel`] fans out
//! over a rayon pool; without it every mode runs sequentially.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Maps `g` over `items`, preserving order.
    pub fn map<T, U, G>(self, items: &[T], g: G) -> Vec<U>
    where
        T: Sync,
        U: Send,
        G: Fn(&T) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(g).collect()
            }
            _ => items.iter().map(g).collect(),
        }
    }

    /// Like [`Exec::map`] for fallible work; returns the first error in order.
    pub fn try_map<T, U, E, G>(self, items: &[T], g: G) -> Result<Vec<U>, E>
    where
        T: Sync,
        U: Send,
        E: Send,
        G: Fn(&T) -> Result<U, E> + Sync + Send,
    {
        self.map(items, g).into_iter().collect()
    }
}
