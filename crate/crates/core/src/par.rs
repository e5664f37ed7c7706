//! Data-parallel execution with a sequential fallback.
//!
//! Every sweep in the crate is a pure per-point computation collected in
//! index order, so the parallel and sequential schedules produce bitwise
//! identical output. Without the `parallel` feature, [`Execution::Parallel`]
//! silently runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a sweep distributes its independent points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if is_parallel_available() {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[inline]
pub fn is_parallel_available() -> bool {
    cfg!(feature = "parallel")
}

impl Execution {
    /// Evaluates `f(0..count)` and collects the results in index order.
    pub fn map_indexed<U, F>(self, count: usize, f: F) -> Vec<U>
    where
        U: Send,
        F: Fn(usize) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..count).into_par_iter().map(f).collect(),
            _ => (0..count).map(f).collect(),
        }
    }

    /// Maps a slice, preserving order.
    pub fn map_slice<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules_agree_and_preserve_order() {
        let f = |i: usize| (i as f64).sqrt().sin();
        let seq = Execution::Sequential.map_indexed(1000, f);
        let par = Execution::Parallel.map_indexed(1000, f);
        assert_eq!(seq.len(), 1000);
        assert!(seq.iter().zip(&par).all(|(a, b)| a.to_bits() == b.to_bits()));

        let items: Vec<u32> = (0..257).collect();
        let doubled = Execution::Parallel.map_slice(&items, |x| x * 2);
        assert_eq!(doubled, items.iter().map(|x| x * 2).collect::<Vec<_>>());
    }

    #[test]
    fn default_tracks_feature() {
        assert_eq!(
            Execution::default() == Execution::Parallel,
            is_parallel_available()
        );
    }
}
