//! Data-parallel helpers with a sequential fallback.
//!
//! Hot loops (per-scale counts, per-`k` sweeps, batch checks) go through
//! [`Exec`]. With the `parallel` feature disabled every path runs
//! sequentially; results never depend on the execution mode because every
//! reduction used here is order-independent or collected in index order.

/// Execution mode for the data-parallel operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
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
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
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

    /// Maps `f` over `0..n`, preserving order.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// Map-reduce over `0..n`. `reduce` must be associative and commutative.
    pub fn map_reduce_range<R, F, D, G>(self, n: usize, map: F, identity: D, reduce: G) -> R
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
        D: Fn() -> R + Sync + Send,
        G: Fn(R, R) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(map).reduce(identity, reduce)
            }
            _ => (0..n).map(map).fold(identity(), reduce),
        }
    }

    /// True when this mode actually runs on the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = Exec::Sequential.map(&xs, |x| x * x);
        let b = Exec::Parallel.map(&xs, |x| x * x);
        assert_eq!(a, b);
        let s1 = Exec::Sequential.map_reduce_range(1000, |i| i as u64, || 0, |a, b| a + b);
        let s2 = Exec::Parallel.map_reduce_range(1000, |i| i as u64, || 0, |a, b| a + b);
        assert_eq!(s1, 499_500);
        assert_eq!(s1, s2);
    }
}
