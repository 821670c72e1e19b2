//! Data-parallel helpers. With the `parallel` feature these fan out over rayon;
//! without it they run sequentially with identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map over a slice, preserving order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Map over 0..n, preserving order.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Order-independent reduction: values are collected first and summed
/// sequentially so results do not depend on the thread count.
pub fn sum_pairs<T, F>(items: &[T], f: F) -> (f64, f64)
where
    T: Sync,
    F: Fn(&T) -> (f64, f64) + Sync + Send,
{
    map(items, f).into_iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y))
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
