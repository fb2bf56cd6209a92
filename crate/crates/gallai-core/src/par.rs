//! Thin switch between rayon and plain iterators.
//!
//! With the `parallel` feature (default) the range scans fan out over a
//! rayon pool; without it the same entry points run sequentially with
//! identical results, since every caller asks for order-independent
//! reductions or first-in-order matches.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Sum of `f` over `lo..hi`.
pub(crate) fn sum_over_range<F>(lo: u64, hi: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (lo..hi).into_par_iter().map(f).sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (lo..hi).map(f).sum()
    }
}

/// First `Some` produced over `lo..hi`, taking the lowest index on ties.
pub(crate) fn first_match_in_range<T, F>(lo: u64, hi: u64, f: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (lo..hi).into_par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (lo..hi).find_map(f)
    }
}

/// Independent tasks mapped over an indexed list; order of results is preserved.
pub(crate) fn map_indexed<I, T, F>(items: Vec<I>, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}
