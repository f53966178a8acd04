//! Ordered data-parallel map helpers.
//!
//! Every batch loop in this crate funnels through [`map_ordered`]: with the
//! `parallel` feature it fans out on rayon, otherwise it runs sequentially.
//! Output order always matches input order, so the two builds produce
//! identical results. [`map_ordered_seq`] is always available for the
//! benchmark suite to compare against.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving input order in the output.
pub fn map_ordered<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
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

/// Sequential reference path for [`map_ordered`].
pub fn map_ordered_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Map an indexed `f` over `items`, preserving input order.
///
/// The index lets per-item work derive deterministic per-item seeds.
pub fn map_indexed<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(usize, &T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let items: Vec<u64> = (0..1000).collect();
        let f = |x: &u64| x.wrapping_mul(2654435761) >> 7;
        assert_eq!(map_ordered(&items, f), map_ordered_seq(&items, f));
    }

    #[test]
    fn indexed_map_preserves_order() {
        let items = vec!["a", "b", "c"];
        let out = map_indexed(&items, |i, s| format!("{i}{s}"));
        assert_eq!(out, vec!["0a", "1b", "2c"]);
    }
}
