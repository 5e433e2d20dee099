//! Data-parallel helpers.
//!
//! With the `parallel` feature (default) these run on the rayon pool;
//! without it they fall back to plain iterators. Results never depend on
//! scheduling: maps keep input order and searches return the first hit in
//! input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Order-preserving map.
#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// First `Some` in input order.
#[cfg(feature = "parallel")]
pub fn find_map_first<T, R, F>(items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    items.par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub fn find_map_first<T, R, F>(items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    items.iter().find_map(f)
}

/// Maximum of `f` over `items`, `None` when empty.
#[cfg(feature = "parallel")]
pub fn max_by_key<T, K, F>(items: &[T], f: F) -> Option<K>
where
    T: Sync,
    K: Ord + Send,
    F: Fn(&T) -> K + Sync + Send,
{
    items.par_iter().map(f).max()
}

#[cfg(not(feature = "parallel"))]
pub fn max_by_key<T, K, F>(items: &[T], f: F) -> Option<K>
where
    T: Sync,
    K: Ord + Send,
    F: Fn(&T) -> K + Sync + Send,
{
    items.iter().map(f).max()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_hit_is_in_input_order() {
        let xs: Vec<u32> = (0..10_000).collect();
        let hit = find_map_first(&xs, |&x| (x % 997 == 996).then_some(x));
        assert_eq!(hit, Some(996));
        assert_eq!(map(&xs[..3], |x| x * 2), vec![0, 2, 4]);
        assert_eq!(max_by_key(&xs, |x| x % 100), Some(99));
    }
}
