//! Data-parallel helpers for the exhaustive sweeps. With the `parallel`
//! feature the work is spread over rayon's pool; without it, or when a
//! caller asks for [`Strategy::Sequential`], the same loops run on the
//! calling thread. Results never depend on the strategy.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    /// Falls back to sequential execution when built without `parallel`.
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

impl Strategy {
    /// Whether this strategy actually runs on several threads in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// `items.map(f)` preserving order.
pub fn map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = strategy;
    items.iter().map(f).collect()
}

/// The result of `f` on the earliest item (in slice order) for which it is
/// `Some`.
pub fn find_map_first<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return items.par_iter().find_map_first(f);
    }
    let _ = strategy;
    items.iter().find_map(f)
}

/// Sum of `f` over all items.
pub fn sum<T, F>(strategy: Strategy, items: &[T], f: F) -> u64
where
    T: Sync,
    F: Fn(&T) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        return items.par_iter().map(f).sum();
    }
    let _ = strategy;
    items.iter().map(f).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        for s in [Strategy::Sequential, Strategy::Parallel] {
            assert_eq!(map(s, &xs, |x| x * 2)[999], 1998);
            assert_eq!(
                find_map_first(s, &xs, |&x| (x % 97 == 96).then_some(x)),
                Some(96)
            );
            assert_eq!(sum(s, &xs, |&x| x), 499_500);
        }
    }
}
