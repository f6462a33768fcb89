//! Execution strategy for the data-parallel loops. Without the `parallel`
//! feature every strategy runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

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
    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Order-preserving map over `0..n`.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel() {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Order-preserving map over a slice.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.map_range(items.len(), |i| f(&items[i]))
    }

    /// First `Some` in index order.
    pub fn find_first<T, R, F>(self, items: &[T], f: F) -> Option<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Option<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel() {
            return items.par_iter().map(&f).find_first(Option::is_some).flatten();
        }
        items.iter().find_map(f)
    }

    /// True when the predicate holds on every index in `0..n`.
    pub fn all_range<F>(self, n: usize, f: F) -> bool
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel() {
            return (0..n).into_par_iter().all(f);
        }
        (0..n).all(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        for e in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(e.map_range(5, |i| i * i), vec![0, 1, 4, 9, 16]);
            assert_eq!(e.find_first(&[1, 4, 6, 9], |&x| (x % 2 == 0).then_some(x)), Some(4));
            assert!(e.all_range(10, |i| i < 10));
        }
    }
}
