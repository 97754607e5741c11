//! Execution policy for data-parallel loops.

use crate::vector::Vector;

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

pub fn map_collect<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Sum of `f(item)` over all items. The result does not depend on the schedule.
pub fn sum_vectors<T, K, F>(exec: Exec, items: &[T], f: F) -> Vector<K>
where
    T: Sync,
    K: Ord + Clone + Send,
    F: Fn(&T) -> Vector<K> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return items
            .par_iter()
            .fold(Vector::zero, |mut acc, it| {
                acc += f(it);
                acc
            })
            .reduce(Vector::zero, |a, b| a + b);
    }
    let _ = exec;
    let mut acc = Vector::zero();
    for it in items {
        acc += f(it);
    }
    acc
}

/// First item (in input order) for which `f` returns `Some`.
pub fn find_first<T, R, F>(exec: Exec, items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).find_first(|r| r.is_some()).flatten();
    }
    let _ = exec;
    items.iter().find_map(f)
}
