//! Sequential/parallel execution switch.
//!
//! With the `parallel` feature (on by default) [`Strategy::Parallel`] runs on
//! the rayon pool; without it every strategy degrades to the sequential path.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map_vec<T, U, F>(strategy: Strategy, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        use rayon::prelude::*;
        return items.into_par_iter().map(f).collect();
    }
    let _ = strategy;
    items.into_iter().map(f).collect()
}

/// Folds every item into an accumulator created by `init`, then merges the
/// partial accumulators with `merge`. Under the parallel strategy each rayon
/// split gets its own accumulator, so `merge` must be associative and
/// commutative.
pub fn fold_merge<T, A, I, F, M>(strategy: Strategy, items: &[T], init: I, fold: F, merge: M) -> A
where
    T: Sync,
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, &T) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        use rayon::prelude::*;
        return items
            .par_iter()
            .fold(&init, |mut acc, item| {
                fold(&mut acc, item);
                acc
            })
            .reduce(&init, &merge);
    }
    let _ = (strategy, &merge);
    let mut acc = init();
    for item in items {
        fold(&mut acc, item);
    }
    acc
}
