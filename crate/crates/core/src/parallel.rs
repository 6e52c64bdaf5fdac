//! Sequential / data-parallel execution switch.
//!
//! With the `parallel` feature (default) the parallel strategy runs on the
//! rayon pool; without it every strategy degrades to the sequential loop.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `0..len` in chunks, folding each chunk with `fold` from
/// `init()` and merging chunk results with `merge`.
///
/// `merge` must be associative and commutative for the parallel result to be
/// independent of scheduling.
pub fn fold_range<A, I, F, M>(exec: Execution, len: u128, init: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, u128) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        let chunk: u128 = 256;
        let n_chunks = len.div_ceil(chunk) as u64;
        return (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let lo = c as u128 * chunk;
                let hi = (lo + chunk).min(len);
                (lo..hi).fold(init(), &fold)
            })
            .reduce(&init, &merge);
    }
    let _ = (exec, &merge);
    (0..len).fold(init(), fold)
}

/// Maps `f` over `0..len`, preserving order.
pub fn map_range<T, F>(exec: Execution, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..len).map(f).collect()
}

/// Calls `f(index, chunk)` on consecutive `chunk_len`-sized chunks of `data`.
pub fn for_each_chunk_mut<T, F>(exec: Execution, data: &mut [T], chunk_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        data.par_chunks_mut(chunk_len).enumerate().for_each(|(i, c)| f(i, c));
        return;
    }
    let _ = exec;
    data.chunks_mut(chunk_len).enumerate().for_each(|(i, c)| f(i, c));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let sum = |e| fold_range(e, 10_000, || 0u128, |a, i| a + i * i, |a, b| a + b);
        assert_eq!(sum(Execution::Sequential), sum(Execution::Parallel));
        let sq = |e| map_range(e, 100, |i| i * 3);
        assert_eq!(sq(Execution::Sequential), sq(Execution::Parallel));
    }
}
