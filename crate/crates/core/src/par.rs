//! Data-parallel helpers. With the `parallel` feature these dispatch to
//! rayon; without it they run the same closures sequentially. Every helper
//! writes results by index, so output never depends on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Calls `f(chunk_index, chunk)` on consecutive `chunk`-sized pieces of `data`.
pub(crate) fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    let chunk = chunk.max(1);
    #[cfg(feature = "parallel")]
    data.par_chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
    #[cfg(not(feature = "parallel"))]
    data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
}

/// Evaluates `f(i)` for `i in 0..len` and collects in index order.
pub(crate) fn map_range<R, F>(len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Fallible variant of [`map_range`]; the first error in index order wins.
pub(crate) fn try_map_range<R, E, F>(len: usize, f: F) -> Result<Vec<R>, E>
where
    R: Send,
    E: Send,
    F: Fn(usize) -> Result<R, E> + Sync + Send,
{
    map_range(len, f).into_iter().collect()
}

/// Number of worker threads available to the helpers.
pub(crate) fn threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Sizes the global worker pool. Must run before any parallel work; a second
/// call with a different size is an error.
pub(crate) fn configure_threads(n: usize) -> Result<(), String> {
    if n == 0 {
        return Err("thread count must be at least 1".into());
    }
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            Ok(()) => Ok(()),
            Err(_) if rayon::current_num_threads() == n => Ok(()),
            Err(e) => Err(e.to_string()),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(())
    }
}
