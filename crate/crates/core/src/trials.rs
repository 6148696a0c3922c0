//! Seeded, optionally parallel trial execution.

use rayon::prelude::*;

use crate::field::DipRng;

/// Runs `f` once per trial with an independent [`DipRng::for_trial`] stream.
///
/// Results come back in trial order, so the output depends only on `seed`
/// and `trials`, never on `threads`. `threads == 0` uses rayon's default
/// pool size; `threads == 1` runs on the calling thread.
pub fn run_trials<T, F>(trials: u64, seed: u64, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut DipRng) -> T + Sync,
{
    let one = |i: u64| f(i, &mut DipRng::for_trial(seed, i));
    if threads == 1 {
        return (0..trials).map(one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| (0..trials).into_par_iter().map(one).collect())
}
