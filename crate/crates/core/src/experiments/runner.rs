use std::collections::BTreeMap;

use rayon::prelude::*;

use super::ExperimentError;

/// Trials handed to a worker at a time.
const CHUNK: u64 = 64;

/// Counts `f(trial)` over `0..trials` on a pool of `workers` threads.
/// Integer counts merge in any order, so the result does not depend on
/// the schedule.
pub(crate) fn tally<K, F>(trials: u64, workers: usize, f: F) -> Result<BTreeMap<K, u64>, ExperimentError>
where
    K: Ord + Send,
    F: Fn(u64) -> Result<K, ExperimentError> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| ExperimentError::Config(e.to_string()))?;
    let chunks = trials.div_ceil(CHUNK);
    pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut local = BTreeMap::new();
                for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                    *local.entry(f(t)?).or_insert(0u64) += 1;
                }
                Ok(local)
            })
            .try_reduce(BTreeMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                Ok(a)
            })
    })
}
