//! Fixed-size shards run on a rayon pool and merged in shard order.
//!
//! Shard boundaries depend only on the work size, never on the worker
//! count, and each sampled shard draws from its own ChaCha stream, so
//! reports are byte-identical for any number of threads.

use rayon::prelude::*;

use super::report::Tally;
use crate::error::{Error, Result};

/// Instances per exhaustive shard.
pub const EXHAUSTIVE_SHARD: u64 = 1 << 14;

/// Samples per sampled shard; shard `s` uses RNG stream `s`.
pub const SAMPLE_SHARD: u64 = 1 << 10;

/// Runs `work(shard, range)` over `0..total` split into `shard_size`
/// ranges and merges the tallies in order.
pub fn run<F>(total: u64, shard_size: u64, threads: Option<usize>, work: F) -> Result<Tally>
where
    F: Fn(u64, std::ops::Range<u64>) -> Result<Tally> + Sync,
{
    let shards = total.div_ceil(shard_size);
    let job = || -> Result<Tally> {
        let parts: Vec<Result<Tally>> = (0..shards)
            .into_par_iter()
            .map(|s| work(s, s * shard_size..((s + 1) * shard_size).min(total)))
            .collect();
        parts.into_iter().try_fold(Tally::default(), |acc, part| Ok(acc.merge(part?)))
    };
    match threads {
        None => job(),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Capability(format!("thread pool: {e}")))?
            .install(job),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers_every_instance_once() {
        for threads in [None, Some(1), Some(3)] {
            let t = run(1000, 64, threads, |_, range| {
                let mut t = Tally::default();
                for i in range {
                    t.instances += 1;
                    t.observe(i % 5, (i % 13) as i64);
                }
                Ok(t)
            })
            .unwrap();
            assert_eq!(t.instances, 1000);
            assert_eq!(t.witnesses[&0].min, 0);
        }
    }

    #[test]
    fn errors_propagate() {
        let r = run(10, 3, Some(2), |s, _| {
            if s == 2 {
                Err(Error::Invariant("boom".into()))
            } else {
                Ok(Tally::default())
            }
        });
        assert!(r.is_err());
    }
}
