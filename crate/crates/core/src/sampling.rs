//! Seeded random families.
//!
//! All randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`.
//! Sharded runs give shard `s` the ChaCha stream `s` of that seed, so a run
//! is reproducible regardless of how shards are scheduled on threads.

use rand::seq::index;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cube::{Family, Vertex};
use crate::error::{Error, Result};

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x5eed_cafe;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Each vertex independently with probability 1/2.
pub fn random_family<R: RngCore>(n: u32, rng: &mut R) -> Result<Family> {
    let empty = Family::empty(n)?;
    let mut words: Vec<u64> = (0..empty.words().len()).map(|_| rng.next_u64()).collect();
    if n < 6 {
        words[0] &= (1u64 << (1u32 << n)) - 1;
    }
    Family::from_words(n, words)
}

/// A family of exactly `m` vertices: draw [`random_family`], then delete
/// uniformly chosen members (or add uniformly chosen non-members) until the
/// size is `m`. The result is uniform over all `m`-subsets of `P([n])`.
pub fn random_family_of_size<R: RngCore>(n: u32, m: u64, rng: &mut R) -> Result<Family> {
    let mut family = random_family(n, rng)?;
    if m > family.universe_size() {
        return Err(Error::SizeOutOfRange { size: m, n });
    }
    let size = family.size();
    if size > m {
        let members: Vec<u32> = family.iter().collect();
        for i in index::sample(rng, members.len(), (size - m) as usize) {
            family.remove(Vertex::from_code(members[i] as u64, n)?);
        }
    } else if size < m {
        let outside: Vec<u32> = family.complement().iter().collect();
        for i in index::sample(rng, outside.len(), (m - size) as usize) {
            family.insert(Vertex::from_code(outside[i] as u64, n)?);
        }
    }
    Ok(family)
}

/// Uniform size in `0..=max_size`, then [`random_family_of_size`].
pub fn random_family_up_to<R: RngCore>(n: u32, max_size: u64, rng: &mut R) -> Result<Family> {
    let m = rng.random_range(0..=max_size);
    random_family_of_size(n, m, rng)
}
