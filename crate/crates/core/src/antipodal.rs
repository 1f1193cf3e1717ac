//! Antipodal families: the extremal construction `I_{n,k} ∪ Ī_{n,k}`,
//! exhaustive enumeration, and seeded sampling.
//!
//! Antipodal pairs `{v, 2^n - 1 - v}` are represented by their smaller code
//! `v < 2^{n-1}`. Under the vertex encoding these representatives are
//! exactly the lower half of the cube, so a pair-inclusion mask is also the
//! low half of the family's membership vector.

use rand::seq::index;
use rand::RngCore;

use crate::binary_order::initial_segment;
use crate::cube::{Family, Vertex};
use crate::error::{Error, Result};
use crate::sampling::rng_for;

/// Largest `n` enumerated exhaustively without an explicit override.
pub const EXHAUSTIVE_MAX_DIMENSION: u32 = 5;

/// Largest `n` whose pair masks fit a `u64` counter.
pub const ENUMERABLE_MAX_DIMENSION: u32 = 6;

/// The antipodal pairs of `Q_n`, indexed by representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairIndex {
    n: u32,
}

impl PairIndex {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("Q_0 has a self-antipodal vertex".into()));
        }
        Ok(PairIndex { n })
    }

    /// `2^{n-1}`
    pub fn len(&self) -> u64 {
        1u64 << (self.n - 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn representative(&self, v: Vertex) -> u32 {
        v.code().min(v.antipode(self.n).code())
    }

    /// `(v, v̄)` for representative `v`.
    pub fn pair(&self, representative: u32) -> (Vertex, Vertex) {
        assert!((representative as u64) < self.len(), "not a representative");
        let v = Vertex::from_code(representative as u64, self.n).expect("in range");
        (v, v.antipode(self.n))
    }

    /// The antipodal family holding pair `v` iff bit `v` of `mask` is set.
    /// Requires `n <= 6`.
    pub fn family_from_mask(&self, mask: u64) -> Family {
        Family::from_small_word(self.n, self.word_from_mask(mask))
    }

    /// Membership word of [`PairIndex::family_from_mask`].
    pub fn word_from_mask(&self, mask: u64) -> u64 {
        assert!(self.n <= ENUMERABLE_MAX_DIMENSION);
        let vertices = 1u32 << self.n;
        let low = mask & (u64::MAX >> (64 - vertices / 2));
        low | (low.reverse_bits() >> (64 - vertices))
    }
}

fn check_even_size(n: u32, m: u64) -> Result<()> {
    if !m.is_multiple_of(2) {
        return Err(Error::OddSize(m));
    }
    if n > 63 || m > 1u64 << n {
        return Err(Error::SizeOutOfRange { size: m, n });
    }
    Ok(())
}

/// `I_{n,m/2} ∪ Ī_{n,m/2}`: the codes below `m/2` and their antipodes, i.e.
/// the first and last `m/2` vertices.
pub fn extremal_family(n: u32, m: u64) -> Result<Family> {
    check_even_size(n, m)?;
    let segment = initial_segment(n, m / 2)?;
    segment.union(&segment.antipodal_image())
}

/// `|∂(I_{n,m/2} ∪ Ī_{n,m/2})|`, the lower bound on the edge boundary of an
/// antipodal family of size `m`.
pub fn theorem_rhs(n: u32, m: u64) -> Result<u64> {
    Ok(extremal_family(n, m)?.edge_boundary())
}

/// `(m, |∂ extremal_family(n, m)|)` for every even `m`, computed by growing
/// the nested chain one pair at a time in `O(n 2^n)` total.
pub fn extremal_profile(n: u32) -> Result<Vec<(u64, u64)>> {
    let pairs = PairIndex::new(n)?;
    let mut family = Family::empty(n)?;
    let mut rows = Vec::with_capacity(pairs.len() as usize + 1);
    let mut internal = 0u64;
    rows.push((0, 0));
    for k in 0..pairs.len() as u32 {
        let (v, w) = pairs.pair(k);
        for vertex in [v, w] {
            internal += (0..n)
                .filter(|d| family.contains_code(vertex.code() ^ (1 << d)))
                .count() as u64;
            family.insert(vertex);
        }
        let m = 2 * (k as u64 + 1);
        rows.push((m, n as u64 * m - 2 * internal));
    }
    Ok(rows)
}

/// Every antipodal family of `Q_n` in pair-mask order, for
/// `n <= EXHAUSTIVE_MAX_DIMENSION`.
pub fn enumerate_antipodal(n: u32) -> Result<impl Iterator<Item = Family>> {
    if n > EXHAUSTIVE_MAX_DIMENSION {
        return Err(Error::Capability(format!(
            "exhaustive antipodal enumeration stops at n={EXHAUSTIVE_MAX_DIMENSION}, got n={n}; use sampling"
        )));
    }
    let total = antipodal_mask_count(n)?;
    enumerate_antipodal_range(n, 0..total)
}

/// `2^{2^{n-1}}`, the number of antipodal families, for `n <= 6`.
pub fn antipodal_mask_count(n: u32) -> Result<u64> {
    let pairs = PairIndex::new(n)?;
    if n > ENUMERABLE_MAX_DIMENSION {
        return Err(Error::Capability(format!("antipodal family count at n={n} overflows")));
    }
    Ok(1u64 << pairs.len())
}

/// The antipodal families whose pair masks lie in `masks`; one shard of the
/// full enumeration.
pub fn enumerate_antipodal_range(
    n: u32,
    masks: std::ops::Range<u64>,
) -> Result<impl Iterator<Item = Family>> {
    let pairs = PairIndex::new(n)?;
    if n > ENUMERABLE_MAX_DIMENSION {
        return Err(Error::Capability(format!("cannot enumerate antipodal families at n={n}")));
    }
    Ok(masks.map(move |mask| pairs.family_from_mask(mask)))
}

/// A uniformly random antipodal family of size `m`: a uniform `(m/2)`-subset
/// of the `2^{n-1}` antipodal pairs.
pub fn sample_antipodal<R: RngCore>(n: u32, m: u64, rng: &mut R) -> Result<Family> {
    check_even_size(n, m)?;
    let pairs = PairIndex::new(n)?;
    let mut family = Family::empty(n)?;
    for rep in index::sample(rng, pairs.len() as usize, (m / 2) as usize) {
        let (v, w) = pairs.pair(rep as u32);
        family.insert(v);
        family.insert(w);
    }
    Ok(family)
}

/// [`sample_antipodal`] driven by stream 0 of `seed`.
pub fn sample_antipodal_seeded(n: u32, m: u64, seed: u64) -> Result<Family> {
    sample_antipodal(n, m, &mut rng_for(seed, 0))
}

/// `extremal_family(n, m)` for `m = 0, 2, ..., 2^n`; each contains the last.
pub fn nested_chain(n: u32) -> Result<Vec<Family>> {
    let top = if n == 0 { 0 } else { 1u64 << n };
    (0..=top).step_by(2).map(|m| extremal_family(n, m)).collect()
}
