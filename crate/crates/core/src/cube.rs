//! Families of subsets of `[n]` stored as membership bitvectors over the
//! vertices of the cube `Q_n`, with the exact counting primitives everything
//! else is built from.
//!
//! A subset `x ⊆ [n]` is encoded as the integer with bit `i - 1` set iff
//! `i ∈ x`. Under this encoding the binary ordering of subsets (`x < y` iff
//! the largest element of `x Δ y` lies in `y`) is plain integer order, so
//! initial segments are integer intervals `[0, k)`.
//!
//! Vertex `v` of a family lives at bit `v % 64` of word `v / 64`. For
//! `n < 6` there is a single word with only the low `2^n` bits in use.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, Ordering};

use crate::error::{Error, Result};

/// Largest dimension the `u32` vertex codes can address.
pub const HARD_MAX_DIMENSION: u32 = 31;

/// Default for [`dimension_cap`]: a `2^28`-bit family is 32 MiB.
pub const DEFAULT_DIMENSION_CAP: u32 = 28;

static DIMENSION_CAP: AtomicU32 = AtomicU32::new(DEFAULT_DIMENSION_CAP);

/// Current process-wide maximum dimension accepted by family constructors.
pub fn dimension_cap() -> u32 {
    DIMENSION_CAP.load(Ordering::Relaxed)
}

pub fn set_dimension_cap(cap: u32) -> Result<()> {
    if cap > HARD_MAX_DIMENSION {
        return Err(Error::DimensionTooLarge { n: cap, cap: HARD_MAX_DIMENSION });
    }
    DIMENSION_CAP.store(cap, Ordering::Relaxed);
    Ok(())
}

fn check_dimension(n: u32) -> Result<()> {
    let cap = dimension_cap();
    if n > cap {
        return Err(Error::DimensionTooLarge { n, cap });
    }
    Ok(())
}

/// Bit positions `p` of a word whose bit `d` is clear, for `d < 6`.
const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

fn word_count(n: u32) -> usize {
    if n < 6 {
        1
    } else {
        1usize << (n - 6)
    }
}

/// Mask of the bits in use in the single word of a family with `n < 6`.
fn small_mask(n: u32) -> u64 {
    debug_assert!(n < 6);
    (1u64 << (1u32 << n)) - 1
}

/// A subset of `[n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(u32);

impl Vertex {
    pub fn from_code(code: u64, n: u32) -> Result<Self> {
        if n > HARD_MAX_DIMENSION || code >> n != 0 {
            return Err(Error::VertexOutOfRange { code, n });
        }
        Ok(Vertex(code as u32))
    }

    /// Encodes a set of elements of `[n]` (1-based). Duplicates are ignored.
    pub fn encode(elements: &[u32], n: u32) -> Result<Self> {
        let mut code = 0u32;
        for &element in elements {
            if element == 0 || element > n || element > HARD_MAX_DIMENSION {
                return Err(Error::ElementOutOfRange { element, n });
            }
            code |= 1 << (element - 1);
        }
        Ok(Vertex(code))
    }

    /// The elements of the subset, ascending and 1-based.
    pub fn decode(self) -> Vec<u32> {
        (0..32).filter(|b| self.0 >> b & 1 == 1).map(|b| b + 1).collect()
    }

    pub fn code(self) -> u32 {
        self.0
    }

    /// The complement `[n] \ x`.
    pub fn antipode(self, n: u32) -> Vertex {
        Vertex(self.0 ^ full_code(n))
    }
}

fn full_code(n: u32) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Which section of a family: members containing the coordinate or not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Upper,
    Lower,
}

/// A family `A ⊆ P([n])`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Family {
    n: u32,
    words: Vec<u64>,
}

/// Summary counts of a family, as reported by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeProfile {
    pub n: u32,
    pub size: u64,
    pub internal: u64,
    pub boundary: u64,
    pub potential: u64,
}

/// Popcount-based counts of boolean combinations of two families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyCounts {
    /// `|A ∩ B|`
    pub intersection: u64,
    /// `|A ∪ B|`
    pub union: u64,
    /// `|A ∩ B^c|`, with `B^c` the complement in `P([n])`.
    pub difference: u64,
    /// `|A ∩ B̄|`, with `B̄` the antipodal image of `B`.
    pub with_antipodal: u64,
}

impl Family {
    pub fn empty(n: u32) -> Result<Self> {
        check_dimension(n)?;
        Ok(Family { n, words: vec![0; word_count(n)] })
    }

    pub fn full(n: u32) -> Result<Self> {
        let mut family = Self::empty(n)?;
        family.words.iter_mut().for_each(|w| *w = u64::MAX);
        family.clear_padding();
        Ok(family)
    }

    pub fn from_codes<I: IntoIterator<Item = u32>>(n: u32, codes: I) -> Result<Self> {
        let mut family = Self::empty(n)?;
        for code in codes {
            family.insert(Vertex::from_code(code as u64, n)?);
        }
        Ok(family)
    }

    /// Builds a family from its raw little-endian words. Bits beyond `2^n`
    /// must be clear.
    pub fn from_words(n: u32, words: Vec<u64>) -> Result<Self> {
        check_dimension(n)?;
        if words.len() != word_count(n) {
            return Err(Error::Parse(format!(
                "expected {} words for n={n}, got {}",
                word_count(n),
                words.len()
            )));
        }
        if n < 6 && words[0] & !small_mask(n) != 0 {
            return Err(Error::Parse(format!("bits set beyond 2^{n}")));
        }
        Ok(Family { n, words })
    }

    /// Family of dimension `n <= 6` from its single membership word,
    /// without the dimension-cap lookup. Used by the exhaustive enumerators.
    pub(crate) fn from_small_word(n: u32, word: u64) -> Family {
        debug_assert!(n <= 6 && (n == 6 || word & !small_mask(n) == 0));
        Family { n, words: vec![word] }
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    /// Number of vertices of the ambient cube, `2^n`.
    pub fn universe_size(&self) -> u64 {
        1u64 << self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn insert(&mut self, v: Vertex) {
        let code = v.0 as usize;
        assert!((code as u64) < self.universe_size(), "vertex outside Q_{}", self.n);
        self.words[code / 64] |= 1 << (code % 64);
    }

    pub fn remove(&mut self, v: Vertex) {
        let code = v.0 as usize;
        assert!((code as u64) < self.universe_size(), "vertex outside Q_{}", self.n);
        self.words[code / 64] &= !(1 << (code % 64));
    }

    pub fn contains(&self, v: Vertex) -> bool {
        let code = v.0 as u64;
        code < self.universe_size() && self.words[(code / 64) as usize] >> (code % 64) & 1 == 1
    }

    pub fn contains_code(&self, code: u32) -> bool {
        self.contains(Vertex(code))
    }

    /// `|A|`
    pub fn size(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Member codes in ascending (binary) order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(j, &w)| {
            let base = (j as u32) << 6;
            BitIter(w).map(move |b| base + b)
        })
    }

    fn clear_padding(&mut self) {
        if self.n < 6 {
            self.words[0] &= small_mask(self.n);
        }
    }

    fn check_same_dimension(&self, other: &Family) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    /// `e(A)`: edges of `Q_n` with both endpoints in `A`.
    ///
    /// Each edge in direction `d` is counted at its endpoint with bit `d`
    /// set, so nothing is counted twice.
    pub fn internal_edges(&self) -> u64 {
        (0..self.n).map(|d| self.direction_count(d, |hi, lo| hi & lo)).sum()
    }

    /// `|∂A|`, from the handshake identity `2e(A) + |∂A| = n|A|`.
    pub fn edge_boundary(&self) -> u64 {
        self.n as u64 * self.size() - 2 * self.internal_edges()
    }

    /// `|∂A|` by counting, direction by direction, edges whose endpoints
    /// disagree on membership. Independent of [`Family::edge_boundary`].
    pub fn edge_boundary_direct(&self) -> u64 {
        (0..self.n).map(|d| self.direction_count(d, |hi, lo| hi ^ lo)).sum()
    }

    /// Sums `popcount(combine(upper, lower))` over all edges in direction
    /// `d`, where `upper`/`lower` hold membership of the endpoint with bit
    /// `d` set/clear, aligned at the upper endpoint.
    fn direction_count(&self, d: u32, combine: impl Fn(u64, u64) -> u64) -> u64 {
        if d < 6 {
            let shift = 1u32 << d;
            let upper_mask = !LOW_HALF[d as usize];
            self.words
                .iter()
                .map(|&w| (combine(w, w << shift) & upper_mask).count_ones() as u64)
                .sum()
        } else {
            let stride = 1usize << (d - 6);
            (0..self.words.len())
                .filter(|j| j & stride != 0)
                .map(|j| combine(self.words[j], self.words[j - stride]).count_ones() as u64)
                .sum()
        }
    }

    /// `Ā = {x̄ : x ∈ A}`; bit `v` of the result is bit `2^n - 1 - v` of `A`.
    pub fn antipodal_image(&self) -> Family {
        let words = if self.n < 6 {
            let len = 1u32 << self.n;
            vec![self.words[0].reverse_bits() >> (64 - len)]
        } else {
            self.words.iter().rev().map(|w| w.reverse_bits()).collect()
        };
        Family { n: self.n, words }
    }

    pub fn is_antipodal(&self) -> bool {
        *self == self.antipodal_image()
    }

    /// `A^c = P([n]) \ A`.
    pub fn complement(&self) -> Family {
        let mut out = Family { n: self.n, words: self.words.iter().map(|w| !w).collect() };
        out.clear_padding();
        out
    }

    /// The section `A_i^±` over `[n] \ {i}`, re-indexed to dimension `n - 1`
    /// by deleting coordinate `i` and shifting the higher ones down.
    pub fn section(&self, coord: u32, sign: Sign) -> Result<Family> {
        if coord == 0 || coord > self.n {
            return Err(Error::CoordinateOutOfRange { coord, n: self.n });
        }
        let d = coord - 1;
        let m = self.n - 1;
        let want = u32::from(sign == Sign::Upper);
        if m >= 6 && d >= 6 {
            let bit = d - 6;
            let words = (0..self.words.len())
                .filter(|&j| (j >> bit) as u32 & 1 == want)
                .map(|j| self.words[j])
                .collect();
            return Ok(Family { n: m, words });
        }
        let low = (1u32 << d) - 1;
        let mut out = Family { n: m, words: vec![0; word_count(m)] };
        for u in 0..(1u32 << m) {
            let v = (u & low) | ((u & !low) << 1) | (want << d);
            if self.contains_code(v) {
                out.words[(u / 64) as usize] |= 1 << (u % 64);
            }
        }
        Ok(out)
    }

    /// `|A_i^±|` without building the section.
    pub fn section_size(&self, coord: u32, sign: Sign) -> Result<u64> {
        if coord == 0 || coord > self.n {
            return Err(Error::CoordinateOutOfRange { coord, n: self.n });
        }
        let d = coord - 1;
        let upper = if d < 6 {
            let mask = !LOW_HALF[d as usize];
            self.words.iter().map(|w| (w & mask).count_ones() as u64).sum()
        } else {
            let stride = 1usize << (d - 6);
            (0..self.words.len())
                .filter(|j| j & stride != 0)
                .map(|j| self.words[j].count_ones() as u64)
                .sum()
        };
        Ok(match sign {
            Sign::Upper => upper,
            Sign::Lower => self.size() - upper,
        })
    }

    /// Both sections at `coord`, `(A_i^+, A_i^-)`.
    pub fn sections(&self, coord: u32) -> Result<(Family, Family)> {
        Ok((self.section(coord, Sign::Upper)?, self.section(coord, Sign::Lower)?))
    }

    /// Image of `A` under the cube automorphism `x ↦ π(x) Δ t`.
    ///
    /// `perm[i - 1]` is the image of element `i`, so `perm` is a permutation
    /// of `1..=n`.
    pub fn apply_automorphism(&self, perm: &[u32], translate: Vertex) -> Result<Family> {
        let n = self.n;
        if perm.len() != n as usize {
            return Err(Error::BadPermutation(format!(
                "length {} for dimension {n}",
                perm.len()
            )));
        }
        let mut seen = vec![false; n as usize];
        for &p in perm {
            if p == 0 || p > n || std::mem::replace(&mut seen[p as usize - 1], true) {
                return Err(Error::BadPermutation(format!("{perm:?} is not a bijection of [{n}]")));
            }
        }
        if translate.0 as u64 >= self.universe_size() {
            return Err(Error::VertexOutOfRange { code: translate.0 as u64, n });
        }
        let mut out = Family { n, words: vec![0; self.words.len()] };
        for v in self.iter() {
            let mut image = 0u32;
            for (b, &p) in perm.iter().enumerate() {
                image |= (v >> b & 1) << (p - 1);
            }
            out.insert(Vertex(image ^ translate.0));
        }
        Ok(out)
    }

    /// The potential `f(A) = 2e(A) + |A ∩ Ā|`.
    pub fn potential(&self) -> u64 {
        2 * self.internal_edges() + self.self_antipodal_count()
    }

    /// `|A ∩ Ā|`
    pub fn self_antipodal_count(&self) -> u64 {
        self.and_count(&self.antipodal_image())
    }

    pub fn profile(&self) -> EdgeProfile {
        let size = self.size();
        let internal = self.internal_edges();
        EdgeProfile {
            n: self.n,
            size,
            internal,
            boundary: self.n as u64 * size - 2 * internal,
            potential: 2 * internal + self.self_antipodal_count(),
        }
    }

    pub fn counts(&self, other: &Family) -> Result<FamilyCounts> {
        self.check_same_dimension(other)?;
        let intersection = self.and_count(other);
        Ok(FamilyCounts {
            intersection,
            union: self.size() + other.size() - intersection,
            difference: self.size() - intersection,
            with_antipodal: self.and_count(&other.antipodal_image()),
        })
    }

    /// `|A ∩ B|`; panics on a dimension mismatch.
    pub(crate) fn and_count(&self, other: &Family) -> u64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as u64).sum()
    }

    pub fn intersection(&self, other: &Family) -> Result<Family> {
        self.check_same_dimension(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        Ok(Family { n: self.n, words })
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        self.check_same_dimension(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        Ok(Family { n: self.n, words })
    }

    pub fn is_subset(&self, other: &Family) -> bool {
        self.n == other.n && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Number of hex digits in the serialized form: `ceil(2^n / 4)`.
    fn hex_digits(n: u32) -> usize {
        (1usize << n).div_ceil(4)
    }
}

/// Kernels on the single membership word of a family with `n <= 6`, for
/// exhaustive loops that would otherwise allocate per family.
pub(crate) mod small {
    use super::LOW_HALF;

    pub fn internal_edges(word: u64, n: u32) -> u64 {
        (0..n)
            .map(|d| (word & (word << (1u32 << d)) & !LOW_HALF[d as usize]).count_ones() as u64)
            .sum()
    }

    pub fn antipodal_image(word: u64, n: u32) -> u64 {
        word.reverse_bits() >> (64 - (1u32 << n))
    }

    pub fn potential(word: u64, n: u32) -> u64 {
        2 * internal_edges(word, n) + (word & antipodal_image(word, n)).count_ones() as u64
    }

    /// `|A_i^+| - |A_i^-|` for `coord = i`.
    pub fn section_imbalance(word: u64, coord: u32) -> i64 {
        let d = (coord - 1) as usize;
        let upper = (word & !LOW_HALF[d]).count_ones() as i64;
        2 * upper - word.count_ones() as i64
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family({self})")
    }
}

/// `n=<n> hex=<digits>`: hex digit `j` holds vertices `4j..4j+3`, lowest
/// vertex in the lowest bit of the digit.
impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const DIGITS: &[u8; 16] = b"0123456789abcdef";
        let mut hex = String::with_capacity(Self::hex_digits(self.n));
        for j in 0..Self::hex_digits(self.n) {
            let nibble = self.words[j / 16] >> (4 * (j % 16)) & 0xf;
            hex.push(DIGITS[nibble as usize] as char);
        }
        write!(f, "n={} hex={}", self.n, hex)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = || Error::Parse(format!("expected `n=<n> hex=<digits>`, got {s:?}"));
        let (n_part, hex_part) = s.trim_end_matches(['\n', '\r']).split_once(' ').ok_or_else(parse_err)?;
        let n: u32 = n_part
            .strip_prefix("n=")
            .and_then(|v| v.parse().ok())
            .filter(|v: &u32| v.to_string() == n_part[2..])
            .ok_or_else(parse_err)?;
        let hex = hex_part.strip_prefix("hex=").ok_or_else(parse_err)?;
        check_dimension(n)?;
        if hex.len() != Self::hex_digits(n) {
            return Err(Error::Parse(format!(
                "expected {} hex digits for n={n}, got {}",
                Self::hex_digits(n),
                hex.len()
            )));
        }
        let mut words = vec![0u64; word_count(n)];
        for (j, c) in hex.bytes().enumerate() {
            let nibble = match c {
                b'0'..=b'9' => c - b'0',
                b'a'..=b'f' => c - b'a' + 10,
                _ => return Err(Error::Parse(format!("invalid hex digit {:?}", c as char))),
            };
            words[j / 16] |= (nibble as u64) << (4 * (j % 16));
        }
        Family::from_words(n, words)
    }
}
