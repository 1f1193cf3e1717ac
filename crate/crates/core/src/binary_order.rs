//! Initial segments of the binary ordering and the edge-count function
//! `F(k) = e(I_{n,k})`, which does not depend on `n`.
//!
//! `F` satisfies `F(k + 1) - F(k) = popcount(k)`: vertex `k` joins the
//! segment `[0, k)` through one edge per set bit. [`FTable::new`] checks
//! that closed form against direct edge counts before handing out values.

use crate::cube::{Family, Vertex};
use crate::error::{Error, Result};

/// Default number of entries past zero in an [`FTable`].
pub const DEFAULT_TABLE_SIZE: u64 = 1 << 20;

/// Dimension up to which the table is validated against direct edge counts.
pub const ORACLE_DIMENSION: u32 = 12;

/// `I_{n,k}`: the first `k` subsets of `[n]` in binary order, i.e. the
/// vertices with code below `k`.
pub fn initial_segment(n: u32, k: u64) -> Result<Family> {
    let empty = Family::empty(n)?;
    if k > empty.universe_size() {
        return Err(Error::SizeOutOfRange { size: k, n });
    }
    let full_words = (k / 64) as usize;
    let mut words = vec![0u64; empty.words().len()];
    words[..full_words].iter_mut().for_each(|w| *w = u64::MAX);
    if !k.is_multiple_of(64) {
        words[full_words] = (1u64 << (k % 64)) - 1;
    }
    Family::from_words(n, words)
}

/// The subcube `S_k = {x ⊆ [n] : x ⊆ [k]}`, equal to `I_{n,2^k}`.
pub fn subcube(n: u32, k: u32) -> Result<Family> {
    if k > n {
        return Err(Error::Precondition(format!("subcube dimension {k} exceeds {n}")));
    }
    initial_segment(n, 1u64 << k)
}

/// `Σ_{i<k} popcount(i)`, the closed form of `F(k)`, in `O(log k)`.
pub fn f_closed_form(k: u64) -> u64 {
    let mut total = 0;
    for b in 0..64 {
        let period = 1u128 << (b + 1);
        let half = 1u128 << b;
        let k = k as u128;
        let full = (k / period) * half;
        let rest = (k % period).saturating_sub(half);
        total += (full + rest) as u64;
        if half > k {
            break;
        }
    }
    total
}

/// Table of `F(0..=max_k)` for constant-time lookups in hot loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FTable {
    values: Vec<u64>,
}

impl FTable {
    /// Builds the table by the popcount increment after checking it against
    /// `e(I_{n,k})` for every `k <= 2^12`.
    pub fn new(max_k: u64) -> Result<Self> {
        let mut values = Vec::with_capacity(max_k as usize + 1);
        let mut acc = 0u64;
        values.push(0);
        for k in 0..max_k {
            acc = acc
                .checked_add(k.count_ones() as u64)
                .ok_or_else(|| Error::Invariant(format!("F overflows at k={k}")))?;
            values.push(acc);
        }
        let table = FTable { values };
        if let Some(k) = table.oracle_mismatch(ORACLE_DIMENSION) {
            return Err(Error::Invariant(format!("F table disagrees with e(I_{{n,{k}}})")));
        }
        Ok(table)
    }

    /// First `k` at which the table differs from a direct edge count of the
    /// initial segment in `Q_n`, if any.
    pub fn oracle_mismatch(&self, n: u32) -> Option<u64> {
        let limit = (1u64 << n).min(self.max_k());
        let mut segment = Family::empty(n).expect("oracle dimension within cap");
        for k in 0..=limit {
            if segment.internal_edges() != self.values[k as usize] {
                return Some(k);
            }
            if k < limit {
                segment.insert(Vertex::from_code(k, n).expect("k < 2^n"));
            }
        }
        None
    }

    pub fn max_k(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn try_get(&self, k: u64) -> Option<u64> {
        self.values.get(k as usize).copied()
    }

    /// `F(k)`; panics past [`FTable::max_k`].
    pub fn get(&self, k: u64) -> u64 {
        match self.values.get(k as usize) {
            Some(&v) => v,
            None => panic!("F({k}) is beyond the table (max {})", self.max_k()),
        }
    }

    fn signed(&self, k: u64) -> i64 {
        self.get(k) as i64
    }

    /// `F(x + y) - F(x) - F(y)`. At least `min(x, y)`, with equality when
    /// `y` is a power of two and `x <= y`.
    pub fn hart_gap(&self, x: u64, y: u64) -> i64 {
        self.signed(x + y) - self.signed(x) - self.signed(y)
    }

    /// `F(x+y) - F(y) - F(x) - y + 2^{n-1} - x`, defined on the region
    /// `x + y <= 2^n`, `2^{n-1} <= y <= 2^{n-1} + x`, where it is never
    /// negative. Inputs outside the region are rejected.
    pub fn hart_large_margin(&self, x: u64, y: u64, n: u32) -> Result<i64> {
        if n == 0 || n > 62 {
            return Err(Error::Precondition(format!("dimension {n} must be in [1, 62]")));
        }
        let half = 1u64 << (n - 1);
        if x + y > 2 * half || y < half || y > half + x {
            return Err(Error::Precondition(format!(
                "(x={x}, y={y}) outside x+y <= 2^{n}, 2^{} <= y <= 2^{} + x",
                n - 1,
                n - 1
            )));
        }
        Ok(self.hart_gap(x, y) - y as i64 + half as i64 - x as i64)
    }

    /// `2F(k) - 2F(2^n - k) - (2k - 2^n)n`; zero for every `k <= 2^n`.
    pub fn complement_residual(&self, k: u64, n: u32) -> Result<i64> {
        let total = 1u64 << n;
        if k > total {
            return Err(Error::SizeOutOfRange { size: k, n });
        }
        Ok(2 * self.signed(k) - 2 * self.signed(total - k) - (2 * k as i64 - total as i64) * n as i64)
    }

    pub fn complement_identity_holds(&self, k: u64, n: u32) -> Result<bool> {
        Ok(self.complement_residual(k, n)? == 0)
    }

    /// `k,F(k)` rows with a header, for `k` in `0..=max_k`.
    pub fn to_csv(&self, max_k: u64) -> String {
        let mut out = String::from("k,F(k)\n");
        for k in 0..=max_k.min(self.max_k()) {
            out.push_str(&format!("{k},{}\n", self.values[k as usize]));
        }
        out
    }
}

impl Default for FTable {
    fn default() -> Self {
        FTable::new(DEFAULT_TABLE_SIZE).expect("default F table validates")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sorts `P([n])` with the set-level comparator and returns the first `k`
    /// as element lists.
    fn brute_segment(n: u32, k: usize) -> Vec<u32> {
        let mut subsets: Vec<u32> = (0..(1u32 << n)).collect();
        subsets.sort_by(|&x, &y| {
            if x == y {
                return std::cmp::Ordering::Equal;
            }
            let top = 31 - (x ^ y).leading_zeros();
            if y >> top & 1 == 1 {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        subsets.truncate(k);
        subsets
    }

    fn brute_edges(codes: &[u32]) -> u64 {
        let mut count = 0;
        for (i, &a) in codes.iter().enumerate() {
            for &b in &codes[i + 1..] {
                if (a ^ b).count_ones() == 1 {
                    count += 1;
                }
            }
        }
        count
    }

    fn table() -> FTable {
        FTable::new(1 << 13).unwrap()
    }

    #[test]
    fn initial_segment_examples() {
        assert!(initial_segment(3, 0).unwrap().is_empty());
        let seg = initial_segment(3, 5).unwrap();
        let expected = brute_segment(3, 5);
        assert_eq!(expected, vec![0, 1, 2, 3, 4]);
        assert_eq!(seg.iter().collect::<Vec<_>>(), expected);
        for n in 1..=7 {
            for k in 0..=n {
                let s = subcube(n, k).unwrap();
                assert_eq!(s.size(), 1 << k);
                assert!(s.iter().all(|v| v >> k == 0));
            }
        }
        assert!(initial_segment(3, 9).is_err());
        assert!(subcube(3, 4).is_err());
        assert_eq!(initial_segment(7, 128).unwrap(), Family::full(7).unwrap());
        assert_eq!(initial_segment(7, 70).unwrap().size(), 70);
    }

    #[test]
    fn brute_order_matches_encoding() {
        for n in 1..=6 {
            let all = brute_segment(n, 1 << n);
            assert_eq!(all, (0..(1u32 << n)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn f_values() {
        let t = table();
        assert_eq!(t.get(4), 4);
        assert_eq!(t.get(8), 12);
        // direct count over I_{3,5} = {∅,{1},{2},{1,2},{3}}: 5 edges
        assert_eq!(brute_edges(&brute_segment(3, 5)), 5);
        assert_eq!(t.get(5), 5);
        for k in 0..=13 {
            assert_eq!(t.get(1 << k), k as u64 * (1 << k) / 2);
        }
    }

    #[test]
    fn f_independent_of_dimension() {
        let t = table();
        for n in 0..=8 {
            for k in 0..=(1u64 << n) {
                assert_eq!(initial_segment(n, k).unwrap().internal_edges(), t.get(k));
            }
        }
        assert_eq!(t.oracle_mismatch(ORACLE_DIMENSION), None);
    }

    #[test]
    fn closed_form_matches_table() {
        let t = table();
        for k in 0..=t.max_k() {
            assert_eq!(f_closed_form(k), t.get(k));
        }
        assert_eq!(f_closed_form(1 << 40), 40 << 39);
    }

    #[test]
    fn hart_gap_examples() {
        let t = table();
        for y in [0, 1, 5, 64] {
            assert_eq!(t.hart_gap(0, y), 0);
        }
        assert_eq!(t.hart_gap(2, 2), 2);
        // F(8) - F(3) - F(5) = 12 - 2 - 5
        assert_eq!(t.hart_gap(3, 5), 5);
        assert!(t.hart_gap(3, 5) >= 3);
    }

    #[test]
    fn hart_large_margin_examples() {
        let t = table();
        for n in 1..=10 {
            assert_eq!(t.hart_large_margin(0, 1 << (n - 1), n).unwrap(), 0);
        }
        // x=1, y=3, n=2: F(4)-F(3)-F(1)-3+2-1 = 4-2-0-2 = 0
        assert_eq!(t.hart_large_margin(1, 3, 2).unwrap(), 0);
        // x=3, y=5, n=3: F(8)-F(5)-F(3)-5+4-3 = 12-5-2-4 = 1
        assert_eq!(t.hart_large_margin(3, 5, 3).unwrap(), 1);
        assert!(t.hart_large_margin(2, 3, 2).is_err());
        assert!(t.hart_large_margin(4, 5, 3).is_err());
        assert!(t.hart_large_margin(0, 1, 2).is_err());
        assert!(t.hart_large_margin(1, 6, 3).is_err());
        // F(5)-F(4)-F(1)-4+4-1 = 5-4-0-1
        assert_eq!(t.hart_large_margin(1, 4, 3).unwrap(), 0);
    }

    #[test]
    fn complement_identity_examples() {
        let t = table();
        for n in 1..=10 {
            assert_eq!(t.complement_residual(1 << (n - 1), n).unwrap(), 0);
            assert_eq!(2 * t.get(1 << n), n as u64 * (1 << n));
        }
        // 2F(3) - 2F(5) = 4 - 10 = -6 = (6 - 8) * 3
        assert_eq!(2 * t.get(3) as i64 - 2 * t.get(5) as i64, -6);
        assert!(t.complement_identity_holds(3, 3).unwrap());
        assert!(t.complement_residual(9, 3).is_err());
    }

    #[test]
    fn segment_and_image_are_far_apart() {
        for n in 2..=9 {
            for k in 0..=(1u64 << (n - 2)) {
                let b = initial_segment(n, k).unwrap();
                let image = b.antipodal_image();
                assert_eq!(b.counts(&image).unwrap().intersection, 0);
                let both = b.union(&image).unwrap();
                assert_eq!(both.internal_edges(), 2 * b.internal_edges(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn csv_dump() {
        let t = table();
        assert_eq!(t.to_csv(3), "k,F(k)\n0,0\n1,0\n2,1\n3,2\n");
    }
}
