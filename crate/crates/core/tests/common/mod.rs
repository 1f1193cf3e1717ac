//! Slow, obviously-correct reference computations shared by the
//! integration tests. Families are plain `Vec<bool>` membership tables
//! indexed by vertex code; nothing here touches the word-level code.

#![allow(dead_code)]

use cubeiso::Family;

pub type Set = Vec<bool>;

pub fn to_set(a: &Family) -> Set {
    (0..a.universe_size() as u32).map(|v| a.contains_code(v)).collect()
}

pub fn from_members(n: u32, members: impl IntoIterator<Item = u32>) -> Set {
    let mut set = vec![false; 1 << n];
    for v in members {
        set[v as usize] = true;
    }
    set
}

pub fn size(set: &Set) -> u64 {
    set.iter().filter(|&&b| b).count() as u64
}

pub fn dimension(set: &Set) -> u32 {
    set.len().trailing_zeros()
}

/// Unordered pairs `{u, v}` in the set with `u ^ v` a single bit.
pub fn edges(set: &Set) -> u64 {
    let mut count = 0;
    for u in 0..set.len() {
        for v in u + 1..set.len() {
            if set[u] && set[v] && (u ^ v).is_power_of_two() {
                count += 1;
            }
        }
    }
    count
}

/// Same count in `O(n 2^n)`, for larger dimensions.
pub fn edges_fast(set: &Set) -> u64 {
    let n = dimension(set);
    let mut count = 0;
    for v in 0..set.len() {
        for d in 0..n {
            let w = v ^ (1 << d);
            if w > v && set[v] && set[w] {
                count += 1;
            }
        }
    }
    count
}

pub fn boundary(set: &Set) -> u64 {
    let n = dimension(set);
    let mut count = 0;
    for v in 0..set.len() {
        for d in 0..n {
            if set[v] != set[v ^ (1 << d)] {
                count += 1;
            }
        }
        // each boundary edge is seen from both ends
    }
    count / 2
}

pub fn antipode(set: &Set, v: usize) -> usize {
    v ^ (set.len() - 1)
}

/// `|A ∩ Ā|`
pub fn self_antipodal(set: &Set) -> u64 {
    (0..set.len()).filter(|&v| set[v] && set[antipode(set, v)]).count() as u64
}

pub fn potential(set: &Set) -> u64 {
    2 * edges_fast(set) + self_antipodal(set)
}

pub fn is_antipodal(set: &Set) -> bool {
    (0..set.len()).all(|v| set[v] == set[antipode(set, v)])
}

/// `F(k)` by building the first `k` vertices in binary order and counting
/// edges directly.
pub fn f_direct(k: u64) -> u64 {
    let n = 64 - k.saturating_sub(1).leading_zeros();
    let set = from_members(n, 0..k as u32);
    edges_fast(&set)
}

/// `F(0..=max)` by adding vertices in binary order one at a time and
/// counting their neighbours already present.
pub fn f_incremental(max: u64) -> Vec<u64> {
    let n = 64 - max.leading_zeros();
    let mut present = vec![false; 1 << n];
    let mut out = vec![0u64];
    let mut edges = 0;
    for v in 0..max as usize {
        edges += (0..n).filter(|&d| present[v ^ (1 << d)]).count() as u64;
        present[v] = true;
        out.push(edges);
    }
    out
}

/// Vertices `x ⊆ [n]` in binary order, sorted by comparing the largest
/// element of the symmetric difference.
pub fn binary_order(n: u32) -> Vec<u32> {
    let mut all: Vec<u32> = (0..1u32 << n).collect();
    all.sort_by(|&x, &y| {
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
    all
}

/// `I_{n,k} ∪ Ī_{n,k}` built from the sorted order.
pub fn extremal(n: u32, half: u64) -> Set {
    let order = binary_order(n);
    let full = (1u32 << n) - 1;
    let mut set = vec![false; 1 << n];
    for &v in &order[..half as usize] {
        set[v as usize] = true;
        set[(v ^ full) as usize] = true;
    }
    set
}

/// Members with (`upper`) or without element `coord`, re-indexed over the
/// other `n - 1` elements.
pub fn section(set: &Set, coord: u32, upper: bool) -> Set {
    let n = dimension(set);
    let mut out = Vec::with_capacity(set.len() / 2);
    for (v, &member) in set.iter().enumerate() {
        if (v >> (coord - 1) & 1 == 1) == upper {
            out.push((v, member));
        }
    }
    // `out` is already in increasing order of the remaining bits
    debug_assert_eq!(out.len(), 1 << (n - 1));
    out.into_iter().map(|(_, b)| b).collect()
}

pub fn intersection(a: &Set, b: &Set) -> u64 {
    a.iter().zip(b).filter(|(x, y)| **x && **y).count() as u64
}

/// `|A ∩ B̄|`
pub fn with_antipodal(a: &Set, b: &Set) -> u64 {
    (0..a.len()).filter(|&v| a[v] && b[antipode(b, v)]).count() as u64
}
