//! Subsets of {1,..,n} as bit masks, with colex ranking/unranking and the
//! lexicographic order used for initial segments.
//!
//! Element i of the ground set lives at bit i-1. On masks of equal
//! popcount, colexicographic order coincides with numeric order of the mask
//! value, which is what makes the bit-vector indexing cheap.

use crate::binom::binom;
use crate::error::{Error, Result};
use std::cmp::Ordering;

/// Hard upper limit on the ground set size for exact-mode families.
pub const HARD_MAX_N: u32 = 34;

/// Default exact-mode limit; drivers may raise it up to [`HARD_MAX_N`].
pub const DEFAULT_MAX_N: u32 = 28;

/// One subset of {1,..,n}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SetMask {
    pub bits: u64,
    pub n: u32,
}

impl SetMask {
    pub fn new(bits: u64, n: u32) -> Result<Self> {
        if n > HARD_MAX_N {
            return Err(Error::capacity(format!("n = {n} exceeds hard limit {HARD_MAX_N}")));
        }
        if bits & !low_mask(n) != 0 {
            return Err(Error::input(format!("mask {bits:#x} has bits above n = {n}")));
        }
        Ok(SetMask { bits, n })
    }

    /// Build from 1-based elements.
    pub fn from_elements(elems: &[u32], n: u32) -> Result<Self> {
        let mut bits = 0u64;
        for &e in elems {
            if e == 0 || e > n {
                return Err(Error::input(format!("element {e} outside 1..={n}")));
            }
            bits |= 1 << (e - 1);
        }
        SetMask::new(bits, n)
    }

    pub fn card(&self) -> u32 {
        self.bits.count_ones()
    }

    /// 1-based elements in increasing order.
    pub fn elements(&self) -> Vec<u32> {
        bit_positions(self.bits).into_iter().map(|p| p + 1).collect()
    }
}

/// Mask with the low n bits set.
pub fn low_mask(n: u32) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// 0-based positions of the set bits, ascending.
pub fn bit_positions(mut bits: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(bits.count_ones() as usize);
    while bits != 0 {
        let p = bits.trailing_zeros();
        out.push(p);
        bits &= bits - 1;
    }
    out
}

/// Colex rank of a k-element mask among all k-element subsets.
///
/// With set bit positions p_1 < p_2 < ... < p_k, the rank is
/// sum_i C(p_i, i).
pub fn colex_rank(mut bits: u64) -> u64 {
    let mut rank = 0u64;
    let mut i = 1u32;
    while bits != 0 {
        let p = bits.trailing_zeros();
        rank += binom(p, i);
        i += 1;
        bits &= bits - 1;
    }
    rank
}

/// Inverse of [`colex_rank`]: the k-element subset of {1,..,n} at colex
/// rank r.
pub fn colex_unrank(mut r: u64, n: u32, k: u32) -> Result<u64> {
    if k > n {
        return Err(Error::input(format!("k = {k} > n = {n}")));
    }
    if r >= binom(n, k) {
        return Err(Error::input(format!(
            "rank {r} out of range for C({n},{k}) = {}",
            binom(n, k)
        )));
    }
    let mut bits = 0u64;
    let mut c = n;
    for i in (1..=k).rev() {
        // Largest c with C(c, i) <= r.
        while binom(c, i) > r {
            c -= 1;
        }
        bits |= 1u64 << c;
        r -= binom(c, i);
    }
    Ok(bits)
}

/// Next mask with the same popcount in increasing numeric (= colex) order.
/// Gosper's hack; the caller bounds the walk.
pub fn next_same_popcount(v: u64) -> u64 {
    let c = v & v.wrapping_neg();
    let r = v + c;
    (((r ^ v) >> 2) / c) | r
}

/// Lexicographic comparison of two equal-size sets: S precedes T when the
/// smallest element of the symmetric difference lies in S.
pub fn lex_compare(s: u64, t: u64) -> Ordering {
    let diff = s ^ t;
    if diff == 0 {
        return Ordering::Equal;
    }
    let low = diff & diff.wrapping_neg();
    if s & low != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Lexicographic rank of a k-element subset of {1,..,n}.
pub fn lex_rank(bits: u64, n: u32, k: u32) -> u64 {
    let elems = bit_positions(bits); // 0-based
    let mut rank = 0u64;
    let mut prev = 0u32; // 1-based element of the previous slot
    for (idx, &p) in elems.iter().enumerate() {
        let e = p + 1;
        let i = idx as u32 + 1;
        for c in prev + 1..e {
            rank += binom(n - c, k - i);
        }
        prev = e;
    }
    rank
}

/// In-place lexicographic successor on a sorted vector of 1-based elements.
/// Returns false when the input is the lex-largest k-set.
pub fn lex_next(elems: &mut [u32], n: u32) -> bool {
    let k = elems.len();
    for i in (0..k).rev() {
        let cap = n - (k - 1 - i) as u32;
        if elems[i] < cap {
            elems[i] += 1;
            for j in i + 1..k {
                elems[j] = elems[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub fn mask_of_elements(elems: &[u32]) -> u64 {
    elems.iter().fold(0u64, |m, &e| m | (1u64 << (e - 1)))
}
