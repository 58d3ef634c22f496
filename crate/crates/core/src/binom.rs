//! Exact binomial coefficients.
//!
//! The small-argument table covers everything the exact-mode family code
//! needs (n fits in a machine word well past the capacity guard); the
//! big-integer variant exists for the binomial tail sums, where n can be in
//! the hundreds.

use num::BigUint;
use std::sync::OnceLock;

/// Largest n served by the u64 table. Every C(n, k) with n <= 64 fits in u64.
pub const TABLE_MAX_N: usize = 64;

fn table() -> &'static Vec<Vec<u64>> {
    static TABLE: OnceLock<Vec<Vec<u64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t: Vec<Vec<u64>> = Vec::with_capacity(TABLE_MAX_N + 1);
        for n in 0..=TABLE_MAX_N {
            let mut row = vec![1u64; n + 1];
            for k in 1..n {
                row[k] = t[n - 1][k - 1]
                    .checked_add(t[n - 1][k])
                    .expect("binomial table overflow");
            }
            t.push(row);
        }
        t
    })
}

/// C(n, k), exact. Returns 0 when k > n. Panics if n exceeds the table.
pub fn binom(n: u32, k: u32) -> u64 {
    let (n, k) = (n as usize, k as usize);
    assert!(n <= TABLE_MAX_N, "binom: n = {n} out of table range");
    if k > n {
        0
    } else {
        table()[n][k]
    }
}

/// C(n, k) as a big integer, for arguments beyond the table.
pub fn big_binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}
