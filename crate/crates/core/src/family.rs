//! Families inside one layer of the n-cube: bit-vector storage indexed by
//! colex rank, upper shadows and their iterates, measures, distance-(2j)
//! pair counting and shadow-membership tests.

use crate::binom::binom;
use crate::error::{Error, Result};
use crate::mask::{
    colex_rank, low_mask, next_same_popcount, HARD_MAX_N,
};
use num::{BigInt, BigRational, ToPrimitive};

/// Deletion-choice budget for explicit-family membership tests in
/// [`LayerFamily::in_iterated_shadow`]; beyond it the caller is told to use
/// predicate mode.
pub const SHADOW_MEMBERSHIP_CAP: u64 = 1_000_000;

/// Below this n, membership in bulk loops goes through a direct
/// mask-indexed bitset (2^n bits) instead of per-query colex ranking.
const MASK_TABLE_MAX_N: u32 = 26;

/// A family of k-element subsets of {1,..,n}, stored as a bit vector of
/// length C(n,k) in colex rank order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerFamily {
    n: u32,
    k: u32,
    words: Vec<u64>,
}

impl LayerFamily {
    pub fn empty(n: u32, k: u32) -> Result<Self> {
        if n > HARD_MAX_N {
            return Err(Error::capacity(format!(
                "n = {n} exceeds hard limit {HARD_MAX_N}"
            )));
        }
        if k > n {
            return Err(Error::input(format!("layer k = {k} > n = {n}")));
        }
        let size = binom(n, k);
        let words = vec![0u64; ((size + 63) / 64) as usize];
        Ok(LayerFamily { n, k, words })
    }

    pub fn full(n: u32, k: u32) -> Result<Self> {
        let mut f = Self::empty(n, k)?;
        let size = f.layer_size();
        for r in 0..size {
            f.insert_rank(r);
        }
        Ok(f)
    }

    pub fn from_members<I: IntoIterator<Item = u64>>(n: u32, k: u32, masks: I) -> Result<Self> {
        let mut f = Self::empty(n, k)?;
        for m in masks {
            if m.count_ones() != k {
                return Err(Error::input(format!(
                    "mask {m:#x} has cardinality {} in layer {k}",
                    m.count_ones()
                )));
            }
            if m & !low_mask(n) != 0 {
                return Err(Error::input(format!("mask {m:#x} has bits above n = {n}")));
            }
            f.insert_mask(m);
        }
        Ok(f)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn layer_size(&self) -> u64 {
        binom(self.n, self.k)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn insert_rank(&mut self, rank: u64) {
        debug_assert!(rank < self.layer_size());
        self.words[(rank / 64) as usize] |= 1u64 << (rank % 64);
    }

    pub fn contains_rank(&self, rank: u64) -> bool {
        self.words[(rank / 64) as usize] >> (rank % 64) & 1 == 1
    }

    pub fn insert_mask(&mut self, mask: u64) {
        self.insert_rank(colex_rank(mask));
    }

    pub fn contains_mask(&self, mask: u64) -> bool {
        self.contains_rank(colex_rank(mask))
    }

    pub fn popcount(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// mu = |family| / C(n,k), exact.
    pub fn measure(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.popcount()),
            BigInt::from(self.layer_size()),
        )
    }

    pub fn measure_f64(&self) -> f64 {
        self.popcount() as f64 / self.layer_size() as f64
    }

    /// Complement within the layer.
    pub fn complement(&self) -> LayerFamily {
        let size = self.layer_size();
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let tail = size % 64;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        LayerFamily {
            n: self.n,
            k: self.k,
            words,
        }
    }

    pub fn intersect(&self, other: &LayerFamily) -> Result<LayerFamily> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::input("layer mismatch in intersection"));
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        Ok(LayerFamily {
            n: self.n,
            k: self.k,
            words,
        })
    }

    pub fn is_subset_of(&self, other: &LayerFamily) -> bool {
        self.n == other.n
            && self.k == other.k
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Visit every member as (colex rank, mask), in rank order.
    pub fn for_each_member<F: FnMut(u64, u64)>(&self, mut f: F) {
        if self.k == 0 {
            if self.contains_rank(0) {
                f(0, 0);
            }
            return;
        }
        let size = self.layer_size();
        let mut mask = low_mask(self.k);
        for rank in 0..size {
            if self.contains_rank(rank) {
                f(rank, mask);
            }
            if rank + 1 < size {
                mask = next_same_popcount(mask);
            }
        }
    }

    pub fn member_masks(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.popcount() as usize);
        self.for_each_member(|_, m| out.push(m));
        out
    }

    /// Direct mask-indexed membership bitset, used to speed up the bulk
    /// loops at moderate n. None when 2^n would be too large.
    fn mask_table(&self) -> Option<Vec<u64>> {
        if self.n > MASK_TABLE_MAX_N {
            return None;
        }
        let mut table = vec![0u64; 1usize << (self.n.saturating_sub(6).max(0) as usize)];
        if table.is_empty() {
            table.push(0);
        }
        self.for_each_member(|_, m| {
            table[(m / 64) as usize] |= 1u64 << (m % 64);
        });
        Some(table)
    }

    /// The upper shadow: all (k+1)-sets containing a member.
    pub fn upper_shadow(&self) -> Result<LayerFamily> {
        if self.k == self.n {
            return Err(Error::LayerOverflow(format!(
                "upper shadow of the top layer k = n = {}",
                self.n
            )));
        }
        let mut out = LayerFamily::empty(self.n, self.k + 1)?;
        let full = low_mask(self.n);
        self.for_each_member(|_, m| {
            let mut absent = full & !m;
            while absent != 0 {
                let bit = absent & absent.wrapping_neg();
                out.insert_mask(m | bit);
                absent &= absent - 1;
            }
        });
        Ok(out)
    }

    /// r-fold composition of [`Self::upper_shadow`].
    pub fn iterated_upper_shadow(&self, r: u32) -> Result<LayerFamily> {
        if self.k + r > self.n {
            return Err(Error::LayerOverflow(format!(
                "k + r = {} exceeds n = {}",
                self.k + r,
                self.n
            )));
        }
        let mut cur = self.clone();
        for _ in 0..r {
            cur = cur.upper_shadow()?;
        }
        Ok(cur)
    }

    /// The same set computed straight from the definition: every (k+r)-set
    /// containing a member. Kept as an independent route for verification.
    pub fn iterated_upper_shadow_direct(&self, r: u32) -> Result<LayerFamily> {
        if self.k + r > self.n {
            return Err(Error::LayerOverflow(format!(
                "k + r = {} exceeds n = {}",
                self.k + r,
                self.n
            )));
        }
        let mut out = LayerFamily::empty(self.n, self.k + r)?;
        if r == 0 {
            return Ok(self.clone());
        }
        let full = low_mask(self.n);
        self.for_each_member(|_, m| {
            let outside = full & !m;
            for_each_subset_of_size(outside, r, |extra| {
                out.insert_mask(m | extra);
            });
        });
        Ok(out)
    }

    /// mu of the meet of the r-iterated shadows of the family and its
    /// complement; exact, with denominator C(n, k+r).
    pub fn intersection_measure(&self, r: u32) -> Result<BigRational> {
        let a = self.iterated_upper_shadow(r)?;
        let b = self.complement().iterated_upper_shadow(r)?;
        Ok(a.intersect(&b)?.measure())
    }

    /// Census of ordered distance-(2j) pairs (first element in the family,
    /// second outside it).
    pub fn pair_census(&self, j: u32) -> Result<PairCensus> {
        let (n, k) = (self.n, self.k);
        if j == 0 || j > k.min(n - k) {
            return Err(Error::input(format!(
                "j = {j} outside 1..=min(k, n-k) = {}",
                k.min(n - k)
            )));
        }
        let total =
            binom(n, k) as u128 * binom(k, j) as u128 * binom(n - k, j) as u128;
        let table = self.mask_table();
        let full = low_mask(n);
        let mut good: u128 = 0;
        self.for_each_member(|_, a| {
            let outside = full & !a;
            for_each_subset_of_size(a, j, |removed| {
                for_each_subset_of_size(outside, j, |added| {
                    let b = (a ^ removed) | added;
                    let inside = match &table {
                        Some(t) => t[(b / 64) as usize] >> (b % 64) & 1 == 1,
                        None => self.contains_mask(b),
                    };
                    if !inside {
                        good += 1;
                    }
                });
            });
        });
        Ok(PairCensus {
            n,
            k,
            j,
            total_pairs: total,
            good_pairs: good,
        })
    }

    /// Whether the (k+r)-set `b` contains some member, decided by
    /// enumerating the C(k+r, r) deletion choices with early exit.
    pub fn in_iterated_shadow(&self, b: u64, r: u32) -> Result<bool> {
        let kr = self.k + r;
        if b.count_ones() != kr {
            return Err(Error::input(format!(
                "candidate has cardinality {}, expected k + r = {kr}",
                b.count_ones()
            )));
        }
        let choices = binom(kr, r);
        if choices > SHADOW_MEMBERSHIP_CAP {
            return Err(Error::capacity(format!(
                "C({kr},{r}) = {choices} deletion choices exceed cap {SHADOW_MEMBERSHIP_CAP}; \
                 use a weight-predicate family"
            )));
        }
        let mut hit = false;
        for_each_subset_of_size_until(b, r, |removed| {
            if self.contains_mask(b ^ removed) {
                hit = true;
                true
            } else {
                false
            }
        });
        Ok(hit)
    }
}

/// Ordered distance-(2j) pair counts for a layer family.
#[derive(Debug, Clone)]
pub struct PairCensus {
    pub n: u32,
    pub k: u32,
    pub j: u32,
    pub total_pairs: u128,
    pub good_pairs: u128,
}

impl PairCensus {
    /// Density of good pairs among all ordered distance-(2j) pairs.
    pub fn q(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.good_pairs),
            BigInt::from(self.total_pairs),
        )
    }

    pub fn q_f64(&self) -> f64 {
        self.good_pairs as f64 / self.total_pairs as f64
    }
}

/// Membership rule for families whose definition only depends on the
/// intersection size with a fixed reference set. Shadow membership has a
/// closed form for these, so Monte-Carlo runs need no enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predicate {
    /// { S at layer k : |S ∩ T| >= a }
    WeightAtLeast { t: u64, k: u32, a: u32 },
    /// { S at layer k : |S ∩ T| <= b }
    WeightAtMost { t: u64, k: u32, b: u32 },
}

impl Predicate {
    pub fn k(&self) -> u32 {
        match *self {
            Predicate::WeightAtLeast { k, .. } | Predicate::WeightAtMost { k, .. } => k,
        }
    }

    pub fn complement(&self) -> Predicate {
        match *self {
            Predicate::WeightAtLeast { t, k, a } => Predicate::WeightAtMost { t, k, b: a - 1 },
            Predicate::WeightAtMost { t, k, b } => Predicate::WeightAtLeast { t, k, a: b + 1 },
        }
    }

    pub fn contains(&self, s: u64) -> bool {
        match *self {
            Predicate::WeightAtLeast { t, k, a } => {
                debug_assert_eq!(s.count_ones(), k);
                (s & t).count_ones() >= a
            }
            Predicate::WeightAtMost { t, k, b } => {
                debug_assert_eq!(s.count_ones(), k);
                (s & t).count_ones() <= b
            }
        }
    }

    /// Whether the (k+r)-set `bset` contains a k-subset satisfying the
    /// predicate. Decided by the extremal achievable weight: a k-subset of
    /// B can meet T in anything from max(0, k - |B \ T|) up to
    /// min(|B ∩ T|, k) elements.
    pub fn in_iterated_shadow(&self, bset: u64, r: u32) -> Result<bool> {
        let k = self.k();
        if bset.count_ones() != k + r {
            return Err(Error::input(format!(
                "candidate has cardinality {}, expected k + r = {}",
                bset.count_ones(),
                k + r
            )));
        }
        Ok(match *self {
            Predicate::WeightAtLeast { t, a, .. } => {
                let max_weight = (bset & t).count_ones().min(k);
                max_weight >= a
            }
            Predicate::WeightAtMost { t, b, .. } => {
                let outside = (bset & !t).count_ones();
                let min_weight = k.saturating_sub(outside);
                min_weight <= b
            }
        })
    }
}

/// Visit every j-element subset of the set bits of `mask`.
pub fn for_each_subset_of_size<F: FnMut(u64)>(mask: u64, j: u32, mut f: F) {
    for_each_subset_of_size_until(mask, j, |s| {
        f(s);
        false
    });
}

/// Same, with early exit when the visitor returns true.
pub fn for_each_subset_of_size_until<F: FnMut(u64) -> bool>(mask: u64, j: u32, mut f: F) {
    let k = mask.count_ones();
    if j > k {
        return;
    }
    if j == 0 {
        f(0);
        return;
    }
    // Walk index masks of popcount j over the k set positions; expand each
    // through pdep-style scatter.
    let positions = crate::mask::bit_positions(mask);
    let end = 1u64 << k;
    let mut idx = low_mask(j);
    loop {
        let mut sub = 0u64;
        let mut rest = idx;
        while rest != 0 {
            let p = rest.trailing_zeros();
            sub |= 1u64 << positions[p as usize];
            rest &= rest - 1;
        }
        if f(sub) {
            return;
        }
        let next = next_same_popcount(idx);
        if next >= end {
            return;
        }
        idx = next;
    }
}

pub fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn ratio_string(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::mask_of_elements;
    use num::BigInt;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn dictator(n: u32) -> LayerFamily {
        let k = n / 2;
        let mut f = LayerFamily::empty(n, k).unwrap();
        let size = f.layer_size();
        let mut mask = low_mask(k);
        for rank in 0..size {
            if mask & 1 != 0 {
                f.insert_rank(rank);
            }
            if rank + 1 < size {
                mask = next_same_popcount(mask);
            }
        }
        f
    }

    fn random_family(n: u32, k: u32, p: f64, seed: u64) -> LayerFamily {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut f = LayerFamily::empty(n, k).unwrap();
        for r in 0..f.layer_size() {
            if rng.gen::<f64>() < p {
                f.insert_rank(r);
            }
        }
        f
    }

    #[test]
    fn shadow_single_pair() {
        // {{1,2}} in [4] -> {{1,2,3},{1,2,4}}
        let f = LayerFamily::from_members(4, 2, [0b0011u64]).unwrap();
        let s = f.upper_shadow().unwrap();
        assert_eq!(s.popcount(), 2);
        assert!(s.contains_mask(0b0111));
        assert!(s.contains_mask(0b1011));
        assert_eq!(s.measure(), BigRational::new(BigInt::from(2), BigInt::from(4)));
    }

    #[test]
    fn shadow_of_dictator_n6() {
        let f = dictator(6);
        let s = f.upper_shadow().unwrap();
        // mu = 1/2 + 1/6 = 2/3
        assert_eq!(s.measure(), BigRational::new(BigInt::from(2), BigInt::from(3)));
        // complement's shadow is everything
        let sc = f.complement().upper_shadow().unwrap();
        assert_eq!(sc.popcount(), sc.layer_size());
    }

    #[test]
    fn shadow_of_top_layer_errors() {
        let f = LayerFamily::full(4, 4).unwrap();
        assert!(matches!(f.upper_shadow(), Err(Error::LayerOverflow(_))));
    }

    #[test]
    fn iterated_shadow_examples() {
        let f = LayerFamily::from_members(4, 2, [0b0011u64]).unwrap();
        let s = f.iterated_upper_shadow(2).unwrap();
        assert_eq!(s.popcount(), 1);
        assert!(s.contains_mask(0b1111));
        // r = 0 is the identity
        assert_eq!(f.iterated_upper_shadow(0).unwrap(), f);
        assert!(f.iterated_upper_shadow(3).is_err());
    }

    #[test]
    fn iterated_matches_direct_definition() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for n in [6u32, 8, 10] {
            for k in 1..n {
                let f = random_family(n, k, rng.gen_range(0.1..0.9), rng.gen());
                for r in 0..=(n - k).min(3) {
                    let a = f.iterated_upper_shadow(r).unwrap();
                    let b = f.iterated_upper_shadow_direct(r).unwrap();
                    assert_eq!(a, b, "n={n} k={k} r={r}");
                }
            }
        }
    }

    #[test]
    fn shadow_monotone() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..30 {
            let n = rng.gen_range(4..=12u32);
            let k = rng.gen_range(1..n);
            let small = random_family(n, k, 0.3, rng.gen());
            let mut large = small.clone();
            for r in 0..large.layer_size() {
                if rng.gen::<f64>() < 0.2 {
                    large.insert_rank(r);
                }
            }
            assert!(small.is_subset_of(&large));
            assert!(small
                .upper_shadow()
                .unwrap()
                .is_subset_of(&large.upper_shadow().unwrap()));
        }
    }

    #[test]
    fn local_lym_upper_half() {
        // mu never drops under one shadow step at or above the middle.
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        for _ in 0..40 {
            let n = rng.gen_range(4..=14u32);
            let k = rng.gen_range(n / 2..n);
            let f = random_family(n, k, rng.gen_range(0.05..0.95), rng.gen());
            let s = f.upper_shadow().unwrap();
            assert!(s.measure() >= f.measure(), "n={n} k={k}");
        }
    }

    #[test]
    fn dictator_iterated_measure_exact() {
        for n in (4..=20u32).step_by(2) {
            let f = dictator(n);
            for r in 0..=n / 2 {
                let m = f.iterated_upper_shadow(r).unwrap().measure();
                let expect = BigRational::new(BigInt::from(n + 2 * r), BigInt::from(2 * n));
                assert_eq!(m, expect, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn intersection_measure_cases() {
        let n = 6;
        let empty = LayerFamily::empty(n, 3).unwrap();
        assert_eq!(
            empty.intersection_measure(1).unwrap(),
            BigRational::new(BigInt::from(0), BigInt::from(1))
        );
        let full = LayerFamily::full(n, 3).unwrap();
        assert_eq!(
            full.intersection_measure(1).unwrap(),
            BigRational::new(BigInt::from(0), BigInt::from(1))
        );
        // dictator: complement's shadow is everything, so the meet is the
        // dictator's own shadow, mu = 1/2 + 1/6.
        let d = dictator(n);
        assert_eq!(
            d.intersection_measure(1).unwrap(),
            BigRational::new(BigInt::from(2), BigInt::from(3))
        );
    }

    #[test]
    fn intersection_measure_symmetric() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        for _ in 0..10 {
            let n = 10;
            let f = random_family(n, n / 2, rng.gen_range(0.2..0.8), rng.gen());
            for r in 1..=2 {
                assert_eq!(
                    f.intersection_measure(r).unwrap(),
                    f.complement().intersection_measure(r).unwrap()
                );
            }
        }
    }

    #[test]
    fn half_half_intersection_by_enumeration() {
        // n = 6, A = { |A ∩ {1,2,3}| >= 2 } at layer 3, r = 1; oracle
        // enumerates the 15 four-sets directly.
        let n = 6u32;
        let t = 0b000111u64;
        let members: Vec<u64> = (0..1u64 << n)
            .filter(|m| m.count_ones() == 3 && (m & t).count_ones() >= 2)
            .collect();
        let f = LayerFamily::from_members(n, 3, members.clone()).unwrap();
        let expected: u64 = (0..1u64 << n)
            .filter(|b| {
                b.count_ones() == 4 && {
                    let covers = |pred: &dyn Fn(u64) -> bool| {
                        (0..1u64 << n)
                            .any(|a| a.count_ones() == 3 && a & !b == 0 && pred(a))
                    };
                    covers(&|a| (a & t).count_ones() >= 2)
                        && covers(&|a| (a & t).count_ones() < 2)
                }
            })
            .count() as u64;
        let got = f.intersection_measure(1).unwrap();
        assert_eq!(
            got,
            BigRational::new(BigInt::from(expected), BigInt::from(15u32))
        );
    }

    #[test]
    fn pair_census_totals_and_extremes() {
        let any = random_family(4, 2, 0.5, 3);
        let c = any.pair_census(1).unwrap();
        assert_eq!(c.total_pairs, 24);
        let full = LayerFamily::full(8, 4).unwrap();
        let c = full.pair_census(1).unwrap();
        assert_eq!(c.good_pairs, 0);
        assert!(any.pair_census(3).is_err());
    }

    #[test]
    fn pair_census_dictator_n10() {
        let d = dictator(10);
        let c = d.pair_census(1).unwrap();
        assert_eq!(c.good_pairs, 630);
        assert_eq!(c.total_pairs, 6300);
        assert_eq!(c.q_f64(), 0.1);
    }

    #[test]
    fn pair_census_matches_brute_force() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for _ in 0..5 {
            let n = 8u32;
            let k = 4u32;
            let f = random_family(n, k, rng.gen_range(0.2..0.8), rng.gen());
            let members = f.member_masks();
            for j in 1..=2u32 {
                let c = f.pair_census(j).unwrap();
                let mut good = 0u128;
                let mut total = 0u128;
                for a in 0..1u64 << n {
                    if a.count_ones() != k {
                        continue;
                    }
                    for b in 0..1u64 << n {
                        if b.count_ones() != k || (a ^ b).count_ones() != 2 * j {
                            continue;
                        }
                        total += 1;
                        if members.contains(&a) && !members.contains(&b) {
                            good += 1;
                        }
                    }
                }
                assert_eq!(c.total_pairs, total);
                assert_eq!(c.good_pairs, good);
            }
        }
    }

    #[test]
    fn shadow_membership_explicit() {
        let f = LayerFamily::from_members(6, 2, [0b000011u64]).unwrap();
        // {1,2,5} contains {1,2}
        assert!(f.in_iterated_shadow(0b010011, 1).unwrap());
        assert!(!f.in_iterated_shadow(0b011100, 1).unwrap());
        assert!(f.in_iterated_shadow(0b001111, 1).is_err()); // wrong cardinality
    }

    #[test]
    fn shadow_membership_matches_shadow() {
        let mut rng = ChaCha12Rng::seed_from_u64(29);
        let f = random_family(10, 5, 0.3, rng.gen());
        for r in 1..=2u32 {
            let shadow = f.iterated_upper_shadow(r).unwrap();
            let mut mask = low_mask(5 + r);
            for rank in 0..binom(10, 5 + r) {
                assert_eq!(
                    f.in_iterated_shadow(mask, r).unwrap(),
                    shadow.contains_rank(rank)
                );
                if rank + 1 < binom(10, 5 + r) {
                    mask = next_same_popcount(mask);
                }
            }
        }
    }

    #[test]
    fn predicate_dictator_shadow() {
        // The iterated shadow of the dictator is the dictator at the higher
        // layer: membership is exactly "contains element 1".
        let p = Predicate::WeightAtLeast { t: 1, k: 5, a: 1 };
        let n = 10u32;
        for r in 0..=3u32 {
            let mut mask = low_mask(5 + r);
            for rank in 0..binom(n, 5 + r) {
                assert_eq!(p.in_iterated_shadow(mask, r).unwrap(), mask & 1 == 1);
                if rank + 1 < binom(n, 5 + r) {
                    mask = next_same_popcount(mask);
                }
            }
        }
    }

    #[test]
    fn predicate_half_half_example() {
        // n = 6, threshold |· ∩ [3]| >= 2 at k = 3, r = 1, B = {1,2,4,5}:
        // contains {1,2,4} with weight 2.
        let p = Predicate::WeightAtLeast { t: 0b000111, k: 3, a: 2 };
        let b = mask_of_elements(&[1, 2, 4, 5]);
        assert!(p.in_iterated_shadow(b, 1).unwrap());
    }

    #[test]
    fn predicate_agrees_with_explicit() {
        let n = 12u32;
        let k = 6u32;
        let t = low_mask(6);
        let threshold = 4u32;
        let p = Predicate::WeightAtLeast { t, k, a: threshold };
        let members: Vec<u64> = {
            let mut v = Vec::new();
            let mut mask = low_mask(k);
            for rank in 0..binom(n, k) {
                if p.contains(mask) {
                    v.push(mask);
                }
                if rank + 1 < binom(n, k) {
                    mask = next_same_popcount(mask);
                }
            }
            v
        };
        let f = LayerFamily::from_members(n, k, members).unwrap();
        let pc = p.complement();
        let fc = f.complement();
        for r in 1..=2u32 {
            let mut mask = low_mask(k + r);
            for rank in 0..binom(n, k + r) {
                assert_eq!(
                    p.in_iterated_shadow(mask, r).unwrap(),
                    f.in_iterated_shadow(mask, r).unwrap(),
                    "r={r} mask={mask:#b}"
                );
                assert_eq!(
                    pc.in_iterated_shadow(mask, r).unwrap(),
                    fc.in_iterated_shadow(mask, r).unwrap(),
                );
                if rank + 1 < binom(n, k + r) {
                    mask = next_same_popcount(mask);
                }
            }
        }
    }

    #[test]
    fn complement_measure_sums_to_one() {
        let f = random_family(10, 4, 0.37, 99);
        let one = BigRational::new(BigInt::from(1), BigInt::from(1));
        assert_eq!(f.measure() + f.complement().measure(), one);
    }
}
