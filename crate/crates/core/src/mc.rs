//! Seeded, reproducible Monte-Carlo plumbing: per-index derived RNG
//! streams, a deterministic indexed parallel map, uniform layer sampling
//! and interval estimates.
//!
//! Every sample's generator is a pure function of (master seed, sample
//! index), so results are byte-identical at any worker count.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Independent RNG stream for one (seed, index) pair.
pub fn subrng(seed: u64, index: u64) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    let mut state = splitmix64(seed ^ 0xa076_1d64_78bd_642f);
    state = splitmix64(state ^ index);
    for chunk in key.chunks_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

/// Map f over 0..count across `threads` workers. The output order and
/// content depend only on f, never on the worker count.
pub fn parallel_map_indexed<T, F>(count: u64, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    let threads = threads.max(1);
    if threads == 1 || count < 2 {
        return (0..count).map(f).collect();
    }
    let chunk = (count + threads as u64 - 1) / threads as u64;
    let mut chunks: Vec<Vec<T>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..threads as u64 {
            let lo = w * chunk;
            let hi = ((w + 1) * chunk).min(count);
            let f = &f;
            handles.push(scope.spawn(move || (lo..hi).map(f).collect::<Vec<T>>()));
        }
        for h in handles {
            chunks.push(h.join().expect("worker panicked"));
        }
    });
    chunks.into_iter().flatten().collect()
}

/// Uniform random k-subset of {1,..,n} as a mask (Floyd's algorithm,
/// O(k) draws, no rejection).
pub fn sample_layer_mask<R: Rng>(n: u32, k: u32, rng: &mut R) -> u64 {
    debug_assert!(k <= n && n <= 64);
    let mut mask = 0u64;
    for t in n - k..n {
        let r = rng.gen_range(0..=t);
        if mask >> r & 1 == 1 {
            mask |= 1u64 << t;
        } else {
            mask |= 1u64 << r;
        }
    }
    mask
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Sample mean and standard error.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binom::binom;
    use std::collections::HashMap;

    #[test]
    fn subrng_is_deterministic_and_split() {
        let mut a = subrng(42, 0);
        let mut b = subrng(42, 0);
        let mut c = subrng(42, 1);
        let xa: u64 = a.gen();
        assert_eq!(xa, b.gen::<u64>());
        assert_ne!(xa, c.gen::<u64>());
    }

    #[test]
    fn parallel_map_order_independent_of_workers() {
        let f = |i: u64| splitmix64(i).wrapping_mul(3);
        let one = parallel_map_indexed(1000, 1, f);
        for threads in [2, 3, 7, 16] {
            assert_eq!(parallel_map_indexed(1000, threads, f), one);
        }
    }

    #[test]
    fn layer_sampling_is_uniform() {
        // chi-square against the uniform law on C(8,4) = 70 cells
        let (n, k) = (8u32, 4u32);
        let trials = 70_000u64;
        let mut counts: HashMap<u64, u64> = HashMap::new();
        let mut rng = subrng(7, 0);
        for _ in 0..trials {
            let m = sample_layer_mask(n, k, &mut rng);
            assert_eq!(m.count_ones(), k);
            *counts.entry(m).or_insert(0) += 1;
        }
        let cells = binom(n, k);
        assert_eq!(counts.len() as u64, cells);
        let expect = trials as f64 / cells as f64;
        let chi2: f64 = counts
            .values()
            .map(|&c| {
                let d = c as f64 - expect;
                d * d / expect
            })
            .sum();
        // df = 69; mean 69, sd sqrt(138) ~ 11.7. Generous deterministic gate.
        assert!(chi2 < 69.0 + 6.0 * 11.75, "chi2 = {chi2}");
    }

    #[test]
    fn wilson_basics() {
        let (lo, hi) = wilson_interval(50, 100, 1.96);
        assert!(lo < 0.5 && 0.5 < hi);
        assert!(lo > 0.39 && hi < 0.61);
        let (lo, hi) = wilson_interval(0, 100, 1.96);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0);
    }

    #[test]
    fn mean_se_sanity() {
        let (m, se) = mean_and_se(&[1.0, 2.0, 3.0, 4.0]);
        assert!((m - 2.5).abs() < 1e-12);
        assert!((se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-12);
    }
}
