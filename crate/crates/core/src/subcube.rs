//! Random subcube restrictions: subcube sampling, restriction of a
//! middle-layer family to a subcube's middle layer, up-sets and their
//! correlation, truncation at a binomial-tail level, and the per-sample
//! inequality chain that lifts local densities to iterated-shadow bounds.

use crate::binom::{big_binom, binom};
use crate::bound::{bound_calculator, BoundReport};
use crate::error::{Error, Result};
use crate::family::LayerFamily;
use crate::mask::{bit_positions, low_mask, next_same_popcount};
use crate::mc::{mean_and_se, parallel_map_indexed, subrng};
use num::{BigInt, BigRational, ToPrimitive};
use rand::Rng;

/// Slack for comparisons that mix exact counts with exp(-x) terms.
pub const FLOAT_SLACK: f64 = 1e-12;

/// Largest subcube dimension for the dense 2^D machinery.
pub const MAX_SUBCUBE_DIM: u32 = 26;

/// A D-dimensional subcube of the n-cube: a fixed bottom set plus D free
/// coordinates. Points are bottom ∪ X over X ⊆ free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubcubeSpec {
    pub n: u32,
    pub bottom: u64,
    pub free: u64,
}

impl SubcubeSpec {
    pub fn new(n: u32, bottom: u64, free: u64) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::input(format!("n = {n} must be even")));
        }
        if bottom & free != 0 {
            return Err(Error::input("bottom and free coordinates overlap"));
        }
        if (bottom | free) & !low_mask(n) != 0 {
            return Err(Error::input("coordinates above n"));
        }
        let d = free.count_ones();
        if d % 2 != 0 {
            return Err(Error::input(format!("subcube dimension {d} must be even")));
        }
        if bottom.count_ones() != n / 2 - d / 2 {
            return Err(Error::input(format!(
                "bottom has {} elements, expected n/2 - D/2 = {}",
                bottom.count_ones(),
                n / 2 - d / 2
            )));
        }
        Ok(SubcubeSpec { n, bottom, free })
    }

    pub fn dim(&self) -> u32 {
        self.free.count_ones()
    }

    pub fn top(&self) -> u64 {
        self.bottom | self.free
    }

    /// 0-based positions of the free coordinates, ascending.
    pub fn free_positions(&self) -> Vec<u32> {
        bit_positions(self.free)
    }

    /// Full-cube point for a compressed free-coordinate mask.
    pub fn point(&self, x: u64, positions: &[u32]) -> u64 {
        let mut m = self.bottom;
        let mut rest = x;
        while rest != 0 {
            let p = rest.trailing_zeros();
            m |= 1u64 << positions[p as usize];
            rest &= rest - 1;
        }
        m
    }
}

/// Uniform random D-dimensional subcube with top size n/2 + D/2 and bottom
/// size n/2 - D/2.
pub fn sample_subcube<R: Rng>(n: u32, d: u32, rng: &mut R) -> Result<SubcubeSpec> {
    if n == 0 || n % 2 != 0 || d % 2 != 0 {
        return Err(Error::input(format!("n = {n} and D = {d} must be even")));
    }
    if d == 0 || d > n {
        return Err(Error::input(format!("D = {d} outside 1..=n = {n}")));
    }
    // Fisher-Yates over the coordinates; first D become free, the next
    // n/2 - D/2 the bottom set.
    let mut coords: Vec<u32> = (0..n).collect();
    for i in (1..coords.len()).rev() {
        let jdx = rng.gen_range(0..=i);
        coords.swap(i, jdx);
    }
    let free = coords[..d as usize]
        .iter()
        .fold(0u64, |m, &c| m | (1u64 << c));
    let bottom = coords[d as usize..(d + (n - d) / 2) as usize]
        .iter()
        .fold(0u64, |m, &c| m | (1u64 << c));
    SubcubeSpec::new(n, bottom, free)
}

/// A subset of a D-cube, one bit per point, indexed by the compressed
/// free-coordinate mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeSet {
    d: u32,
    words: Vec<u64>,
}

impl CubeSet {
    pub fn empty(d: u32) -> Result<Self> {
        if d > MAX_SUBCUBE_DIM {
            return Err(Error::capacity(format!(
                "subcube dimension {d} exceeds limit {MAX_SUBCUBE_DIM}"
            )));
        }
        let bits = 1u64 << d;
        Ok(CubeSet {
            d,
            words: vec![0u64; ((bits + 63) / 64) as usize],
        })
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn insert(&mut self, x: u64) {
        self.words[(x / 64) as usize] |= 1u64 << (x % 64);
    }

    pub fn contains(&self, x: u64) -> bool {
        self.words[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn total_points(&self) -> u64 {
        1u64 << self.d
    }

    pub fn measure_f64(&self) -> f64 {
        self.count() as f64 / self.total_points() as f64
    }

    pub fn intersect(&self, other: &CubeSet) -> CubeSet {
        debug_assert_eq!(self.d, other.d);
        CubeSet {
            d: self.d,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Point counts per level |X| = 0..=D.
    pub fn level_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.d as usize + 1];
        for x in 0..self.total_points() {
            if self.contains(x) {
                counts[x.count_ones() as usize] += 1;
            }
        }
        counts
    }

    /// Close upward: every superset of a member becomes a member.
    pub fn upward_closure(&self) -> CubeSet {
        let mut out = self.clone();
        for bit in 0..self.d {
            let b = 1u64 << bit;
            for x in 0..out.total_points() {
                if out.contains(x) {
                    out.insert(x | b);
                }
            }
        }
        out
    }

    pub fn is_up_set(&self) -> bool {
        for bit in 0..self.d {
            let b = 1u64 << bit;
            for x in 0..self.total_points() {
                if x & b == 0 && self.contains(x) && !self.contains(x | b) {
                    return false;
                }
            }
        }
        true
    }
}

/// A family restricted to the middle layer of a subcube.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub spec: SubcubeSpec,
    /// Middle-layer members, as a cube set with bits only at level D/2.
    pub middle: CubeSet,
    /// |A ∩ M(C)|.
    pub alpha_count: u64,
}

impl Restriction {
    pub fn middle_size(&self) -> u64 {
        binom(self.spec.dim(), self.spec.dim() / 2)
    }

    /// alpha = |A ∩ M(C)| / C(D, D/2).
    pub fn alpha(&self) -> f64 {
        self.alpha_count as f64 / self.middle_size() as f64
    }

    /// The restriction as a D-dimensional layer family over the free
    /// coordinates.
    pub fn middle_family(&self) -> Result<LayerFamily> {
        let d = self.spec.dim();
        let mut f = LayerFamily::empty(d, d / 2)?;
        for x in 0..self.middle.total_points() {
            if self.middle.contains(x) {
                f.insert_mask(x);
            }
        }
        Ok(f)
    }
}

/// Restrict a middle-layer family (given as a membership test on full-cube
/// masks) to the middle layer of a subcube.
pub fn restrict<F: Fn(u64) -> bool>(contains: F, spec: &SubcubeSpec) -> Result<Restriction> {
    let d = spec.dim();
    let positions = spec.free_positions();
    let mut middle = CubeSet::empty(d)?;
    let mut alpha_count = 0u64;
    let size = binom(d, d / 2);
    let mut x = low_mask(d / 2);
    for idx in 0..size {
        if contains(spec.point(x, &positions)) {
            middle.insert(x);
            alpha_count += 1;
        }
        if idx + 1 < size {
            x = next_same_popcount(x);
        }
    }
    Ok(Restriction {
        spec: *spec,
        middle,
        alpha_count,
    })
}

/// Middle-level complement of a restriction (the restriction of the
/// complement family).
pub fn middle_complement(r: &Restriction) -> Result<Restriction> {
    let d = r.spec.dim();
    let mut middle = CubeSet::empty(d)?;
    let mut count = 0u64;
    let size = binom(d, d / 2);
    let mut x = low_mask(d / 2);
    for idx in 0..size {
        if !r.middle.contains(x) {
            middle.insert(x);
            count += 1;
        }
        if idx + 1 < size {
            x = next_same_popcount(x);
        }
    }
    Ok(Restriction {
        spec: r.spec,
        middle,
        alpha_count: count,
    })
}

/// Ordered good antipodal pairs at the middle level when D = 2j: pairs
/// (X, free \ X) with X in the restricted family and its antipode outside.
pub fn gamma_antipodal(r: &Restriction) -> (u64, u64) {
    let d = r.spec.dim();
    let full = low_mask(d);
    let size = binom(d, d / 2);
    let mut good = 0u64;
    let mut x = low_mask(d / 2);
    for idx in 0..size {
        if r.middle.contains(x) && !r.middle.contains(full & !x) {
            good += 1;
        }
        if idx + 1 < size {
            x = next_same_popcount(x);
        }
    }
    (good, size)
}

/// Good-pair density at the middle level for general j (distance 2j within
/// the subcube); reduces to the antipodal count when D = 2j.
pub fn gamma_generic(r: &Restriction, j: u32) -> Result<BigRational> {
    let fam = r.middle_family()?;
    Ok(fam.pair_census(j)?.q())
}

/// Up-set generated by middle-level members, over all D+1 levels.
pub fn upset_from_middle(middle: &CubeSet) -> CubeSet {
    middle.upward_closure()
}

#[derive(Debug, Clone)]
pub struct HarrisReport {
    pub meet_measure: BigRational,
    pub product_measure: BigRational,
    pub verdict: bool,
}

/// Correlation check for two up-sets in the same cube:
/// mu(U ∩ V) >= mu(U) mu(V), exact.
pub fn harris_check(u: &CubeSet, v: &CubeSet) -> Result<HarrisReport> {
    if u.dim() != v.dim() {
        return Err(Error::input("cube dimension mismatch"));
    }
    if !u.is_up_set() || !v.is_up_set() {
        return Err(Error::input("harris_check requires upward-closed inputs"));
    }
    let total = BigInt::from(u.total_points());
    let meet = BigRational::new(BigInt::from(u.intersect(v).count()), total.clone());
    let product = BigRational::new(BigInt::from(u.count()), total.clone())
        * BigRational::new(BigInt::from(v.count()), total);
    let verdict = meet >= product;
    Ok(HarrisReport {
        meet_measure: meet,
        product_measure: product,
        verdict,
    })
}

/// Fixed parameters for one batch of restriction samples.
#[derive(Debug, Clone, Copy)]
pub struct RestrictionParams {
    /// Half the subcube dimension; D = 2j and gamma uses antipodal pairs.
    pub j: u32,
    /// Binomial-tail parameter K.
    pub k_param: f64,
}

impl RestrictionParams {
    pub fn d(&self) -> u32 {
        2 * self.j
    }

    /// r = ceil(K sqrt(D)).
    pub fn r(&self) -> u32 {
        (self.k_param * (self.d() as f64).sqrt()).ceil() as u32
    }

    /// Truncation level l = D/2 + r.
    pub fn ell(&self) -> u32 {
        self.d() / 2 + self.r()
    }

    pub fn chernoff_term(&self) -> f64 {
        (-2.0 * self.k_param * self.k_param / 3.0).exp()
    }

    /// The truncation level exists inside the subcube only when l <= D; at
    /// desk scales it often does not, and the layer statistics are then
    /// unavailable.
    pub fn level_in_range(&self) -> bool {
        self.ell() <= self.d()
    }
}

/// Everything measured on one random subcube.
#[derive(Debug, Clone)]
pub struct RestrictionSample {
    pub spec: SubcubeSpec,
    pub alpha_count: u64,
    pub gamma_count: u64,
    pub middle_size: u64,
    /// Level-by-level counts of the up-set generated by A ∩ M(C).
    pub upset_a_levels: Vec<u64>,
    /// Level-by-level counts of the up-set generated by A^c ∩ M(C).
    pub upset_ac_levels: Vec<u64>,
    /// Level-by-level counts of the meet of the two up-sets.
    pub meet_levels: Vec<u64>,
}

impl RestrictionSample {
    pub fn d(&self) -> u32 {
        self.spec.dim()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha_count as f64 / self.middle_size as f64
    }

    pub fn gamma(&self) -> f64 {
        self.gamma_count as f64 / self.middle_size as f64
    }

    pub fn meet_count(&self) -> u64 {
        self.meet_levels.iter().sum()
    }

    /// mu_C of the meet of the two up-sets.
    pub fn upset_meet_measure(&self) -> f64 {
        self.meet_count() as f64 / (1u64 << self.d()) as f64
    }

    /// mu_C of the meet truncated at level l (everything of size <= l).
    pub fn truncated_measure(&self, ell: u32) -> f64 {
        let top = ell.min(self.d()) as usize;
        let c: u64 = self.meet_levels[..=top].iter().sum();
        c as f64 / (1u64 << self.d()) as f64
    }

    /// Density of the meet on level l of the subcube, when that level
    /// exists.
    pub fn good_layer_measure(&self, ell: u32) -> Option<f64> {
        if ell > self.d() {
            return None;
        }
        Some(self.meet_levels[ell as usize] as f64 / binom(self.d(), ell) as f64)
    }
}

/// Restrict, build both up-sets and record every count needed by the
/// inequality chain.
pub fn analyze_subcube<F: Fn(u64) -> bool>(
    contains: F,
    spec: &SubcubeSpec,
) -> Result<RestrictionSample> {
    let restriction = restrict(contains, spec)?;
    let co = middle_complement(&restriction)?;
    let (gamma_count, middle_size) = gamma_antipodal(&restriction);
    let up_a = upset_from_middle(&restriction.middle);
    let up_ac = upset_from_middle(&co.middle);
    let meet = up_a.intersect(&up_ac);
    Ok(RestrictionSample {
        spec: *spec,
        alpha_count: restriction.alpha_count,
        gamma_count,
        middle_size,
        upset_a_levels: up_a.level_counts(),
        upset_ac_levels: up_ac.level_counts(),
        meet_levels: meet.level_counts(),
    })
}

/// Per-sample inequality chain. Returns human-readable violations; an
/// empty vector means the sample satisfies every step.
pub fn check_sample(sample: &RestrictionSample, params: &RestrictionParams) -> Vec<String> {
    let mut bad = Vec::new();
    let d = sample.d();
    let mid = sample.middle_size as u128;
    let a = sample.alpha_count as u128;
    let g = sample.gamma_count as u128;
    let points = 1u128 << d;

    // gamma <= min(alpha, 1 - alpha): same denominator, compare counts.
    if g > a.min(mid - a) {
        bad.push(format!("gamma {g}/{mid} exceeds min(alpha, 1-alpha)"));
    }
    // alpha (1 - alpha) >= gamma / 2.
    if 2 * a * (mid - a) * mid < g * mid * mid {
        bad.push("alpha(1-alpha) < gamma/2".into());
    }
    // local LYM inside the subcube: the up-set of A ∩ M occupies at least
    // an alpha fraction of every level from D/2 up.
    for l in d / 2..=d {
        let lvl = sample.upset_a_levels[l as usize] as u128;
        if lvl * mid < a * binom(d, l) as u128 {
            bad.push(format!("up-set density at level {l} below alpha"));
        }
    }
    // mu_C(up-set) >= alpha/2.
    let up_a_count: u64 = sample.upset_a_levels.iter().sum();
    if 2 * up_a_count as u128 * mid < a * points {
        bad.push("mu_C(up-set of A) < alpha/2".into());
    }
    let up_ac_count: u64 = sample.upset_ac_levels.iter().sum();
    if 2 * up_ac_count as u128 * mid < (mid - a) * points {
        bad.push("mu_C(up-set of A^c) < (1-alpha)/2".into());
    }
    // Harris chain: meet >= mu(U) mu(V) >= (1/4) alpha (1-alpha) >= gamma/8.
    let meet = sample.meet_count() as u128;
    if meet * points * mid * mid < up_a_count as u128 * up_ac_count as u128 * mid * mid {
        // meet/2^D >= (|U|/2^D)(|V|/2^D)  <=>  meet 2^D >= |U||V|
        bad.push("meet below product of up-set measures".into());
    }
    if 4 * meet * mid * mid < a * (mid - a) * points {
        bad.push("meet < (1/4) alpha (1-alpha)".into());
    }
    if 8 * meet * mid < g * points {
        bad.push("meet < gamma/8".into());
    }
    // Truncation: mu_C(G) >= meet - exp(-2K^2/3).
    let exp_term = params.chernoff_term();
    let trunc = sample.truncated_measure(params.ell());
    if trunc < sample.upset_meet_measure() - exp_term - FLOAT_SLACK {
        bad.push("truncated meet below meet - tail".into());
    }
    // Layer lift: density at the truncation level dominates gamma/8 - tail.
    if let Some(layer) = sample.good_layer_measure(params.ell()) {
        if layer < sample.gamma() / 8.0 - exp_term - FLOAT_SLACK {
            bad.push("layer density below gamma/8 - tail".into());
        }
        // and it also dominates mu_C(G): an up-set's density rises with the
        // level, so the level-l density is at least the truncated measure.
        if layer < trunc - FLOAT_SLACK {
            bad.push("layer density below truncated measure".into());
        }
    }
    bad
}

/// Exact binomial tail Pr[Bin(D, 1/2) > D/2 + ceil(K sqrt(D))] against
/// exp(-2K^2/3).
pub fn chernoff_tail_check(d: u32, k_param: f64) -> Result<(BigRational, f64, bool)> {
    if d == 0 || k_param <= 0.0 {
        return Err(Error::input("need D >= 1 and K > 0"));
    }
    let threshold = d as u64 / 2 + (k_param * (d as f64).sqrt()).ceil() as u64;
    let mut numer = num::BigUint::from(0u32);
    for m in threshold + 1..=d as u64 {
        numer += big_binom(d as u64, m);
    }
    let tail = BigRational::new(
        BigInt::from(numer),
        BigInt::from(num::BigUint::from(1u32) << d as usize),
    );
    let bound = (-2.0 * k_param * k_param / 3.0).exp();
    let ok = tail.to_f64().unwrap_or(f64::NAN) < bound;
    Ok((tail, bound, ok))
}

/// Summary of a batch of seeded subcube samples for one family.
#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub bound: BoundReport,
    pub params: RestrictionParams,
    pub samples: u64,
    pub seed: u64,
    pub mean_gamma: f64,
    pub se_gamma: f64,
    /// Mean and standard error of the meet density at the truncation
    /// level; None when that level is outside the subcube.
    pub mean_good_layer: Option<(f64, f64)>,
    /// mean(gamma)/8 - exp(-2K^2/3).
    pub empirical_bound: f64,
    /// Exact mu of the meet of the r-iterated shadows, when computed.
    pub exact_truth: Option<BigRational>,
    pub violations: Vec<String>,
    /// The per-subcube samples behind the summary statistics.
    pub rows: Vec<RestrictionSample>,
}

/// Draw seeded subcube samples for a family and measure the whole chain.
pub fn run_restriction_samples<F>(
    contains: F,
    n: u32,
    params: &RestrictionParams,
    samples: u64,
    seed: u64,
    threads: usize,
) -> Result<Vec<RestrictionSample>>
where
    F: Fn(u64) -> bool + Sync,
{
    let d = params.d();
    if d == 0 || d > n {
        return Err(Error::input(format!("D = {d} outside 1..=n = {n}")));
    }
    let out = parallel_map_indexed(samples, threads, |idx| {
        let mut rng = subrng(seed, idx);
        let spec = sample_subcube(n, d, &mut rng).expect("validated dimensions");
        analyze_subcube(&contains, &spec).expect("analysis of sampled subcube")
    });
    Ok(out)
}

/// End-to-end pipeline: choose parameters from (epsilon, mu), sample
/// subcubes, and compare empirical, closed-form and (optionally) exact
/// quantities.
pub fn pipeline_estimate(
    family: &LayerFamily,
    epsilon: f64,
    samples: u64,
    seed: u64,
    threads: usize,
    exact: bool,
) -> Result<PipelineReport> {
    let n = family.n();
    if n % 2 != 0 || family.k() != n / 2 {
        return Err(Error::input("pipeline needs a middle-layer family of an even n"));
    }
    if family.is_empty() || family.popcount() == family.layer_size() {
        return Err(Error::input("family must be nonempty and proper"));
    }
    if samples == 0 {
        return Err(Error::input("need at least one sample"));
    }
    let bound = bound_calculator(n, epsilon, family.measure_f64())?;
    let params = RestrictionParams {
        j: bound.j,
        k_param: bound.k_param,
    };
    let rows = run_restriction_samples(
        |m| family.contains_mask(m),
        n,
        &params,
        samples,
        seed,
        threads,
    )?;
    let mut violations = Vec::new();
    for (i, s) in rows.iter().enumerate() {
        for v in check_sample(s, &params) {
            violations.push(format!("sample {i}: {v}"));
        }
    }
    let gammas: Vec<f64> = rows.iter().map(|s| s.gamma()).collect();
    let (mean_gamma, se_gamma) = mean_and_se(&gammas);
    let mean_good_layer = if params.level_in_range() {
        let vals: Vec<f64> = rows
            .iter()
            .map(|s| s.good_layer_measure(params.ell()).expect("level in range"))
            .collect();
        Some(mean_and_se(&vals))
    } else {
        None
    };
    let empirical_bound = mean_gamma / 8.0 - params.chernoff_term();
    let exact_truth = if exact {
        Some(family.intersection_measure(params.r())?)
    } else {
        None
    };
    Ok(PipelineReport {
        bound,
        params,
        samples,
        seed,
        mean_gamma,
        se_gamma,
        mean_good_layer,
        empirical_bound,
        exact_truth,
        violations,
        rows,
    })
}
