//! Adjacency eigenvalues of the distance-2j graph on the middle layer
//! (vertex set C([n], n/2), edges at symmetric difference 2j), the
//! normalized-Laplacian gap bound, and the edge-expansion consequence for
//! layer families.

use crate::binom::binom;
use crate::error::{Error, Result};
use crate::family::LayerFamily;
use crate::mask::{low_mask, next_same_popcount};
use nalgebra::DMatrix;
use num::{BigInt, BigRational, Signed};

/// Vertex-count guard for the dense eigensolver oracle.
pub const DENSE_ORACLE_MAX_VERTICES: u64 = 1000;

fn check_params(n: u32, j: u32) -> Result<u32> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::input(format!("n = {n} must be positive and even")));
    }
    let k = n / 2;
    if j == 0 || j > k {
        return Err(Error::input(format!("j = {j} outside 1..=n/2 = {k}")));
    }
    Ok(k)
}

/// Degree d = C(n/2, j)^2 of the distance-2j graph on the middle layer.
pub fn degree(n: u32, j: u32) -> Result<u64> {
    let k = check_params(n, j)?;
    let c = binom(k, j);
    Ok(c * c)
}

/// The i-th distinct adjacency eigenvalue:
/// lambda(i) = sum_{h=0}^{min(i,j)} (-1)^h C(i,h) C(k-i, j-h)^2.
pub fn eigenvalue(n: u32, j: u32, i: u32) -> Result<i128> {
    let k = check_params(n, j)?;
    if i > k {
        return Err(Error::input(format!("i = {i} outside 0..=n/2 = {k}")));
    }
    let mut acc: i128 = 0;
    for h in 0..=i.min(j) {
        let c = binom(k - i, j - h) as i128;
        let term = binom(i, h) as i128 * c * c;
        if h % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Full spectral data for one (n, j), kept exact.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub n: u32,
    pub j: u32,
    /// eta = j/n.
    pub eta: BigRational,
    pub degree: u64,
    /// Adjacency eigenvalues lambda(0..=n/2), distinct values only.
    pub lambda: Vec<i128>,
    /// lambda(i)/d.
    pub lambda_tilde: Vec<BigRational>,
    /// Normalized-Laplacian eigenvalues 1 - lambda(i)/d.
    pub mu_tilde: Vec<BigRational>,
    /// min over i >= 1 of mu_tilde(i).
    pub gap: BigRational,
    /// Whether eta <= 1/10, the hypothesis of the gap bound.
    pub hypothesis_met: bool,
    /// gap >= eta/2; only evaluated when the hypothesis holds.
    pub gap_verdict: Option<bool>,
}

pub fn spectrum_report(n: u32, j: u32) -> Result<SpectrumReport> {
    let k = check_params(n, j)?;
    let d = degree(n, j)?;
    let d_big = BigInt::from(d);
    let mut lambda = Vec::with_capacity(k as usize + 1);
    let mut lambda_tilde = Vec::with_capacity(k as usize + 1);
    let mut mu_tilde = Vec::with_capacity(k as usize + 1);
    let one = BigRational::new(BigInt::from(1), BigInt::from(1));
    for i in 0..=k {
        let lam = eigenvalue(n, j, i)?;
        let lt = BigRational::new(BigInt::from(lam), d_big.clone());
        mu_tilde.push(&one - &lt);
        lambda.push(lam);
        lambda_tilde.push(lt);
    }
    let gap = mu_tilde[1..]
        .iter()
        .min()
        .expect("k >= 1 so at least one nonzero index")
        .clone();
    let eta = BigRational::new(BigInt::from(j), BigInt::from(n));
    let tenth = BigRational::new(BigInt::from(1), BigInt::from(10));
    let hypothesis_met = eta <= tenth;
    let gap_verdict = if hypothesis_met {
        let half_eta = &eta / BigRational::new(BigInt::from(2), BigInt::from(1));
        Some(gap >= half_eta)
    } else {
        None
    };
    Ok(SpectrumReport {
        n,
        j,
        eta,
        degree: d,
        lambda,
        lambda_tilde,
        mu_tilde,
        gap,
        hypothesis_met,
        gap_verdict,
    })
}

/// Exact check of |lambda(i)|/d <= (1 - eta/2)^i with eta = j/n.
/// Requires eta <= 1/10.
pub fn koshelev_bound_check(n: u32, j: u32, i: u32) -> Result<(BigRational, BigRational, bool)> {
    let k = check_params(n, j)?;
    if i == 0 || i > k {
        return Err(Error::input(format!("i = {i} outside 1..=n/2 = {k}")));
    }
    if 10 * j > n {
        return Err(Error::Hypothesis(format!("eta = {j}/{n} > 1/10")));
    }
    let lam = eigenvalue(n, j, i)?;
    let d = degree(n, j)?;
    let lhs = BigRational::new(BigInt::from(lam), BigInt::from(d)).abs();
    // (1 - eta/2)^i = ((2n - j)/(2n))^i, exact.
    let base = BigRational::new(BigInt::from(2 * n - j), BigInt::from(2 * n));
    let mut rhs = BigRational::new(BigInt::from(1), BigInt::from(1));
    for _ in 0..i {
        rhs *= &base;
    }
    let ok = lhs <= rhs;
    Ok((lhs, rhs, ok))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCase {
    /// ceil((k-i)/2) < j: the central binomial of k-i dominates.
    CentralBinomial,
    /// j <= ceil((k-i)/2): the h = 0 term dominates.
    TopTerm,
}

/// The intermediate bound used in the two-case eigenvalue estimate:
/// which case applies at (n, j, i) and the binomial-ratio value that
/// dominates max_h C(k-i, j-h)/C(k, j).
pub fn case_split_bound(n: u32, j: u32, i: u32) -> Result<(BoundCase, BigRational)> {
    let k = check_params(n, j)?;
    if i == 0 || i > k {
        return Err(Error::input(format!("i = {i} outside 1..=n/2 = {k}")));
    }
    if 10 * j > n {
        return Err(Error::Hypothesis(format!("eta = {j}/{n} > 1/10")));
    }
    let rem = k - i;
    let denom = BigInt::from(binom(k, j));
    let (case, numer) = if (rem + 1) / 2 < j {
        (BoundCase::CentralBinomial, binom(rem, (rem + 1) / 2))
    } else {
        (BoundCase::TopTerm, binom(rem, j))
    };
    Ok((case, BigRational::new(BigInt::from(numer), denom)))
}

/// max over h of C(k-i, j-h)/C(k, j); the quantity the case bound must
/// dominate.
pub fn max_ratio_term(n: u32, j: u32, i: u32) -> Result<BigRational> {
    let k = check_params(n, j)?;
    if i > k {
        return Err(Error::input(format!("i = {i} > n/2")));
    }
    let denom = BigInt::from(binom(k, j));
    let best = (0..=i.min(j))
        .map(|h| binom(k - i, j - h))
        .max()
        .unwrap_or(0);
    Ok(BigRational::new(BigInt::from(best), denom))
}

/// The scalar inequality behind the central-binomial case:
/// 2^(1/2) (2 eta)^eta <= (2 - eta)^(1/2 - 2 eta) for eta in (0, 1/10].
pub fn case1_scalar_inequality(eta: f64) -> bool {
    debug_assert!(eta > 0.0 && eta <= 0.1);
    let lhs = 0.5 * std::f64::consts::LN_2 + eta * (2.0 * eta).ln();
    let rhs = (0.5 - 2.0 * eta) * (2.0 - eta).ln();
    lhs <= rhs
}

/// All eigenvalues (with multiplicity) of the dense adjacency matrix,
/// computed numerically. Independent verification route; guarded by
/// [`DENSE_ORACLE_MAX_VERTICES`].
pub fn dense_spectrum_oracle(n: u32, j: u32) -> Result<Vec<f64>> {
    let k = check_params(n, j)?;
    let verts = binom(n, k);
    if verts > DENSE_ORACLE_MAX_VERTICES {
        return Err(Error::capacity(format!(
            "C({n},{k}) = {verts} vertices exceed dense-oracle limit {DENSE_ORACLE_MAX_VERTICES}"
        )));
    }
    let verts = verts as usize;
    let mut masks = Vec::with_capacity(verts);
    let mut m = low_mask(k);
    for idx in 0..verts {
        masks.push(m);
        if idx + 1 < verts {
            m = next_same_popcount(m);
        }
    }
    let mut adj = DMatrix::<f64>::zeros(verts, verts);
    for a in 0..verts {
        for b in a + 1..verts {
            if (masks[a] ^ masks[b]).count_ones() == 2 * j {
                adj[(a, b)] = 1.0;
                adj[(b, a)] = 1.0;
            }
        }
    }
    let eigen = adj.symmetric_eigen();
    let mut vals: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(vals)
}

/// Edge-expansion consequence of the spectral gap for a middle-layer
/// family: measured good-pair density against (eta/2) mu (1 - mu).
#[derive(Debug, Clone)]
pub struct ExpansionReport {
    pub n: u32,
    pub j: u32,
    pub measured_q: BigRational,
    pub bound: BigRational,
    pub hypothesis_met: bool,
    pub verdict: bool,
}

pub fn expansion_lower_bound(family: &LayerFamily, j: u32) -> Result<ExpansionReport> {
    let n = family.n();
    if family.k() != n / 2 || n % 2 != 0 {
        return Err(Error::input("family must live at the middle layer of an even n"));
    }
    check_params(n, j)?;
    let census = family.pair_census(j)?;
    let q = census.q();
    let mu = family.measure();
    let one = BigRational::new(BigInt::from(1), BigInt::from(1));
    let bound = BigRational::new(BigInt::from(j), BigInt::from(2 * n)) * &mu * (&one - &mu);
    let hypothesis_met = 10 * j <= n;
    let verdict = q >= bound;
    Ok(ExpansionReport {
        n,
        j,
        measured_q: q,
        bound,
        hypothesis_met,
        verdict,
    })
}
