//! The explicit-bound calculator: solves for the density parameter that
//! balances the expansion gain against the binomial tail loss, and derives
//! the subcube dimension, tail parameter and shadow depth from it.

use crate::error::{Error, Result};
use serde::Serialize;

/// Parameters chosen by the calculator, plus the closed-form lower bound
/// they yield.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub n: u32,
    pub epsilon: f64,
    pub mu: f64,
    /// Root of (1/32) eta mu (1 - mu) = exp(-epsilon^2 / (3 eta)) in
    /// (0, 1/20].
    pub eta_star: f64,
    /// j = ceil(eta_star * n).
    pub j: u32,
    /// Subcube dimension D = 2j.
    pub d_dim: u32,
    /// Tail parameter K with 2K^2 = epsilon^2 n / j.
    pub k_param: f64,
    /// Shadow depth r = ceil(K sqrt(D)).
    pub r: u32,
    /// ceil(epsilon sqrt(n)); equals r up to floating-point rounding of the
    /// identity K sqrt(D) = epsilon sqrt(n).
    pub r_target: u32,
    /// exp(-2K^2/3).
    pub chernoff_term: f64,
    /// (1/16) eta_star mu (1 - mu) - chernoff_term.
    pub explicit_bound: f64,
    /// eta_star * n >= 1/2, the regime the derivation assumes; when false
    /// the bound is reported but vacuous at this n.
    pub precondition_ok: bool,
}

const ETA_MAX: f64 = 0.05; // 1/20
const ETA_SCAN_MIN: f64 = 1e-6;
const SCAN_POINTS: usize = 1000;
const BISECT_TOL: f64 = 1e-12;

fn objective(eta: f64, epsilon: f64, mu: f64) -> f64 {
    eta / 32.0 * mu * (1.0 - mu) - (-epsilon * epsilon / (3.0 * eta)).exp()
}

/// Root of the balance equation in (0, 1/20], by geometric bracket scan and
/// bisection to absolute tolerance 1e-12.
pub fn solve_eta(epsilon: f64, mu: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::input(format!("epsilon = {epsilon} outside (0, 1)")));
    }
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::input(format!("mu = {mu} outside (0, 1)")));
    }
    let ratio = (ETA_MAX / ETA_SCAN_MIN).powf(1.0 / (SCAN_POINTS as f64 - 1.0));
    let mut prev = ETA_SCAN_MIN;
    let mut prev_sign = objective(prev, epsilon, mu) > 0.0;
    let mut bracket = None;
    let mut x = prev;
    for _ in 1..SCAN_POINTS {
        x *= ratio;
        let sign = objective(x.min(ETA_MAX), epsilon, mu) > 0.0;
        if sign != prev_sign {
            bracket = Some((prev, x.min(ETA_MAX)));
            break;
        }
        prev = x.min(ETA_MAX);
        prev_sign = sign;
    }
    let (mut lo, mut hi) = bracket.ok_or_else(|| {
        Error::Infeasible(format!(
            "no sign change of the balance equation in (0, 1/20] for epsilon = {epsilon}, mu = {mu}"
        ))
    })?;
    let lo_positive = objective(lo, epsilon, mu) > 0.0;
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if (objective(mid, epsilon, mu) > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn bound_calculator(n: u32, epsilon: f64, mu: f64) -> Result<BoundReport> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::input(format!("n = {n} must be positive and even")));
    }
    let eta_star = solve_eta(epsilon, mu)?;
    let j = (eta_star * n as f64).ceil().max(1.0) as u32;
    let d_dim = 2 * j;
    let k_param = (epsilon * epsilon * n as f64 / (2.0 * j as f64)).sqrt();
    let r = (k_param * (d_dim as f64).sqrt()).ceil() as u32;
    let r_target = (epsilon * (n as f64).sqrt()).ceil() as u32;
    let chernoff_term = (-2.0 * k_param * k_param / 3.0).exp();
    let explicit_bound = eta_star / 16.0 * mu * (1.0 - mu) - chernoff_term;
    let precondition_ok = eta_star * n as f64 >= 0.5;
    Ok(BoundReport {
        n,
        epsilon,
        mu,
        eta_star,
        j,
        d_dim,
        k_param,
        r,
        r_target,
        chernoff_term,
        explicit_bound,
        precondition_ok,
    })
}
