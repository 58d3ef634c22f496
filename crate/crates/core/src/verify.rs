//! Named invariant suites behind the `verify` subcommand: quick versions
//! of every module's property checks, with a machine-readable failure log.

use crate::error::{Error, Result};
use crate::family::LayerFamily;
use crate::generate::FamilySpec;
use crate::kk::closure_violation_over_sizes;
use crate::mc::subrng;
use crate::spectra::{
    case1_scalar_inequality, dense_spectrum_oracle, eigenvalue, koshelev_bound_check,
    spectrum_report, DENSE_ORACLE_MAX_VERTICES,
};
use crate::subcube::{
    check_sample, harris_check, run_restriction_samples, upset_from_middle, chernoff_tail_check,
    CubeSet, RestrictionParams,
};
use num::{BigInt, BigRational, ToPrimitive};
use rand::Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Core,
    Kk,
    Spectra,
    Restriction,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Suite> {
        match s {
            "core" => Ok(Suite::Core),
            "kk" => Ok(Suite::Kk),
            "spectra" => Ok(Suite::Spectra),
            "restriction" => Ok(Suite::Restriction),
            "all" => Ok(Suite::All),
            _ => Err(Error::input(format!(
                "unknown suite '{s}'; expected core, kk, spectra, restriction or all"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(
    out: &mut Vec<Check>,
    suite: &'static str,
    name: &'static str,
    result: std::result::Result<(), String>,
) {
    match result {
        Ok(()) => out.push(Check {
            suite,
            name,
            pass: true,
            detail: String::new(),
        }),
        Err(detail) => out.push(Check {
            suite,
            name,
            pass: false,
            detail,
        }),
    }
}

fn random_middle_family(n: u32, p: f64, seed: u64) -> LayerFamily {
    let mut rng = subrng(seed, 0);
    let mut f = LayerFamily::empty(n, n / 2).expect("small n");
    for r in 0..f.layer_size() {
        if rng.gen::<f64>() < p {
            f.insert_rank(r);
        }
    }
    f
}

fn core_suite(out: &mut Vec<Check>) {
    const S: &str = "core";
    check(out, S, "shadow-monotone", (|| {
        for seed in 0..5u64 {
            let b = random_middle_family(12, 0.5, 100 + seed);
            // random subfamily of b
            let mut rng = subrng(200 + seed, 1);
            let mut a = LayerFamily::empty(12, 6).expect("small n");
            b.for_each_member(|rank, _| {
                if rng.gen::<bool>() {
                    a.insert_rank(rank);
                }
            });
            let sa = a.upper_shadow().map_err(|e| e.to_string())?;
            let sb = b.upper_shadow().map_err(|e| e.to_string())?;
            if !sa.is_subset_of(&sb) {
                return Err(format!("seed {seed}: shadow of subfamily escapes"));
            }
        }
        Ok(())
    })());
    check(out, S, "local-lym", (|| {
        for seed in 0..5u64 {
            for n in [8u32, 10, 12] {
                let a = random_middle_family(n, 0.4, 300 + seed);
                if a.is_empty() {
                    continue;
                }
                let s = a.upper_shadow().map_err(|e| e.to_string())?;
                if s.measure() < a.measure() {
                    return Err(format!("n = {n}, seed {seed}: shadow measure dropped"));
                }
            }
        }
        Ok(())
    })());
    check(out, S, "dictator-exact", (|| {
        let n = 12u32;
        let dict = FamilySpec::Dictator.generate(n, 0).map_err(|e| e.to_string())?;
        for r in 1..=3u32 {
            let got = dict
                .iterated_upper_shadow(r)
                .map_err(|e| e.to_string())?
                .measure();
            let want = BigRational::new(BigInt::from(n + 2 * r), BigInt::from(2 * n));
            if got != want {
                return Err(format!("r = {r}: measure off the closed form"));
            }
        }
        let co = dict.complement().upper_shadow().map_err(|e| e.to_string())?;
        if co.popcount() != co.layer_size() {
            return Err("complement shadow is not everything".into());
        }
        Ok(())
    })());
    check(out, S, "compose-vs-direct", (|| {
        let a = random_middle_family(10, 0.5, 400);
        for r in 1..=2u32 {
            let x = a.iterated_upper_shadow(r).map_err(|e| e.to_string())?;
            let y = a.iterated_upper_shadow_direct(r).map_err(|e| e.to_string())?;
            if x.words() != y.words() {
                return Err(format!("r = {r}: composed and direct shadows differ"));
            }
        }
        Ok(())
    })());
}

fn kk_suite(out: &mut Vec<Check>) {
    const S: &str = "kk";
    check(out, S, "lex-closure", (|| {
        for n in 4..=10u32 {
            for k in 1..n {
                for r in 1..=2u32 {
                    if k + r > n {
                        continue;
                    }
                    if let Some(size) =
                        closure_violation_over_sizes(n, k, r).map_err(|e| e.to_string())?
                    {
                        return Err(format!("n = {n}, k = {k}, r = {r}: violation at size {size}"));
                    }
                }
            }
        }
        Ok(())
    })());
    check(out, S, "segment-nesting", (|| {
        let (n, k) = (10u32, 5u32);
        let mut prev = crate::kk::lex_segment(n, k, 0).map_err(|e| e.to_string())?;
        for size in 1..=40u64 {
            let seg = crate::kk::lex_segment(n, k, size).map_err(|e| e.to_string())?;
            if !prev.is_subset_of(&seg) {
                return Err(format!("segment of size {size} does not extend its prefix"));
            }
            prev = seg;
        }
        Ok(())
    })());
}

fn spectra_suite(out: &mut Vec<Check>) {
    const S: &str = "spectra";
    check(out, S, "gap-grid", (|| {
        for n in (10..=40u32).step_by(2) {
            for j in 1..=n / 10 {
                let rep = spectrum_report(n, j).map_err(|e| e.to_string())?;
                if rep.gap_verdict != Some(true) {
                    return Err(format!("n = {n}, j = {j}: gap below eta/2"));
                }
            }
        }
        Ok(())
    })());
    check(out, S, "koshelev-grid", (|| {
        for n in (10..=40u32).step_by(2) {
            for j in 1..=n / 10 {
                for i in 1..=n / 2 {
                    let (_, _, ok) = koshelev_bound_check(n, j, i).map_err(|e| e.to_string())?;
                    if !ok {
                        return Err(format!("n = {n}, j = {j}, i = {i}: bound fails"));
                    }
                }
            }
        }
        Ok(())
    })());
    check(out, S, "formula-vs-dense", (|| {
        for n in [4u32, 6, 8] {
            for j in 1..=n / 2 {
                if crate::binom::binom(n, n / 2) > DENSE_ORACLE_MAX_VERTICES {
                    continue;
                }
                let dense = dense_spectrum_oracle(n, j).map_err(|e| e.to_string())?;
                let mut formula: Vec<f64> = (0..=n / 2)
                    .map(|i| eigenvalue(n, j, i).map(|v| v as f64))
                    .collect::<Result<_>>()
                    .map_err(|e| e.to_string())?;
                formula.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
                formula.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
                let mut distinct_dense = dense.clone();
                distinct_dense.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
                if formula.len() != distinct_dense.len() {
                    return Err(format!("n = {n}, j = {j}: distinct eigenvalue count differs"));
                }
                let deg = crate::spectra::degree(n, j).map_err(|e| e.to_string())? as f64;
                for (f, d) in formula.iter().zip(&distinct_dense) {
                    if (f - d).abs() > 1e-9 * deg {
                        return Err(format!("n = {n}, j = {j}: {f} vs {d}"));
                    }
                }
            }
        }
        Ok(())
    })());
    check(out, S, "case1-scalar", (|| {
        for t in 1..=1000u32 {
            let eta = t as f64 / 10_000.0;
            if !case1_scalar_inequality(eta) {
                return Err(format!("fails at eta = {eta}"));
            }
        }
        Ok(())
    })());
}

fn restriction_suite(out: &mut Vec<Check>) {
    const S: &str = "restriction";
    check(out, S, "per-sample-chain", (|| {
        let n = 12u32;
        let fam = random_middle_family(n, 0.5, 500);
        for (j, k_param) in [(2u32, 0.5f64), (4, 1.0)] {
            let params = RestrictionParams { j, k_param };
            let rows = run_restriction_samples(
                |m| fam.contains_mask(m),
                n,
                &params,
                300,
                77,
                1,
            )
            .map_err(|e| e.to_string())?;
            for (i, s) in rows.iter().enumerate() {
                let bad = check_sample(s, &params);
                if !bad.is_empty() {
                    return Err(format!("sample {i} (j = {j}): {}", bad.join("; ")));
                }
            }
        }
        Ok(())
    })());
    check(out, S, "harris-random-pairs", (|| {
        let mut rng = subrng(600, 0);
        for t in 0..200 {
            let d = rng.gen_range(2..=10u32);
            let mut a = CubeSet::empty(d).map_err(|e| e.to_string())?;
            let mut b = CubeSet::empty(d).map_err(|e| e.to_string())?;
            for x in 0..1u64 << d {
                if rng.gen::<f64>() < 0.2 {
                    a.insert(x);
                }
                if rng.gen::<f64>() < 0.2 {
                    b.insert(x);
                }
            }
            let a = upset_from_middle(&a);
            let b = upset_from_middle(&b);
            let rep = harris_check(&a, &b).map_err(|e| e.to_string())?;
            if !rep.verdict {
                return Err(format!("pair {t}: correlation inequality fails"));
            }
        }
        Ok(())
    })());
    check(out, S, "chernoff-tail", (|| {
        for d in [4u32, 16, 64, 144, 400] {
            for k10 in [5u32, 10, 20, 40] {
                let k = k10 as f64 / 10.0;
                let (tail, bound, ok) = chernoff_tail_check(d, k).map_err(|e| e.to_string())?;
                if !ok {
                    return Err(format!(
                        "D = {d}, K = {k}: tail {} >= bound {bound}",
                        tail.to_f64().unwrap_or(f64::NAN)
                    ));
                }
            }
        }
        Ok(())
    })());
}

/// Run a suite. `inject_failure` appends a deliberately failing check,
/// the negative control proving the harness can fail.
pub fn run_suite(suite: Suite, inject_failure: bool) -> Vec<Check> {
    let mut out = Vec::new();
    match suite {
        Suite::Core => core_suite(&mut out),
        Suite::Kk => kk_suite(&mut out),
        Suite::Spectra => spectra_suite(&mut out),
        Suite::Restriction => restriction_suite(&mut out),
        Suite::All => {
            core_suite(&mut out);
            kk_suite(&mut out);
            spectra_suite(&mut out);
            restriction_suite(&mut out);
        }
    }
    if inject_failure {
        out.push(Check {
            suite: "control",
            name: "injected-failure",
            pass: false,
            detail: "negative control: this check always fails".into(),
        });
    }
    out
}

/// Human-readable lines plus a JSON log of failures.
pub fn report(checks: &[Check]) -> (String, String, bool) {
    let mut human = String::new();
    for c in checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        human.push_str(&format!("{status} {}::{}", c.suite, c.name));
        if !c.pass {
            human.push_str(&format!(" — {}", c.detail));
        }
        human.push('\n');
    }
    let failures: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    let all_pass = failures.is_empty();
    human.push_str(&format!(
        "{} checks, {} failed\n",
        checks.len(),
        failures.len()
    ));
    let json = serde_json::to_string_pretty(&failures).expect("serializable checks");
    (human, json, all_pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass() {
        for suite in [Suite::Core, Suite::Kk] {
            let checks = run_suite(suite, false);
            assert!(!checks.is_empty());
            let (_, _, ok) = report(&checks);
            assert!(ok, "{:?}", checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        }
    }

    #[test]
    fn spectra_and_restriction_pass() {
        for suite in [Suite::Spectra, Suite::Restriction] {
            let (_, _, ok) = report(&run_suite(suite, false));
            assert!(ok);
        }
    }

    #[test]
    fn negative_control_fails() {
        let checks = run_suite(Suite::Core, true);
        let (human, json, ok) = report(&checks);
        assert!(!ok);
        assert!(human.contains("FAIL control::injected-failure"));
        assert!(json.contains("injected-failure"));
    }

    #[test]
    fn suite_names() {
        assert!(Suite::parse("all").is_ok());
        assert!(Suite::parse("bogus").is_err());
    }
}
