//! Exact and Monte-Carlo experiment drivers and table builders, plus
//! CSV/JSON row emission.

use crate::error::{Error, Result};
use crate::family::{ratio_string, LayerFamily, Predicate};
use crate::generate::FamilySpec;
use crate::mc::{parallel_map_indexed, sample_layer_mask, subrng, wilson_interval};
use num::{BigRational, ToPrimitive};
use serde::Serialize;
use serde_json::Value;
use std::io::Write;

/// Largest n for which the exact drivers will materialize iterated
/// shadows by default.
pub const EXACT_DEFAULT_MAX_N: u32 = 22;

/// One run of either driver, resolved from config file + flags.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n: u32,
    pub r: Option<u32>,
    pub epsilon: Option<f64>,
    pub family: FamilySpec,
    pub samples: u64,
    pub seed: u64,
    pub threads: usize,
}

impl ExperimentConfig {
    /// r, either given directly or as ceil(epsilon sqrt(n)).
    pub fn resolve_r(&self) -> Result<u32> {
        match (self.r, self.epsilon) {
            (Some(r), _) => Ok(r),
            (None, Some(eps)) => {
                if !(eps > 0.0 && eps < 1.0) {
                    return Err(Error::input(format!("epsilon = {eps} outside (0, 1)")));
                }
                Ok((eps * (self.n as f64).sqrt()).ceil() as u32)
            }
            (None, None) => Err(Error::input("need --r or --epsilon")),
        }
    }
}

fn f(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact measures of a family, its r-iterated shadow, the complement's,
/// and their intersection.
#[derive(Debug, Clone, Serialize)]
pub struct ExactRow {
    pub n: u32,
    pub r: u32,
    pub family: String,
    pub mu: String,
    pub mu_f64: f64,
    pub shadow_a: String,
    pub shadow_a_f64: f64,
    pub shadow_ac: String,
    pub shadow_ac_f64: f64,
    pub intersection: String,
    pub intersection_f64: f64,
    /// Whether the two iterated shadows cover the whole target layer, so
    /// the intersection measure equals the sum of the two minus 1.
    pub union_is_everything: bool,
}

pub fn run_exact(spec: &FamilySpec, n: u32, r: u32, seed: u64) -> Result<ExactRow> {
    let fam = spec.generate(n, seed)?;
    exact_row_for(&fam, spec.label(), r)
}

pub fn exact_row_for(fam: &LayerFamily, family: String, r: u32) -> Result<ExactRow> {
    let shadow_a = fam.iterated_upper_shadow(r)?;
    let shadow_ac = fam.complement().iterated_upper_shadow(r)?;
    let inter = shadow_a.intersect(&shadow_ac)?;
    let union_count = shadow_a.popcount() + shadow_ac.popcount() - inter.popcount();
    let (mu, sa, sac, im) = (
        fam.measure(),
        shadow_a.measure(),
        shadow_ac.measure(),
        inter.measure(),
    );
    Ok(ExactRow {
        n: fam.n(),
        r,
        family,
        mu_f64: f(&mu),
        mu: ratio_string(&mu),
        shadow_a_f64: f(&sa),
        shadow_a: ratio_string(&sa),
        shadow_ac_f64: f(&sac),
        shadow_ac: ratio_string(&sac),
        intersection_f64: f(&im),
        intersection: ratio_string(&im),
        union_is_everything: union_count == shadow_a.layer_size(),
    })
}

/// Monte-Carlo estimate of the intersection measure at layer n/2 + r.
#[derive(Debug, Clone, Serialize)]
pub struct McRow {
    pub n: u32,
    pub r: u32,
    pub family: String,
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

enum Membership {
    Closed(Predicate, Predicate),
    Explicit(LayerFamily, LayerFamily),
}

pub fn run_mc(
    spec: &FamilySpec,
    n: u32,
    r: u32,
    samples: u64,
    seed: u64,
    threads: usize,
) -> Result<McRow> {
    if samples == 0 {
        return Err(Error::input("need at least one sample"));
    }
    let k = n / 2;
    if k + r > n {
        return Err(Error::input(format!("layer n/2 + r = {} above n = {n}", k + r)));
    }
    let membership = match spec.predicate(n)? {
        Some(p) => Membership::Closed(p.complement(), p),
        None => {
            let fam = spec.generate(n, seed)?;
            let co = fam.complement();
            Membership::Explicit(co, fam)
        }
    };
    let hits: u64 = parallel_map_indexed(samples, threads, |i| {
        let mut rng = subrng(seed, i);
        let b = sample_layer_mask(n, k + r, &mut rng);
        let both = match &membership {
            Membership::Closed(co, p) => {
                p.in_iterated_shadow(b, r).expect("closed-form membership")
                    && co.in_iterated_shadow(b, r).expect("closed-form membership")
            }
            Membership::Explicit(co, fam) => {
                fam.in_iterated_shadow(b, r).expect("within enumeration cap")
                    && co.in_iterated_shadow(b, r).expect("within enumeration cap")
            }
        };
        u64::from(both)
    })
    .into_iter()
    .sum();
    let (ci_lo, ci_hi) = wilson_interval(hits, samples, 1.96);
    Ok(McRow {
        n,
        r,
        family: spec.label(),
        samples,
        hits,
        estimate: hits as f64 / samples as f64,
        ci_lo,
        ci_hi,
    })
}

/// One cell of the Conjecture-style evidence table: the intersection
/// measure at r = ceil(epsilon sqrt(n)) and its ratio to epsilon.
/// Reported, never asserted.
#[derive(Debug, Clone, Serialize)]
pub struct ConjectureRow {
    pub n: u32,
    pub epsilon: f64,
    pub r: u32,
    pub family: String,
    pub mode: String,
    pub measure: String,
    pub measure_f64: f64,
    pub ratio_to_epsilon: f64,
}

pub fn conjecture_table(
    spec: &FamilySpec,
    n_list: &[u32],
    eps_list: &[f64],
    samples: u64,
    seed: u64,
    threads: usize,
) -> Result<Vec<ConjectureRow>> {
    let mut rows = Vec::new();
    for &n in n_list {
        for &eps in eps_list {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::input(format!("epsilon = {eps} outside (0, 1)")));
            }
            let r = (eps * (n as f64).sqrt()).ceil() as u32;
            let row = if n <= EXACT_DEFAULT_MAX_N {
                let e = run_exact(spec, n, r, seed)?;
                ConjectureRow {
                    n,
                    epsilon: eps,
                    r,
                    family: e.family,
                    mode: "exact".into(),
                    measure: e.intersection,
                    measure_f64: e.intersection_f64,
                    ratio_to_epsilon: e.intersection_f64 / eps,
                }
            } else {
                let m = run_mc(spec, n, r, samples, seed, threads)?;
                ConjectureRow {
                    n,
                    epsilon: eps,
                    r,
                    family: m.family,
                    mode: "mc".into(),
                    measure: format!("{}/{}", m.hits, m.samples),
                    measure_f64: m.estimate,
                    ratio_to_epsilon: m.estimate / eps,
                }
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

/// The half-half scaling table: exact intersection measures with the
/// value scaled by sqrt(n)/r, the candidate asymptotic constant.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingRow {
    pub n: u32,
    pub r: u32,
    pub measure: String,
    pub measure_f64: f64,
    pub scaled: f64,
}

pub fn half_half_table(n_list: &[u32], r_list: &[u32]) -> Result<Vec<ScalingRow>> {
    let mut rows = Vec::new();
    for &n in n_list {
        let fam = FamilySpec::HalfHalf.generate(n, 0)?;
        for &r in r_list {
            let m = fam.intersection_measure(r)?;
            let m64 = f(&m);
            rows.push(ScalingRow {
                n,
                r,
                measure: ratio_string(&m),
                measure_f64: m64,
                scaled: m64 * (n as f64).sqrt() / r as f64,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<OutputFormat> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::input(format!("unknown format '{s}', want csv or json"))),
        }
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn value_cell(v: &Value) -> String {
    match v {
        Value::String(s) => csv_escape(s),
        other => other.to_string(),
    }
}

/// Serialize rows as a CSV table (alphabetical column order) or a JSON
/// array, byte-deterministically.
pub fn render_rows<T: Serialize>(rows: &[T], format: OutputFormat) -> Result<String> {
    let values: Vec<Value> = rows
        .iter()
        .map(|r| serde_json::to_value(r).map_err(|e| Error::Format(e.to_string())))
        .collect::<Result<_>>()?;
    match format {
        OutputFormat::Json => {
            serde_json::to_string_pretty(&values).map_err(|e| Error::Format(e.to_string()))
        }
        OutputFormat::Csv => {
            let mut out = String::new();
            let Some(first) = values.first() else {
                return Ok(out);
            };
            let obj = first
                .as_object()
                .ok_or_else(|| Error::Format("CSV rows must be flat objects".into()))?;
            let cols: Vec<&String> = obj.keys().collect();
            out.push_str(
                &cols
                    .iter()
                    .map(|c| csv_escape(c))
                    .collect::<Vec<_>>()
                    .join(","),
            );
            out.push('\n');
            for v in &values {
                let obj = v
                    .as_object()
                    .ok_or_else(|| Error::Format("CSV rows must be flat objects".into()))?;
                let cells: Vec<String> = cols
                    .iter()
                    .map(|c| obj.get(*c).map(value_cell).unwrap_or_default())
                    .collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            Ok(out)
        }
    }
}

/// Write rendered output to a file or stdout.
pub fn emit(text: &str, out: Option<&std::path::Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            let stdout = std::io::stdout();
            let mut h = stdout.lock();
            h.write_all(text.as_bytes()).map_err(Error::from)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dictator_exact_closed_form() {
        // mu(shadow^r A) = 1/2 + r/n; complement's shadow is everything.
        for (n, r) in [(10u32, 1u32), (10, 3), (16, 2)] {
            let row = run_exact(&FamilySpec::Dictator, n, r, 0).unwrap();
            let want = 0.5 + r as f64 / n as f64;
            assert!((row.shadow_a_f64 - want).abs() < 1e-12);
            assert_eq!(row.shadow_ac, "1");
            assert!((row.intersection_f64 - want).abs() < 1e-12);
            assert!(row.union_is_everything);
        }
    }

    #[test]
    fn single_set_top_layer() {
        // |A| = 1, r = n/2: shadow of A is {[n]}; the complement's shadow
        // is also everything at the top, so the intersection is {[n]}.
        let n = 8u32;
        let row = run_exact(&FamilySpec::LexSegment(1), n, n / 2, 0).unwrap();
        assert_eq!(row.intersection, "1");
    }

    #[test]
    fn mc_matches_exact_for_dictator() {
        // n = 20, r = 2: exact value 0.6; 10^4 samples put it inside the CI.
        let row = run_mc(&FamilySpec::Dictator, 20, 2, 10_000, 11, 1).unwrap();
        assert!(row.ci_lo <= 0.6 && 0.6 <= row.ci_hi, "CI [{}, {}]", row.ci_lo, row.ci_hi);
        assert!((row.estimate - 0.6).abs() < 0.03);
    }

    #[test]
    fn mc_explicit_family_agrees_with_exact() {
        let spec = FamilySpec::Random { p: 0.4 };
        let (n, r) = (12u32, 1u32);
        let exact = run_exact(&spec, n, r, 3).unwrap();
        let mc = run_mc(&spec, n, r, 20_000, 3, 1).unwrap();
        assert!(
            mc.ci_lo <= exact.intersection_f64 && exact.intersection_f64 <= mc.ci_hi,
            "exact {} CI [{}, {}]",
            exact.intersection_f64,
            mc.ci_lo,
            mc.ci_hi
        );
    }

    #[test]
    fn mc_input_errors() {
        assert!(run_mc(&FamilySpec::Dictator, 10, 1, 0, 0, 1).is_err());
        assert!(run_mc(&FamilySpec::Dictator, 10, 6, 10, 0, 1).is_err());
    }

    #[test]
    fn mc_deterministic_across_threads() {
        let a = run_mc(&FamilySpec::HalfHalf, 18, 2, 5000, 7, 1).unwrap();
        let b = run_mc(&FamilySpec::HalfHalf, 18, 2, 5000, 7, 4).unwrap();
        assert_eq!(a.hits, b.hits);
    }

    #[test]
    fn conjecture_rows_positive() {
        let rows =
            conjecture_table(&FamilySpec::HalfHalf, &[6, 10], &[0.3, 0.5], 100, 1, 1).unwrap();
        assert_eq!(rows.len(), 4);
        for row in &rows {
            assert!(row.ratio_to_epsilon > 0.0);
            assert_eq!(row.mode, "exact");
        }
    }

    #[test]
    fn half_half_table_shape() {
        let rows = half_half_table(&[6, 10], &[1, 2]).unwrap();
        assert_eq!(rows.len(), 4);
        for row in &rows {
            assert!(row.measure_f64 > 0.0 && row.scaled > 0.0);
        }
    }

    #[test]
    fn render_csv_and_json() {
        let rows = half_half_table(&[6], &[1]).unwrap();
        let csv = render_rows(&rows, OutputFormat::Csv).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "measure,measure_f64,n,r,scaled");
        assert_eq!(lines.clone().count(), 1);
        let json = render_rows(&rows, OutputFormat::Json).unwrap();
        let parsed: Vec<Value> = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0]["n"], 6);
        // deterministic
        assert_eq!(csv, render_rows(&rows, OutputFormat::Csv).unwrap());
    }

    #[test]
    fn config_resolves_r() {
        let mut cfg = ExperimentConfig {
            n: 16,
            r: None,
            epsilon: Some(0.5),
            family: FamilySpec::Dictator,
            samples: 10,
            seed: 0,
            threads: 1,
        };
        assert_eq!(cfg.resolve_r().unwrap(), 2);
        cfg.r = Some(3);
        assert_eq!(cfg.resolve_r().unwrap(), 3);
        cfg.r = None;
        cfg.epsilon = None;
        assert!(cfg.resolve_r().is_err());
    }
}
