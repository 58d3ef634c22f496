//! Command-line front end: family generation, exact and Monte-Carlo
//! shadow experiments, spectral checks, Kruskal–Katona bounds, the
//! restriction pipeline, the bound calculator, conjecture evidence tables
//! and the verification suites.

use clap::{Args, Parser, Subcommand};
use itershadow::error::{Error, Result};
use itershadow::experiments::{
    conjecture_table, emit, half_half_table, render_rows, run_exact, run_mc, OutputFormat,
};
use itershadow::family::ratio_string;
use itershadow::generate::FamilySpec;
use itershadow::kk::{kk_iterated_lower_bound, shadow_closure_check};
use itershadow::lfam;
use itershadow::spectra::spectrum_report;
use itershadow::subcube::pipeline_estimate;
use itershadow::verify::{report, run_suite, Suite};
use num::BigRational;
use serde_json::json;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "itershadow", version, about = "iterated upper-shadow toolkit")]
struct Cli {
    #[command(flatten)]
    globals: Globals,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Globals {
    /// Ground-set size (even).
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Stability parameter; r defaults to ceil(epsilon*sqrt(n)).
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Shadow iteration depth (overrides --epsilon).
    #[arg(long, global = true)]
    r: Option<u32>,
    /// Family spec: dictator | half-half | lex:SIZE | random:P |
    /// weight:E1,..:T | file:PATH.
    #[arg(long, global = true)]
    family: Option<String>,
    /// Master RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte-Carlo sample count.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Worker threads (results are identical at any count).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format: csv or json.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Output path (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML config file with key = value defaults for these flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named family and write it as an LFAM file.
    GenFamily,
    /// Exact measures of the r-iterated shadows and their intersection.
    ShadowExact,
    /// Monte-Carlo estimate of the iterated-shadow intersection measure.
    ShadowMc,
    /// Johnson-graph spectrum and spectral-gap report.
    Spectra {
        /// Distance parameter j of J(n, n/2, j).
        #[arg(long)]
        j: u32,
    },
    /// Lex-segment shadow-closure check and iterated lower bound.
    KkBound {
        /// Lex segment size on the middle layer.
        #[arg(long)]
        size: u64,
    },
    /// Random-restriction pipeline over seeded subcube samples.
    RestrictPipeline {
        /// Also compute the exact intersection measure.
        #[arg(long)]
        exact: bool,
    },
    /// Explicit-bound calculator.
    BoundCalc {
        /// Family measure mu; defaults to the measure of --family at --n.
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Conjecture evidence table over n and epsilon grids.
    ConjectureTable {
        /// Comma-separated n values.
        #[arg(long, value_delimiter = ',', default_values_t = vec![6u32, 10, 14, 18])]
        n_list: Vec<u32>,
        /// Comma-separated epsilon values.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.3f64, 0.5, 0.8])]
        eps_list: Vec<f64>,
    },
    /// Half-half scaling table (exact values, scaled by sqrt(n)/r).
    ScalingTable {
        #[arg(long, value_delimiter = ',', default_values_t = vec![6u32, 10, 14, 18, 22, 26])]
        n_list: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u32, 2])]
        r_list: Vec<u32>,
    },
    /// Run an invariant suite: core | kk | spectra | restriction | all.
    Verify {
        suite: String,
        /// Append a deliberately failing check (negative control).
        #[arg(long, hide = true)]
        inject_failure: bool,
    },
}

/// Resolved settings: config-file values overridden by CLI flags.
struct Settings {
    n: Option<u32>,
    epsilon: Option<f64>,
    r: Option<u32>,
    family: Option<String>,
    seed: u64,
    samples: u64,
    threads: usize,
    format: OutputFormat,
    out: Option<PathBuf>,
}

fn toml_get<T: FromStr>(table: &toml::Table, key: &str) -> Result<Option<T>> {
    let Some(v) = table.get(key) else {
        return Ok(None);
    };
    let s = match v {
        toml::Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    s.parse::<T>()
        .map(Some)
        .map_err(|_| Error::input(format!("config key '{key}' has bad value '{s}'")))
}

impl Settings {
    fn resolve(g: &Globals) -> Result<Settings> {
        let table: toml::Table = match &g.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                text.parse()
                    .map_err(|e| Error::input(format!("config parse error: {e}")))?
            }
            None => toml::Table::new(),
        };
        let format = g
            .format
            .clone()
            .or(toml_get(&table, "format")?)
            .unwrap_or_else(|| "json".into());
        Ok(Settings {
            n: g.n.or(toml_get(&table, "n")?),
            epsilon: g.epsilon.or(toml_get(&table, "epsilon")?),
            r: g.r.or(toml_get(&table, "r")?),
            family: g.family.clone().or(toml_get(&table, "family")?),
            seed: g.seed.or(toml_get(&table, "seed")?).unwrap_or(0),
            samples: g.samples.or(toml_get(&table, "samples")?).unwrap_or(10_000),
            threads: g.threads.or(toml_get(&table, "threads")?).unwrap_or(1),
            format: OutputFormat::parse(&format)?,
            out: g.out.clone().or(toml_get::<PathBuf>(&table, "out")?),
        })
    }

    fn need_n(&self) -> Result<u32> {
        self.n.ok_or_else(|| Error::input("--n is required"))
    }

    fn need_family(&self) -> Result<FamilySpec> {
        let s = self
            .family
            .as_deref()
            .ok_or_else(|| Error::input("--family is required"))?;
        FamilySpec::parse(s)
    }

    fn need_r(&self, n: u32) -> Result<u32> {
        match (self.r, self.epsilon) {
            (Some(r), _) => Ok(r),
            (None, Some(eps)) => {
                if !(eps > 0.0 && eps < 1.0) {
                    return Err(Error::input(format!("epsilon = {eps} outside (0, 1)")));
                }
                Ok((eps * (n as f64).sqrt()).ceil() as u32)
            }
            (None, None) => Err(Error::input("need --r or --epsilon")),
        }
    }

    fn need_epsilon(&self) -> Result<f64> {
        self.epsilon
            .ok_or_else(|| Error::input("--epsilon is required"))
    }
}

fn rstr(r: &BigRational) -> String {
    ratio_string(r)
}

fn run(cli: Cli) -> Result<i32> {
    let s = Settings::resolve(&cli.globals)?;
    match cli.command {
        Command::GenFamily => {
            let n = s.need_n()?;
            let fam = s.need_family()?.generate(n, s.seed)?;
            let out = s
                .out
                .as_deref()
                .ok_or_else(|| Error::input("gen-family needs --out PATH"))?;
            let manifest = lfam::write_family(&fam, out)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&manifest).map_err(|e| Error::Format(e.to_string()))?
            );
        }
        Command::ShadowExact => {
            let n = s.need_n()?;
            let r = s.need_r(n)?;
            let row = run_exact(&s.need_family()?, n, r, s.seed)?;
            emit(&render_rows(&[row], s.format)?, s.out.as_deref())?;
        }
        Command::ShadowMc => {
            let n = s.need_n()?;
            let r = s.need_r(n)?;
            let row = run_mc(&s.need_family()?, n, r, s.samples, s.seed, s.threads)?;
            emit(&render_rows(&[row], s.format)?, s.out.as_deref())?;
        }
        Command::Spectra { j } => {
            let n = s.need_n()?;
            let rep = spectrum_report(n, j)?;
            let rows: Vec<serde_json::Value> = (0..rep.lambda.len())
                .map(|i| {
                    json!({
                        "n": rep.n,
                        "j": rep.j,
                        "i": i,
                        "lambda": rep.lambda[i].to_string(),
                        "lambda_tilde": rstr(&rep.lambda_tilde[i]),
                        "mu_tilde": rstr(&rep.mu_tilde[i]),
                        "gap": rstr(&rep.gap),
                        "hypothesis_met": rep.hypothesis_met,
                        "verdict": rep.gap_verdict,
                    })
                })
                .collect();
            emit(&render_rows(&rows, s.format)?, s.out.as_deref())?;
        }
        Command::KkBound { size } => {
            let n = s.need_n()?;
            let r = s.need_r(n).unwrap_or(1);
            let k = n / 2;
            let check = shadow_closure_check(n, k, size, r)?;
            let measure = BigRational::new(
                num::BigInt::from(size),
                num::BigInt::from(itershadow::binom::binom(n, k)),
            );
            let bound = kk_iterated_lower_bound(n, &measure, r)?;
            let row = json!({
                "n": n,
                "k": k,
                "r": r,
                "size": size,
                "is_lex_segment": check.is_lex_segment,
                "segment_measure": rstr(&check.segment_measure),
                "shadow_measure": rstr(&check.shadow_measure),
                "shadow_size": check.shadow_size,
                "kk_lower_bound": rstr(&bound.bound),
            });
            emit(&render_rows(&[row], s.format)?, s.out.as_deref())?;
        }
        Command::RestrictPipeline { exact } => {
            let n = s.need_n()?;
            let eps = s.need_epsilon()?;
            let fam = s.need_family()?.generate(n, s.seed)?;
            let rep = pipeline_estimate(&fam, eps, s.samples, s.seed, s.threads, exact)?;
            let ell = rep.params.ell();
            let mut rows: Vec<serde_json::Value> = rep
                .rows
                .iter()
                .enumerate()
                .map(|(i, smp)| {
                    json!({
                        "kind": "sample",
                        "index": i,
                        "alpha": smp.alpha(),
                        "gamma": smp.gamma(),
                        "meet": smp.upset_meet_measure(),
                        "truncated": smp.truncated_measure(ell),
                        "good_layer": smp.good_layer_measure(ell),
                    })
                })
                .collect();
            rows.push(json!({
                "kind": "summary",
                "index": rep.samples,
                "alpha": rep.bound.mu,
                "gamma": rep.mean_gamma,
                "meet": rep.empirical_bound,
                "truncated": rep.bound.explicit_bound,
                "good_layer": rep.mean_good_layer.map(|(m, _)| m),
            }));
            if !rep.violations.is_empty() {
                return Err(Error::Verification(format!(
                    "{} per-sample invariant violations; first: {}",
                    rep.violations.len(),
                    rep.violations[0]
                )));
            }
            emit(&render_rows(&rows, s.format)?, s.out.as_deref())?;
        }
        Command::BoundCalc { mu } => {
            let n = s.need_n()?;
            let mu = match mu {
                Some(m) => m,
                None => s.need_family()?.generate(n, s.seed)?.measure_f64(),
            };
            let rep = itershadow::bound::bound_calculator(n, s.need_epsilon()?, mu)?;
            emit(&render_rows(&[rep], s.format)?, s.out.as_deref())?;
        }
        Command::ConjectureTable { n_list, eps_list } => {
            let spec = match &s.family {
                Some(f) => FamilySpec::parse(f)?,
                None => FamilySpec::HalfHalf,
            };
            let rows = conjecture_table(&spec, &n_list, &eps_list, s.samples, s.seed, s.threads)?;
            emit(&render_rows(&rows, s.format)?, s.out.as_deref())?;
        }
        Command::ScalingTable { n_list, r_list } => {
            let rows = half_half_table(&n_list, &r_list)?;
            emit(&render_rows(&rows, s.format)?, s.out.as_deref())?;
        }
        Command::Verify {
            suite,
            inject_failure,
        } => {
            let checks = run_suite(Suite::parse(&suite)?, inject_failure);
            let (human, failures_json, all_pass) = report(&checks);
            print!("{human}");
            if let Some(out) = s.out.as_deref() {
                std::fs::write(out, &failures_json)?;
            }
            if !all_pass {
                eprintln!("{failures_json}");
                return Err(Error::Verification("one or more checks failed".into()));
            }
        }
    }
    Ok(0)
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
