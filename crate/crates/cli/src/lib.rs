//! `toral-mass`: experiment runner over `toral-core`.
//!
//! Every subcommand writes a data report (JSON, or CSV for `pairdist`) to
//! `--report` or standard output, optional CSV side outputs, and a one-line
//! summary on standard error. Data outputs depend only on the arguments and
//! config, never on the thread count.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use toral_core::brute::{equivalence_suite, EquivalenceCheck};
use toral_core::correlations::{
    check_diagonal_domination, check_hypothesis_a, count_correlations, count_quasi_correlations,
    for_each_zero_sum_tuple, HypothesisA, DEFAULT_BUDGET,
};
use toral_core::experiment::{clt_run, flatness_run, pairdist_run, restricted_run, variance_run};
use toral_core::lattice::{
    angular_discrepancy, check_hypothesis_d, enumerate_lattice_points, spherical_cap_discrepancy, CapMode,
    HypothesisD, EXACT_CAP_LIMIT,
};
use toral_core::mass::{sample_centre, McMoments};
use toral_core::specfun::{identity_suite, IdentityCheck};
use toral_core::{Dim, DiscrepancyResult, Error, Experiment, ExperimentConfig, Overrides};

use report::{fmt_real, sha256_hex, to_csv, to_json};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;

/// Environment variable consulted when `--threads` is absent.
pub const THREADS_ENV: &str = "TORAL_MASS_THREADS";

#[derive(Parser, Debug)]
#[command(name = "toral-mass", version, about = "Mass statistics of toral Laplace eigenfunctions")]
struct Cli {
    /// Worker threads; defaults to $TORAL_MASS_THREADS, then all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write a run manifest (version, config, timing, checksums) here.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Write the data report here instead of standard output.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate lattice points and their discrepancy.
    Lattice(LatticeArgs),
    /// Count spectral correlations and quasi-correlations.
    Correlations(CorrelationArgs),
    /// Flatness of the configured coefficients.
    Flatness(ExpArgs),
    /// Exact and spectral variance with exact higher moments.
    Variance(ExpArgs),
    /// Monte Carlo moments and normal-approximation diagnostics.
    Clt(SampledArgs),
    /// Moments for centres drawn from a small ball.
    Restricted(SampledArgs),
    /// Pair-distance distribution on a grid.
    Pairdist(PairdistArgs),
    /// Arithmetic hypotheses for one n.
    Hypotheses(HypothesesArgs),
    /// Kernel identities and the brute-force equivalence suite.
    Selftest,
    #[command(hide = true)]
    Specfun {
        #[command(subcommand)]
        command: SpecfunCommand,
    },
}

#[derive(Subcommand, Debug)]
enum SpecfunCommand {
    Selftest,
}

#[derive(Args, Debug, Serialize)]
struct LatticeArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    dim: u8,
    #[arg(long)]
    discrepancy: bool,
    /// Random cap centres when the exact spherical search is too large.
    #[arg(long, default_value_t = 20_000)]
    cap_samples: usize,
    #[arg(long, default_value_t = 0)]
    cap_seed: u64,
    /// Points as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct CorrelationArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    dim: u8,
    #[arg(long)]
    l: usize,
    /// Quasi-correlation radius.
    #[arg(long = "K", conflicts_with = "delta")]
    k: Option<f64>,
    /// Check A(n; l, delta) with K = n^(1/2 - delta).
    #[arg(long)]
    delta: Option<f64>,
    /// Diagonal-domination exponent.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    budget: Option<u128>,
    /// Zero-sum tuples as CSV.
    #[arg(long)]
    tuples: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExpArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    n: Option<u64>,
    /// Monte Carlo seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long = "M")]
    samples: Option<u64>,
}

#[derive(Args, Debug)]
struct SampledArgs {
    #[command(flatten)]
    exp: ExpArgs,
    /// Sample centres and masses as CSV.
    #[arg(long)]
    samples_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PairdistArgs {
    #[command(flatten)]
    exp: ExpArgs,
    /// `start:stop:step`.
    #[arg(long, default_value = "0:2:0.01")]
    grid: String,
}

#[derive(Args, Debug, Serialize)]
struct HypothesesArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    dim: u8,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    budget: Option<u128>,
}

struct Section {
    name: &'static str,
    bytes: Vec<u8>,
    path: Option<PathBuf>,
}

struct Outcome {
    summary: String,
    config: serde_json::Value,
    seed: Option<u64>,
    sections: Vec<Section>,
    passed: bool,
}

impl Outcome {
    fn new(summary: String, config: serde_json::Value, report: Vec<u8>) -> Self {
        Outcome {
            summary,
            config,
            seed: None,
            sections: vec![Section {
                name: "report",
                bytes: report,
                path: None,
            }],
            passed: true,
        }
    }

    fn with_section(mut self, name: &'static str, bytes: Vec<u8>, path: Option<&Path>) -> Self {
        self.sections.push(Section {
            name,
            bytes,
            path: path.map(Path::to_path_buf),
        });
        self
    }
}

/// Provenance of one run.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub threads: usize,
    pub wall_time_seconds: f64,
    /// SHA-256 of each data output.
    pub checksums: BTreeMap<String, String>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, Error> {
    to_json(value).map_err(|e| invalid(format!("serialization failed: {e}")))
}

fn csv_bytes<S: AsRef<str>>(header: &[S], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>, Error> {
    to_csv(header, rows).map_err(|e| invalid(format!("csv failed: {e}")))
}

fn dim(d: u8) -> Result<Dim, Error> {
    Dim::try_from(d).map_err(Error::InvalidInput)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } => EXIT_BUDGET,
        _ => EXIT_INVALID,
    }
}

fn resolve_threads(flag: Option<usize>) -> Result<usize, Error> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| invalid(format!("{THREADS_ENV} = `{v}` is not a thread count")))?,
            Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if n == 0 {
        return Err(invalid("thread count must be positive"));
    }
    Ok(n)
}

/// Parses `argv` (program name first), runs one subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match run_cli(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn run_cli(cli: Cli) -> Result<i32, Error> {
    let threads = resolve_threads(cli.threads)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| invalid(format!("cannot start {threads} threads: {e}")))?;
    let start = Instant::now();
    let command_name = command_name(&cli.command);
    let mut outcome = pool.install(|| execute(&cli.command))?;
    outcome.sections[0].path = cli.report.clone();
    let wall = start.elapsed().as_secs_f64();

    let mut checksums = BTreeMap::new();
    for s in &outcome.sections {
        checksums.insert(s.name.to_string(), sha256_hex(&s.bytes));
        match &s.path {
            Some(p) => write_file(p, &s.bytes)?,
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(&s.bytes)
                    .and_then(|_| out.flush())
                    .map_err(|e| invalid(format!("cannot write standard output: {e}")))?;
            }
        }
    }
    if let Some(path) = &cli.manifest {
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command_name.into(),
            config: outcome.config.clone(),
            seed: outcome.seed,
            threads,
            wall_time_seconds: wall,
            checksums,
        };
        write_file(path, &json(&manifest)?)?;
    }
    eprintln!("{}", outcome.summary);
    Ok(if outcome.passed { EXIT_OK } else { EXIT_INVALID })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    fs::write(path, bytes).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Lattice(_) => "lattice",
        Command::Correlations(_) => "correlations",
        Command::Flatness(_) => "flatness",
        Command::Variance(_) => "variance",
        Command::Clt(_) => "clt",
        Command::Restricted(_) => "restricted",
        Command::Pairdist(_) => "pairdist",
        Command::Hypotheses(_) => "hypotheses",
        Command::Selftest => "selftest",
        Command::Specfun { .. } => "specfun selftest",
    }
}

fn execute(c: &Command) -> Result<Outcome, Error> {
    match c {
        Command::Lattice(a) => lattice(a),
        Command::Correlations(a) => correlations(a),
        Command::Flatness(a) => {
            let exp = experiment(a)?;
            let rep = flatness_run(&exp)?;
            let summary = format!("flatness: v_inf {:.6} A4 {:.6} theta {:.6}", rep.v_inf, rep.a4, rep.theta);
            Ok(Outcome::new(summary, echo(&exp.config)?, json(&rep)?))
        }
        Command::Variance(a) => {
            let exp = experiment(a)?;
            let s = variance_run(&exp)?;
            let summary = format!(
                "variance: exact {:.6e} spectral {:.6e} predicted {:.6e} ratio {:.4}",
                s.variance.exact_tuple, s.variance.spectral, s.variance.predicted_asymptotic, s.variance.ratio
            );
            Ok(Outcome::new(summary, echo(&exp.config)?, json(&s)?))
        }
        Command::Clt(a) => clt(a),
        Command::Restricted(a) => restricted(a),
        Command::Pairdist(a) => pairdist(a),
        Command::Hypotheses(a) => hypotheses(a),
        Command::Selftest => selftest(true),
        Command::Specfun {
            command: SpecfunCommand::Selftest,
        } => selftest(false),
    }
}

fn echo<T: Serialize>(value: &T) -> Result<serde_json::Value, Error> {
    serde_json::to_value(value).map_err(|e| invalid(format!("serialization failed: {e}")))
}

fn experiment(a: &ExpArgs) -> Result<Experiment, Error> {
    let text = fs::read_to_string(&a.config)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", a.config.display())))?;
    let overrides = Overrides {
        n: a.n,
        seed: a.seed,
        samples: a.samples,
    };
    Experiment::new(ExperimentConfig::from_json_with(&text, &overrides)?)
}

#[derive(Serialize)]
struct LatticeReport {
    n: u64,
    d: Dim,
    #[serde(rename = "N")]
    big_n: usize,
    discrepancy: Option<DiscrepancyResult>,
}

fn lattice(a: &LatticeArgs) -> Result<Outcome, Error> {
    let d = dim(a.dim)?;
    let set = enumerate_lattice_points(a.n, d)?;
    let discrepancy = if a.discrepancy && !set.is_empty() {
        Some(match d {
            Dim::Two => angular_discrepancy(&set)?,
            Dim::Three if set.len() <= EXACT_CAP_LIMIT => spherical_cap_discrepancy(&set, CapMode::exact())?,
            Dim::Three => spherical_cap_discrepancy(
                &set,
                CapMode::Sampled {
                    samples: a.cap_samples,
                    seed: a.cap_seed,
                },
            )?,
        })
    } else {
        None
    };
    let rep = LatticeReport {
        n: a.n,
        d,
        big_n: set.len(),
        discrepancy,
    };
    let summary = format!("lattice: n = {} d = {d} N = {}", a.n, set.len());
    let mut out = Outcome::new(summary, echo(a)?, json(&rep)?);
    if let Some(path) = &a.out {
        let mut header = vec!["index", "x", "y"];
        if d == Dim::Three {
            header.push("z");
        } else {
            header.push("angle");
        }
        let rows = set.points().iter().enumerate().map(|(i, p)| {
            let mut row = vec![i.to_string()];
            row.extend(p[..d.get()].iter().map(|c| c.to_string()));
            if d == Dim::Two {
                row.push(fmt_real(set.angles()[i]));
            }
            row
        });
        out = out.with_section("points", csv_bytes(&header, rows)?, Some(path));
    }
    Ok(out)
}

#[derive(Serialize)]
struct QuasiSummary {
    #[serde(rename = "K")]
    k: f64,
    count: u128,
}

#[derive(Serialize)]
struct DominationSummary {
    gamma: f64,
    margin: f64,
}

#[derive(Serialize)]
struct CorrelationHypotheses {
    #[serde(rename = "A")]
    a: Option<HypothesisA>,
    diagonal_domination: Option<DominationSummary>,
}

#[derive(Serialize)]
struct CorrelationOutput {
    n: u64,
    d: Dim,
    l: usize,
    #[serde(rename = "count_S")]
    count_s: u128,
    #[serde(rename = "count_D")]
    count_d: u128,
    count_offdiag: u128,
    quasi: Option<QuasiSummary>,
    hypotheses: CorrelationHypotheses,
}

fn correlations(a: &CorrelationArgs) -> Result<Outcome, Error> {
    let d = dim(a.dim)?;
    let set = enumerate_lattice_points(a.n, d)?;
    if set.is_empty() {
        return Err(invalid(format!("n = {} is not a sum of {d} squares", a.n)));
    }
    let budget = a.budget.unwrap_or(DEFAULT_BUDGET);
    let rep = match a.k {
        Some(k) => count_quasi_correlations(&set, a.l, k, budget)?,
        None => count_correlations(&set, a.l, budget)?,
    };
    let hyp_a = a.delta.map(|delta| check_hypothesis_a(&set, a.l, delta, budget)).transpose()?;
    let dom = a
        .gamma
        .map(|gamma| check_diagonal_domination(&set, a.l, gamma, budget).map(|margin| DominationSummary { gamma, margin }))
        .transpose()?;
    let out = CorrelationOutput {
        n: rep.n,
        d: rep.d,
        l: rep.l,
        count_s: rep.count_s,
        count_d: rep.count_d,
        count_offdiag: rep.count_offdiag,
        quasi: rep.quasi.map(|q| QuasiSummary { k: q.k, count: q.count }),
        hypotheses: CorrelationHypotheses {
            a: hyp_a,
            diagonal_domination: dom,
        },
    };
    let summary = format!(
        "correlations: n = {} l = {} |S| = {} |D| = {}",
        a.n, a.l, rep.count_s, rep.count_d
    );
    let mut outcome = Outcome::new(summary, echo(a)?, json(&out)?);
    if let Some(path) = &a.tuples {
        let coords = ["x", "y", "z"];
        let mut header = vec!["tuple".to_string()];
        for j in 1..=a.l {
            for c in &coords[..d.get()] {
                header.push(format!("{c}{j}"));
            }
        }
        let mut rows = Vec::new();
        for_each_zero_sum_tuple(&set, a.l, budget, |t| {
            let mut row = vec![rows.len().to_string()];
            for &i in t {
                row.extend(set.point(i)[..d.get()].iter().map(|c| c.to_string()));
            }
            rows.push(row);
            Ok(())
        })?;
        outcome = outcome.with_section("tuples", csv_bytes(&header, rows)?, Some(path));
    }
    Ok(outcome)
}

fn samples_csv(exp: &Experiment, mc: &McMoments, centre: f64, scale: f64) -> Result<Vec<u8>, Error> {
    let cfg = &exp.config;
    let spec = cfg.mc.expect("sampled runs have an mc section");
    let d = cfg.d.get();
    let mut header = vec!["index"];
    header.extend(["x1", "x2", "x3"][..d].iter().copied());
    header.extend(["X", "X_standardized"]);
    let rows = mc.values.iter().enumerate().map(|(i, &x)| {
        let c = sample_centre(spec.seed, cfg.d, cfg.restriction.as_ref(), i as u64);
        let mut row = vec![i.to_string()];
        row.extend(c[..d].iter().map(|&v| fmt_real(v)));
        row.push(fmt_real(x));
        row.push(fmt_real((x - centre) / scale));
        row
    });
    csv_bytes(&header, rows)
}

fn clt(a: &SampledArgs) -> Result<Outcome, Error> {
    let exp = experiment(&a.exp)?;
    let (s, mc) = clt_run(&exp)?;
    let ks = s.ks.as_ref().map_or(f64::NAN, |k| k.statistic);
    let summary = format!(
        "clt: M = {} mean {:.6e} (exact {:.6e}) variance {:.6e} (exact {:.6e}) KS {:.4}",
        mc.samples, mc.mean, s.expectation.exact, mc.variance, s.variance.exact_tuple, ks
    );
    let mut out = Outcome::new(summary, echo(&exp.config)?, json(&s)?);
    out.seed = exp.config.mc.map(|m| m.seed);
    if let Some(path) = &a.samples_out {
        let bytes = samples_csv(&exp, &mc, s.expectation.exact, s.variance.exact_tuple.sqrt())?;
        out = out.with_section("samples", bytes, Some(path));
    }
    Ok(out)
}

fn restricted(a: &SampledArgs) -> Result<Outcome, Error> {
    let exp = experiment(&a.exp)?;
    let (rep, mc) = restricted_run(&exp)?;
    let summary = format!(
        "restricted: mean {:.6e} (torus {:.6e}, deviation {:+.4}) variance {:.6e} (exact {})",
        rep.expectation.mc,
        rep.expectation.torus,
        rep.expectation.relative_deviation,
        rep.variance.mc,
        rep.variance.exact.map_or("over budget".into(), |v| format!("{v:.6e}")),
    );
    let mut out = Outcome::new(summary, echo(&exp.config)?, json(&rep)?);
    out.seed = exp.config.mc.map(|m| m.seed);
    if let Some(path) = &a.samples_out {
        let sd = rep.variance.exact.unwrap_or(rep.variance.mc).sqrt();
        let bytes = samples_csv(&exp, &mc, rep.expectation.exact, sd)?;
        out = out.with_section("samples", bytes, Some(path));
    }
    Ok(out)
}

/// `start:stop:step` into grid points `start + i·step ≤ stop`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, Error> {
    let bad = || invalid(format!("grid `{text}` is not start:stop:step"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [a, b, step] = parts[..] else {
        return Err(bad());
    };
    if !(step > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(invalid("grid has too many points"));
    }
    Ok((0..count).map(|i| (a + i as f64 * step).min(b)).collect())
}

fn pairdist(a: &PairdistArgs) -> Result<Outcome, Error> {
    let exp = experiment(&a.exp)?;
    let grid = parse_grid(&a.grid)?;
    let table = pairdist_run(&exp, &grid)?;
    let bytes = csv_bytes(&table.header, table.rows.iter().map(|r| r.iter().map(|&v| fmt_real(v)).collect()))?;
    let summary = format!("pairdist: {} grid points, columns {}", grid.len(), table.header.join(","));
    Ok(Outcome::new(summary, echo(&exp.config)?, bytes))
}

#[derive(Serialize)]
struct HypothesesReport {
    n: u64,
    d: Dim,
    #[serde(rename = "N")]
    big_n: usize,
    /// Planar only.
    #[serde(rename = "D")]
    d_hypothesis: Option<HypothesisD>,
    #[serde(rename = "A")]
    a_hypothesis: HypothesisA,
}

fn hypotheses(a: &HypothesesArgs) -> Result<Outcome, Error> {
    let d = dim(a.dim)?;
    let set = enumerate_lattice_points(a.n, d)?;
    if set.is_empty() {
        return Err(invalid(format!("n = {} is not a sum of {d} squares", a.n)));
    }
    let d_hyp = match d {
        Dim::Two => Some(check_hypothesis_d(&set, a.eps)?),
        Dim::Three => None,
    };
    let a_hyp = check_hypothesis_a(&set, a.l, a.delta, a.budget.unwrap_or(DEFAULT_BUDGET))?;
    let summary = format!(
        "hypotheses: D {} A {}",
        d_hyp.as_ref().map_or("n/a".into(), |h| h.holds.to_string()),
        a_hyp.holds
    );
    let rep = HypothesesReport {
        n: a.n,
        d,
        big_n: set.len(),
        d_hypothesis: d_hyp,
        a_hypothesis: a_hyp,
    };
    Ok(Outcome::new(summary, echo(a)?, json(&rep)?))
}

#[derive(Serialize)]
struct SelftestReport {
    identities: Vec<IdentityCheck>,
    equivalence: Option<Vec<EquivalenceCheck>>,
    passed: bool,
}

fn selftest(with_equivalence: bool) -> Result<Outcome, Error> {
    let identities = identity_suite()?;
    let equivalence = if with_equivalence { Some(equivalence_suite()?) } else { None };
    let mut lines = Vec::new();
    for c in &identities {
        lines.push(format!(
            "{}  {:<28} error {:.3e} (tolerance {:.1e})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.error,
            c.tolerance
        ));
    }
    for c in equivalence.iter().flatten() {
        lines.push(format!(
            "{}  {:<28} fast {} brute {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.fast,
            c.brute
        ));
    }
    let passed = identities.iter().all(|c| c.passed) && equivalence.iter().flatten().all(|c| c.passed);
    let failed = lines.iter().filter(|l| l.starts_with("FAIL")).count();
    lines.push(format!("selftest: {} checks, {failed} failed", lines.len()));
    let rep = SelftestReport {
        identities,
        equivalence,
        passed,
    };
    let mut out = Outcome::new(lines.join("\n"), serde_json::Value::Null, json(&rep)?);
    out.passed = passed;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("0:2:0.5").unwrap();
        assert_eq!(g, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(parse_grid("0:2:0.01").unwrap().len(), 201);
        assert_eq!(*parse_grid("0:2:0.01").unwrap().last().unwrap(), 2.0);
        for bad in ["0:2", "0:2:0", "2:0:0.1", "a:b:c"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Budget { required: 2, budget: 1 }), EXIT_BUDGET);
        assert_eq!(exit_code(&Error::Config("x".into())), EXIT_INVALID);
    }

    #[test]
    fn explicit_threads_win() {
        assert_eq!(resolve_threads(Some(3)).unwrap(), 3);
        assert!(resolve_threads(Some(0)).is_err());
    }
}
