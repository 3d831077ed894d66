//! One configured run: the exact, spectral and Monte Carlo routes assembled
//! into serializable reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::eigenfunction::{a4, flatness_report, v_inf, CoefficientVector, FlatnessReport};
use crate::error::{Error, Result};
use crate::lattice::Dim;
use crate::mass::{
    clt_diagnostics, expectation_exact, gaussian_moment, moment_from_table, monte_carlo_moments,
    pair_distance_distribution, predict_variance_asymptotic, restricted_moment_exact, variance_from_table,
    variance_spectral, McMoments, MomentRow, PairTable, PairVariant,
};

/// `θ = arccos(A₄^{−1/2})`.
pub fn theta(cv: &CoefficientVector) -> f64 {
    (1.0 / a4(cv).sqrt()).min(1.0).acos()
}

/// A validated config with its lattice, coefficients and difference table.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub cv: CoefficientVector,
    pub table: PairTable,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        let cv = config.coefficient_vector()?;
        let table = PairTable::new(&cv, config.r)?;
        Ok(Experiment { config, cv, table })
    }

    pub fn dim(&self) -> Dim {
        self.config.d
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectationSummary {
    pub exact: f64,
    pub mc: Option<f64>,
    pub mc_stderr: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceSummary {
    pub spectral: f64,
    /// `"exact"` in the plane, `"diagonal approximation"` in space.
    pub spectral_label: String,
    pub exact_tuple: f64,
    pub diagonal_minus_exact: f64,
    /// `|diagonal − exact|·N^{1/4}/([v]_∞² r⁶)`, reported for `d = 3`.
    pub diagonal_error_scaled: Option<f64>,
    pub mc: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub predicted_asymptotic: f64,
    /// `exact_tuple / predicted_asymptotic`.
    pub ratio: f64,
    pub theta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardizedSummary {
    /// `None` when the exact sum exceeds the work budget.
    pub exact_tuple: Option<f64>,
    pub mc: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub gaussian_target: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsSummary {
    pub statistic: f64,
    pub sample_count: usize,
    /// Raw moments 3 to 6 of the exactly standardized samples.
    pub moments: Vec<MomentRow>,
}

/// Everything known about the distribution of `X` for one config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub n: u64,
    pub d: Dim,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub r: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub expectation: ExpectationSummary,
    pub variance: VarianceSummary,
    pub standardized_moments: BTreeMap<usize, StandardizedSummary>,
    pub ks: Option<KsSummary>,
}

fn variance_summary(exp: &Experiment, mc: Option<&McMoments>) -> Result<VarianceSummary> {
    let cfg = &exp.config;
    let spectral = variance_spectral(&exp.cv, cfg.r)?.value;
    let exact = variance_from_table(&exp.table);
    let th = theta(&exp.cv);
    let predicted = predict_variance_asymptotic(cfg.d, th, cfg.r, cfg.t)?;
    let diff = spectral - exact;
    let scaled = match cfg.d {
        Dim::Two => None,
        Dim::Three => Some(diff.abs() * (exp.cv.len() as f64).powf(0.25) / (v_inf(&exp.cv).powi(2) * cfg.r.powi(6))),
    };
    Ok(VarianceSummary {
        spectral,
        spectral_label: match cfg.d {
            Dim::Two => "exact",
            Dim::Three => "diagonal approximation",
        }
        .into(),
        exact_tuple: exact,
        diagonal_minus_exact: diff,
        diagonal_error_scaled: scaled,
        mc: mc.map(|m| m.variance),
        mc_stderr: mc.map(|m| m.variance_stderr),
        predicted_asymptotic: predicted,
        ratio: exact / predicted,
        theta: th,
    })
}

fn exact_standardized(exp: &Experiment, k: usize, variance: f64) -> Result<Option<f64>> {
    match moment_from_table(&exp.table, k, u128::from(exp.config.budget)) {
        Ok(m) => Ok(Some(m / variance.powf(k as f64 / 2.0))),
        Err(Error::Budget { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn summary(exp: &Experiment, mc: Option<&McMoments>) -> Result<MomentSummary> {
    let cfg = &exp.config;
    let variance = variance_summary(exp, mc)?;
    let mut standardized = BTreeMap::new();
    for k in 3..=cfg.moments_upto {
        let from_mc = mc.and_then(|m| m.standardized.iter().find(|s| s.k == k));
        standardized.insert(
            k,
            StandardizedSummary {
                exact_tuple: exact_standardized(exp, k, variance.exact_tuple)?,
                mc: from_mc.map(|s| s.value),
                mc_stderr: from_mc.map(|s| s.stderr),
                gaussian_target: gaussian_moment(k),
            },
        );
    }
    let vol = expectation_exact(cfg.r, cfg.d);
    let ks = match mc {
        Some(m) => {
            let sd = variance.exact_tuple.sqrt();
            let z: Vec<f64> = m.values.iter().map(|x| (x - vol) / sd).collect();
            let diag = clt_diagnostics(&z)?;
            Some(KsSummary {
                statistic: diag.ks_statistic,
                sample_count: diag.sample_count,
                moments: diag.moments,
            })
        }
        None => None,
    };
    Ok(MomentSummary {
        n: cfg.n,
        d: cfg.d,
        big_n: exp.cv.len(),
        r: cfg.r,
        t: cfg.t,
        expectation: ExpectationSummary {
            exact: vol,
            mc: mc.map(|m| m.mean),
            mc_stderr: mc.map(|m| m.mean_stderr),
        },
        variance,
        standardized_moments: standardized,
        ks,
    })
}

/// Exact and spectral routes only.
pub fn variance_run(exp: &Experiment) -> Result<MomentSummary> {
    summary(exp, None)
}

/// Exact routes plus Monte Carlo over the whole torus. Returns the raw
/// samples alongside the summary.
pub fn clt_run(exp: &Experiment) -> Result<(MomentSummary, McMoments)> {
    let spec = exp
        .config
        .mc
        .ok_or_else(|| Error::Config("this run needs an `mc` section".into()))?;
    let mc = monte_carlo_moments(&exp.table, &spec, None, exp.config.moments_upto)?;
    Ok((summary(exp, Some(&mc))?, mc))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictedExpectation {
    /// `vol(B_r)`, the full-torus mean.
    pub torus: f64,
    pub exact: f64,
    pub mc: f64,
    pub mc_stderr: f64,
    /// `mc/torus − 1`.
    pub relative_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictedVariance {
    /// `None` when the exact sum exceeds the work budget.
    pub exact: Option<f64>,
    pub mc: f64,
    pub mc_stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictedReport {
    pub n: u64,
    pub d: Dim,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub r: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub x0: Vec<f64>,
    pub rho: f64,
    pub expectation: RestrictedExpectation,
    pub variance: RestrictedVariance,
}

/// Centres uniform in `B_{x0}(ρ)`: exact restricted mean and variance
/// against Monte Carlo.
pub fn restricted_run(exp: &Experiment) -> Result<(RestrictedReport, McMoments)> {
    let cfg = &exp.config;
    let spec = cfg.mc.ok_or_else(|| Error::Config("this run needs an `mc` section".into()))?;
    let res = cfg
        .restriction
        .as_ref()
        .ok_or_else(|| Error::Config("this run needs a `restriction` section".into()))?;
    if cfg.d != Dim::Two {
        return Err(Error::Config("restricted runs are implemented for d = 2".into()));
    }
    let budget = u128::from(cfg.budget);
    let mc = monte_carlo_moments(&exp.table, &spec, Some(res), 2)?;
    let exact_mean = restricted_moment_exact(&exp.cv, cfg.r, &res.x0, res.rho, 1, budget)?;
    let exact_var = match restricted_moment_exact(&exp.cv, cfg.r, &res.x0, res.rho, 2, budget) {
        Ok(v) => Some(v),
        Err(Error::Budget { .. }) => None,
        Err(e) => return Err(e),
    };
    let vol = expectation_exact(cfg.r, cfg.d);
    let report = RestrictedReport {
        n: cfg.n,
        d: cfg.d,
        big_n: exp.cv.len(),
        r: cfg.r,
        t: cfg.t,
        x0: res.x0.clone(),
        rho: res.rho,
        expectation: RestrictedExpectation {
            torus: vol,
            exact: exact_mean,
            mc: mc.mean,
            mc_stderr: mc.mean_stderr,
            relative_deviation: mc.mean / vol - 1.0,
        },
        variance: RestrictedVariance {
            exact: exact_var,
            mc: mc.variance,
            mc_stderr: mc.variance_stderr,
        },
    };
    Ok((report, mc))
}

/// Pair-distance distribution on a grid of chord lengths, as columns.
#[derive(Clone, Debug, PartialEq)]
pub struct PairDistTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

/// Plane: `s, F(s), F_{λ0}(s)` for the first point, and `s/(π cos²θ)`.
/// Space: `s, F₃(s), s²/4`.
pub fn pairdist_run(exp: &Experiment, grid: &[f64]) -> Result<PairDistTable> {
    if grid.iter().any(|s| !(0.0..=2.0).contains(s)) {
        return Err(Error::Config("pair distances lie in [0, 2]".into()));
    }
    Ok(match exp.dim() {
        Dim::Two => {
            let f = pair_distance_distribution(&exp.cv, PairVariant::Weighted, grid)?;
            let f0 = pair_distance_distribution(&exp.cv, PairVariant::FromPoint { index: 0 }, grid)?;
            let c = theta(&exp.cv).cos().powi(2);
            PairDistTable {
                header: vec!["s", "F", "F_lambda0", "main_term"],
                rows: grid
                    .iter()
                    .enumerate()
                    .map(|(i, &s)| vec![s, f[i], f0[i], s / (std::f64::consts::PI * c)])
                    .collect(),
            }
        }
        Dim::Three => {
            let f = pair_distance_distribution(&exp.cv, PairVariant::Sphere, grid)?;
            PairDistTable {
                header: vec!["s", "F3", "main_term"],
                rows: grid.iter().zip(f).map(|(&s, v)| vec![s, v, s * s / 4.0]).collect(),
            }
        }
    })
}

/// Flatness of the configured coefficients.
pub fn flatness_run(exp: &Experiment) -> Result<FlatnessReport> {
    let params = exp
        .config
        .flatness
        .ok_or_else(|| Error::Config("this run needs a `flatness` section".into()))?;
    flatness_report(&exp.cv, &params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn experiment(extra: &str) -> Experiment {
        let text = format!(
            r#"{{"n": 65, "d": 2, "coefficients": {{"type": "bourgain", "seed": 2}}, "T": "3",
                "mc": {{"M": 4000, "seed": 5}}, "moments_upto": 4 {extra}}}"#
        );
        Experiment::new(ExperimentConfig::from_json(&text).unwrap()).unwrap()
    }

    #[test]
    fn summary_round_trips_through_json() {
        let exp = experiment("");
        let (s, mc) = clt_run(&exp).unwrap();
        assert_eq!(mc.values.len(), 4000);
        let text = serde_json::to_string(&s).unwrap();
        let back: MomentSummary = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(s.standardized_moments[&4].gaussian_target, 3.0);
        assert!(s.standardized_moments[&3].exact_tuple.is_some());
        assert!(s.variance.mc_stderr.unwrap() > 0.0);
        assert_eq!(s.variance.spectral_label, "exact");
        assert!((s.variance.spectral - s.variance.exact_tuple).abs() < 1e-10 * s.variance.exact_tuple);
    }

    #[test]
    fn budget_skips_exact_moments() {
        let exp = experiment(r#", "budget": 10"#);
        let s = variance_run(&exp).unwrap();
        assert!(s.standardized_moments[&3].exact_tuple.is_none());
        assert!(s.ks.is_none());
    }

    #[test]
    fn restricted_needs_a_restriction() {
        let exp = experiment("");
        assert!(matches!(restricted_run(&exp), Err(Error::Config(_))));
        let exp = experiment(r#", "restriction": {"x0": ["0.3", "0.6"], "rho": "0.2"}"#);
        let (rep, _) = restricted_run(&exp).unwrap();
        assert!(rep.variance.exact.is_some());
        assert!((rep.expectation.mc - rep.expectation.exact).abs() < 5.0 * rep.expectation.mc_stderr);
    }

    #[test]
    fn pairdist_columns() {
        let exp = experiment("");
        let t = pairdist_run(&exp, &[0.0, 1.0, 2.0]).unwrap();
        assert!(t.rows.iter().all(|r| r.len() == t.header.len()));
        assert!((t.rows[2][2] - 1.0).abs() < 1e-15);
        assert!(pairdist_run(&exp, &[2.5]).is_err());
    }
}
