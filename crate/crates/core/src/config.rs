//! Experiment configuration files.
//!
//! Reals may be written as decimal strings (`"0.05"`) or plain JSON numbers.

use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize};

use crate::correlations::DEFAULT_BUDGET;
use crate::eigenfunction::{
    make_arc_supported, make_bourgain, make_bv_density, BourgainSigns, CoefficientVector, FlatnessParams,
    PiecewiseConstant,
};
use crate::error::{Error, Result};
use crate::lattice::{enumerate_lattice_points, is_sum_of_squares, Dim, LatticePointSet, Vector};
use crate::mass::{check_radius, McSpec, Restriction};

const RADIUS_CONSISTENCY: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Real(f64);

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Number(f64),
        }
        match Repr::deserialize(d)? {
            Repr::Number(x) => Ok(Real(x)),
            Repr::Text(s) => s
                .trim()
                .parse::<f64>()
                .map(Real)
                .map_err(|_| serde::de::Error::custom(format!("`{s}` is not a decimal real"))),
        }
    }
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum RawCoefficients {
    Bourgain { seed: BourgainSigns },
    Arc { t: String },
    Bv { breakpoints: Vec<Real>, values: Vec<Real> },
    Explicit { entries: Vec<RawEntry> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    lambda: Vec<i64>,
    re: Real,
    im: Real,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMc {
    #[serde(rename = "M")]
    samples: u64,
    seed: u64,
    #[serde(default)]
    batch: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRestriction {
    x0: Vec<Real>,
    rho: Real,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFlatness {
    eps: Real,
    #[serde(rename = "T")]
    t: Real,
    eta: Real,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n: u64,
    d: Dim,
    coefficients: RawCoefficients,
    #[serde(default)]
    r: Option<Real>,
    #[serde(default, rename = "T")]
    t: Option<Real>,
    #[serde(default)]
    mc: Option<RawMc>,
    #[serde(default)]
    restriction: Option<RawRestriction>,
    #[serde(default = "default_moments")]
    moments_upto: usize,
    #[serde(default)]
    budget: Option<u64>,
    #[serde(default)]
    flatness: Option<RawFlatness>,
}

fn default_moments() -> usize {
    4
}

/// One explicit coefficient `c_λ = re + i·im`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExplicitEntry {
    pub lambda: Vector,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CoefficientSpec {
    Bourgain { seed: BourgainSigns },
    Arc {
        #[serde(serialize_with = "ratio_text")]
        t: Ratio<u64>,
    },
    Bv { breakpoints: Vec<f64>, values: Vec<f64> },
    Explicit { entries: Vec<ExplicitEntry> },
}

fn ratio_text<S: serde::Serializer>(t: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", t.numer(), t.denom()))
}

fn parse_ratio(text: &str) -> Result<Ratio<u64>> {
    let bad = || Error::Config(format!("t = `{text}` is not a fraction p/q"));
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text.trim(), "1"),
    };
    let p: u64 = p.parse().map_err(|_| bad())?;
    let q: u64 = q.parse().map_err(|_| bad())?;
    if q == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(p, q))
}

impl CoefficientSpec {
    pub fn build(&self, set: Arc<LatticePointSet>) -> Result<CoefficientVector> {
        match self {
            CoefficientSpec::Bourgain { seed } => make_bourgain(set, *seed),
            CoefficientSpec::Arc { t } => make_arc_supported(set, *t),
            CoefficientSpec::Bv { breakpoints, values } => {
                let g = PiecewiseConstant::new(breakpoints.clone(), values.clone())?;
                make_bv_density(set, &g)
            }
            CoefficientSpec::Explicit { entries } => {
                let list: Vec<(Vector, Complex64)> =
                    entries.iter().map(|e| (e.lambda, Complex64::new(e.re, e.im))).collect();
                CoefficientVector::from_entries(set, &list)
            }
        }
    }
}

/// Command-line replacements applied before validation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Overrides {
    pub n: Option<u64>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
}

/// A validated experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub n: u64,
    pub d: Dim,
    pub coefficients: CoefficientSpec,
    pub r: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub mc: Option<McSpec>,
    pub restriction: Option<Restriction>,
    pub moments_upto: usize,
    pub budget: u64,
    pub flatness: Option<FlatnessParams>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_with(text, &Overrides::default())
    }

    pub fn from_json_with(text: &str, overrides: &Overrides) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::validate(raw, overrides)
    }

    fn validate(raw: RawConfig, ov: &Overrides) -> Result<Self> {
        let n = ov.n.unwrap_or(raw.n);
        let d = raw.d;
        if n == 0 || !is_sum_of_squares(n, d) {
            return Err(Error::Config(format!("n = {n} is not a sum of {d} squares")));
        }
        let sqrt_n = (n as f64).sqrt();
        // An overridden n keeps T when only T was given.
        let (r, t) = match (raw.r.map(|x| x.0), raw.t.map(|x| x.0)) {
            (Some(r), Some(t)) => {
                if ov.n.is_some() {
                    (r, r * sqrt_n)
                } else {
                    if (t - r * sqrt_n).abs() > RADIUS_CONSISTENCY * t.abs().max(1.0) {
                        return Err(Error::Config(format!("T = {t} is inconsistent with r·√n = {}", r * sqrt_n)));
                    }
                    (r, t)
                }
            }
            (Some(r), None) => (r, r * sqrt_n),
            (None, Some(t)) => (t / sqrt_n, t),
            (None, None) => return Err(Error::Config("give the radius as r or T".into())),
        };
        check_radius(r).map_err(|e| Error::Config(e.to_string()))?;

        let coefficients = match raw.coefficients {
            RawCoefficients::Bourgain { seed } => CoefficientSpec::Bourgain { seed },
            RawCoefficients::Arc { t } => CoefficientSpec::Arc { t: parse_ratio(&t)? },
            RawCoefficients::Bv { breakpoints, values } => CoefficientSpec::Bv {
                breakpoints: breakpoints.into_iter().map(|x| x.0).collect(),
                values: values.into_iter().map(|x| x.0).collect(),
            },
            RawCoefficients::Explicit { entries } => CoefficientSpec::Explicit {
                entries: entries
                    .into_iter()
                    .map(|e| {
                        if e.lambda.len() != d.get() {
                            return Err(Error::Config(format!("lambda {:?} has the wrong dimension", e.lambda)));
                        }
                        let mut v = [0i64; 3];
                        v[..e.lambda.len()].copy_from_slice(&e.lambda);
                        Ok(ExplicitEntry { lambda: v, re: e.re.0, im: e.im.0 })
                    })
                    .collect::<Result<_>>()?,
            },
        };

        let mc = raw.mc.map(|m| McSpec {
            samples: ov.samples.unwrap_or(m.samples),
            seed: ov.seed.unwrap_or(m.seed),
            batch: m.batch,
        });
        if let Some(m) = &mc {
            if m.samples < 2 {
                return Err(Error::Config("mc.M must be at least 2".into()));
            }
        }
        let restriction = match raw.restriction {
            None => None,
            Some(res) => {
                let x0: Vec<f64> = res.x0.into_iter().map(|x| x.0).collect();
                if x0.len() != d.get() || x0.iter().any(|c| !(0.0..1.0).contains(c)) {
                    return Err(Error::Config(format!("x0 must be a point of [0,1)^{d}")));
                }
                let rho = res.rho.0;
                if !(rho > 0.0 && rho < 0.5) {
                    return Err(Error::Config(format!("rho must lie in (0, 1/2), got {rho}")));
                }
                Some(Restriction { x0, rho })
            }
        };
        if raw.moments_upto < 2 {
            return Err(Error::Config("moments_upto must be at least 2".into()));
        }
        let flatness = raw.flatness.map(|f| FlatnessParams { eps: f.eps.0, t: f.t.0, eta: f.eta.0 });
        Ok(ExperimentConfig {
            n,
            d,
            coefficients,
            r,
            t,
            mc,
            restriction,
            moments_upto: raw.moments_upto,
            budget: raw.budget.unwrap_or(u64::try_from(DEFAULT_BUDGET).unwrap_or(u64::MAX)),
            flatness,
        })
    }

    pub fn lattice(&self) -> Result<Arc<LatticePointSet>> {
        Ok(Arc::new(enumerate_lattice_points(self.n, self.d)?))
    }

    pub fn coefficient_vector(&self) -> Result<CoefficientVector> {
        self.coefficients.build(self.lattice()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "n": 325, "d": 2,
        "coefficients": {"type": "bourgain", "seed": 7},
        "T": "5",
        "mc": {"M": 1000, "seed": 3},
        "moments_upto": 4
    }"#;

    #[test]
    fn parses_decimal_strings() {
        let c = ExperimentConfig::from_json(BASE).unwrap();
        assert_eq!(c.t, 5.0);
        assert!((c.r - 5.0 / 325f64.sqrt()).abs() < 1e-16);
        assert_eq!(c.mc.unwrap().samples, 1000);
        assert_eq!(c.coefficients, CoefficientSpec::Bourgain { seed: BourgainSigns::Seed(7) });
        assert_eq!(c.coefficient_vector().unwrap().len(), 24);
    }

    #[test]
    fn overrides_apply_before_validation() {
        let ov = Overrides { n: Some(130), seed: Some(11), samples: Some(50) };
        let c = ExperimentConfig::from_json_with(BASE, &ov).unwrap();
        assert_eq!(c.n, 130);
        assert!((c.r - 5.0 / 130f64.sqrt()).abs() < 1e-16);
        assert_eq!(c.mc.unwrap().seed, 11);
        assert_eq!(c.mc.unwrap().samples, 50);
        let bad = Overrides { n: Some(3), ..Default::default() };
        assert!(ExperimentConfig::from_json_with(BASE, &bad).is_err());
    }

    #[test]
    fn rejects_invalid_fields() {
        let cases = [
            BASE.replace(r#""T": "5""#, r#""T": "9.5""#),
            BASE.replace(r#""T": "5""#, r#""T": "5", "r": "0.2""#),
            BASE.replace(r#""T": "5""#, r#""T": "five""#),
            BASE.replace(r#""moments_upto": 4"#, r#""moments_upto": 1"#),
            BASE.replace(r#""M": 1000"#, r#""M": 1"#),
            BASE.replace(r#""moments_upto": 4"#, r#""moments_upto": 4, "restriction": {"x0": ["0.5", "0.5"], "rho": "0.6"}"#),
            BASE.replace(r#""moments_upto": 4"#, r#""moments_upto": 4, "restriction": {"x0": ["0.5"], "rho": "0.1"}"#),
            BASE.replace(r#""moments_upto": 4"#, r#""moments_upto": 4, "extra": 1"#),
            BASE.replace("bourgain", "gaussian"),
        ];
        for text in cases {
            assert!(matches!(ExperimentConfig::from_json(&text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn consistent_r_and_t() {
        let r = 5.0 / 325f64.sqrt();
        let text = BASE.replace(r#""T": "5""#, &format!(r#""T": "5", "r": {r}"#));
        assert!(ExperimentConfig::from_json(&text).is_ok());
    }

    #[test]
    fn coefficient_kinds() {
        let arc = BASE.replace(r#"{"type": "bourgain", "seed": 7}"#, r#"{"type": "arc", "t": "1/2"}"#);
        let c = ExperimentConfig::from_json(&arc).unwrap();
        assert!((crate::eigenfunction::a4(&c.coefficient_vector().unwrap()) - 2.0).abs() < 1e-12);
        let plus = BASE.replace("7}", r#""all_plus"}"#);
        assert!(ExperimentConfig::from_json(&plus).unwrap().coefficient_vector().is_ok());
        let bv = BASE.replace(
            r#"{"type": "bourgain", "seed": 7}"#,
            r#"{"type": "bv", "breakpoints": ["0"], "values": ["1"]}"#,
        );
        assert!(ExperimentConfig::from_json(&bv).unwrap().coefficient_vector().is_ok());
        let explicit = r#"{"n": 25, "d": 2, "r": "0.1",
            "coefficients": {"type": "explicit", "entries": [
                {"lambda": [3, 4], "re": "0.7071067811865476", "im": "0"},
                {"lambda": [-3, -4], "re": "0.7071067811865476", "im": "0"}]}}"#;
        let c = ExperimentConfig::from_json(explicit).unwrap();
        assert!(c.coefficient_vector().is_ok());
        let broken = explicit.replacen("\"im\": \"0\"", "\"im\": \"0.1\"", 1);
        assert!(ExperimentConfig::from_json(&broken).unwrap().coefficient_vector().is_err());
    }

    #[test]
    fn serializes_back() {
        let c = ExperimentConfig::from_json(BASE).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["coefficients"]["seed"], 7);
        assert_eq!(v["T"], 5.0);
        let arc = BASE.replace(r#"{"type": "bourgain", "seed": 7}"#, r#"{"type": "arc", "t": "2/4"}"#);
        let v = serde_json::to_value(ExperimentConfig::from_json(&arc).unwrap()).unwrap();
        assert_eq!(v["coefficients"]["t"], "1/2");
    }
}
