//! Coefficient vectors `c_λ` of real eigenfunctions `f = Σ c_λ e(⟨x,λ⟩)` and
//! their flatness measures.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Dim, LatticePointSet, Vector};
use crate::rng::{CounterRng, Domain};

/// Tolerance on `Σ|c_λ|² = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// `e(t) = exp(2πi t)`.
pub fn e(t: f64) -> Complex64 {
    let (s, c) = (TAU * t.rem_euclid(1.0)).sin_cos();
    Complex64::new(c, s)
}

/// `⟨x, λ⟩` with the point given in the torus coordinates `[0,1)^d`.
pub fn dot(x: &[f64], v: &Vector) -> f64 {
    x.iter().zip(v).map(|(xi, &vi)| xi * vi as f64).sum()
}

/// Hermitian-symmetric, L²-normalised coefficients on `E_n`, indexed like
/// the points of the set.
#[derive(Clone, Debug)]
pub struct CoefficientVector {
    set: Arc<LatticePointSet>,
    coeffs: Vec<Complex64>,
}

/// Sign choice for Bourgain's eigenfunction. Serialised as `"all_plus"` or
/// an integer seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BourgainSigns {
    AllPlus,
    Seed(u64),
}

impl Serialize for BourgainSigns {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BourgainSigns::AllPlus => s.serialize_str("all_plus"),
            BourgainSigns::Seed(seed) => s.serialize_u64(*seed),
        }
    }
}

impl<'de> Deserialize<'de> for BourgainSigns {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct Visitor;
        impl serde::de::Visitor<'_> for Visitor {
            type Value = BourgainSigns;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("\"all_plus\" or a non-negative integer seed")
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(BourgainSigns::Seed(v))
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                if v == "all_plus" {
                    Ok(BourgainSigns::AllPlus)
                } else {
                    v.parse().map(BourgainSigns::Seed).map_err(|_| E::custom(format!("bad seed {v:?}")))
                }
            }
        }
        d.deserialize_any(Visitor)
    }
}

/// Piecewise-constant non-negative density on `[0, 2π)`: `values[i]` holds on
/// `[breakpoints[i], breakpoints[i+1])`, the last piece running to `2π`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseConstant {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl PiecewiseConstant {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let g = PiecewiseConstant { breakpoints, values };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.breakpoints;
        if b.is_empty() || b.len() != self.values.len() {
            return Err(Error::invalid("density needs equally many breakpoints and values"));
        }
        if b[0] != 0.0 {
            return Err(Error::invalid("first breakpoint must be 0"));
        }
        if !b.windows(2).all(|w| w[0] < w[1]) || !(b[b.len() - 1] < TAU) {
            return Err(Error::invalid("breakpoints must increase strictly inside [0, 2pi)"));
        }
        if self.values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::invalid("density values must be finite and non-negative"));
        }
        let mean = self.mean();
        if (mean - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("density must have unit mean, got {mean}")));
        }
        Ok(())
    }

    /// `(1/2π) ∫ g`.
    pub fn mean(&self) -> f64 {
        let b = &self.breakpoints;
        let total: f64 = (0..b.len())
            .map(|i| {
                let hi = if i + 1 < b.len() { b[i + 1] } else { TAU };
                self.values[i] * (hi - b[i])
            })
            .sum();
        total / TAU
    }

    /// `(1/2π) ∫ g²`.
    pub fn mean_square(&self) -> f64 {
        let b = &self.breakpoints;
        let total: f64 = (0..b.len())
            .map(|i| {
                let hi = if i + 1 < b.len() { b[i + 1] } else { TAU };
                self.values[i] * self.values[i] * (hi - b[i])
            })
            .sum();
        total / TAU
    }

    pub fn at(&self, angle: f64) -> f64 {
        let a = angle.rem_euclid(TAU);
        let i = self.breakpoints.partition_point(|&b| b <= a);
        self.values[i.saturating_sub(1)]
    }
}

impl CoefficientVector {
    /// Validates Hermitian symmetry, normalisation and support.
    pub fn new(set: Arc<LatticePointSet>, coeffs: Vec<Complex64>) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::invalid("coefficient vector on an empty set"));
        }
        if coeffs.len() != set.len() {
            return Err(Error::invalid(format!(
                "expected {} coefficients, got {}",
                set.len(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid("coefficients must be finite"));
        }
        for (i, c) in coeffs.iter().enumerate() {
            let j = set.antipode(i);
            if coeffs[j] != c.conj() {
                return Err(Error::invariant(
                    "hermitian-symmetry",
                    format!(
                        "c at {:?} is {c}, c at {:?} is {}",
                        set.point(i),
                        set.point(j),
                        coeffs[j]
                    ),
                ));
            }
        }
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::invariant(
                "l2-normalization",
                format!("sum of |c|^2 is {norm}"),
            ));
        }
        Ok(CoefficientVector { set, coeffs })
    }

    /// Non-negative real coefficients `√(w_λ/Σw)` from unnormalised weights.
    pub fn from_weights(set: Arc<LatticePointSet>, weights: &[f64]) -> Result<Self> {
        if weights.len() != set.len() {
            return Err(Error::invalid("one weight per lattice point is required"));
        }
        for (i, w) in weights.iter().enumerate() {
            if weights[set.antipode(i)] != *w {
                return Err(Error::invariant(
                    "hermitian-symmetry",
                    format!(
                        "weight {w} at {:?} differs from weight {} at its negation",
                        set.point(i),
                        weights[set.antipode(i)]
                    ),
                ));
            }
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::invalid("weights vanish on every lattice point"));
        }
        let coeffs = weights
            .iter()
            .map(|w| Complex64::new((w / total).sqrt(), 0.0))
            .collect();
        Self::new(set, coeffs)
    }

    /// Explicit `(λ, c_λ)` entries; unlisted points get 0.
    pub fn from_entries(set: Arc<LatticePointSet>, entries: &[(Vector, Complex64)]) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); set.len()];
        let mut seen = vec![false; set.len()];
        for (v, c) in entries {
            let i = set.index_of(v).ok_or_else(|| {
                Error::invariant("support", format!("{v:?} is not in E_{}", set.n()))
            })?;
            if seen[i] {
                return Err(Error::invalid(format!("duplicate entry for {v:?}")));
            }
            seen[i] = true;
            coeffs[i] = *c;
        }
        Self::new(set, coeffs)
    }

    pub fn set(&self) -> &Arc<LatticePointSet> {
        &self.set
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn dim(&self) -> Dim {
        self.set.dim()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Squared moduli `|c_λ|²`.
    pub fn weights(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Coefficients `c_λ e(⟨u,λ⟩)` of the translate `f(· + u)`.
    pub fn translated(&self, u: &[f64]) -> Result<Self> {
        self.check_point(u)?;
        let mut coeffs = self.coeffs.clone();
        for i in 0..coeffs.len() {
            let j = self.set.antipode(i);
            if i <= j {
                coeffs[i] = self.coeffs[i] * e(dot(u, self.set.point(i)));
                coeffs[j] = coeffs[i].conj();
            }
        }
        Ok(CoefficientVector {
            set: self.set.clone(),
            coeffs,
        })
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim().get() {
            return Err(Error::invalid(format!(
                "point has {} coordinates, dimension is {}",
                x.len(),
                self.dim()
            )));
        }
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("point coordinates must be finite"));
        }
        Ok(())
    }
}

/// `c_λ = ±1/√N` with signs constant on each pair `{λ, −λ}`.
pub fn make_bourgain(set: Arc<LatticePointSet>, signs: BourgainSigns) -> Result<CoefficientVector> {
    if set.is_empty() {
        return Err(Error::invalid("Bourgain eigenfunction on an empty set"));
    }
    let amp = 1.0 / (set.len() as f64).sqrt();
    let mut coeffs = vec![Complex64::new(amp, 0.0); set.len()];
    if let BourgainSigns::Seed(seed) = signs {
        for i in 0..set.len() {
            let j = set.antipode(i);
            if i < j && CounterRng::new(seed, Domain::BourgainSigns, i as u64).next_u64() >> 63 == 1 {
                coeffs[i] = -coeffs[i];
                coeffs[j] = coeffs[i];
            }
        }
    }
    CoefficientVector::new(set, coeffs)
}

/// Equal weights `1/(Nt)` on `Nt/2` clockwise-consecutive points starting at
/// angle 0, together with their negations.
pub fn make_arc_supported(set: Arc<LatticePointSet>, t: Ratio<u64>) -> Result<CoefficientVector> {
    if set.dim() != Dim::Two {
        return Err(Error::invalid("arc-supported coefficients require d = 2"));
    }
    if set.is_empty() {
        return Err(Error::invalid("arc-supported coefficients on an empty set"));
    }
    if *t.numer() == 0 || t > Ratio::from_integer(1) {
        return Err(Error::invalid(format!("t must lie in (0, 1], got {t}")));
    }
    let n = set.len() as u64;
    let scaled = Ratio::from_integer(n) * t;
    if !scaled.is_integer() {
        return Err(Error::invalid(format!("N*t = {scaled} is not an integer (N = {n})")));
    }
    let count = scaled.to_integer() as usize;
    if count % 2 == 1 {
        return Err(Error::invalid(format!(
            "N*t = {count} is odd; a negation-closed block needs an even size"
        )));
    }
    let mut weights = vec![0.0; set.len()];
    let mut i = 0;
    for _ in 0..count / 2 {
        weights[i] = 1.0;
        weights[set.antipode(i)] = 1.0;
        i = set.clockwise_successor(i);
    }
    CoefficientVector::from_weights(set, &weights)
}

/// `|c_λ|² ∝ g(angle of λ)` for a piecewise-constant density `g`. The density
/// must take equal values at antipodal lattice angles, as real eigenfunctions
/// require.
pub fn make_bv_density(set: Arc<LatticePointSet>, g: &PiecewiseConstant) -> Result<CoefficientVector> {
    if set.dim() != Dim::Two {
        return Err(Error::invalid("density-weighted coefficients require d = 2"));
    }
    g.validate()?;
    let weights: Vec<f64> = set.angles().iter().map(|&a| g.at(a)).collect();
    if weights.iter().all(|&w| w == 0.0) {
        return Err(Error::invalid("density vanishes at every lattice angle"));
    }
    CoefficientVector::from_weights(set, &weights)
}

/// `f(x) = Σ c_λ e(⟨x,λ⟩)`; the imaginary part must vanish to `1e-10·N`.
pub fn evaluate(cv: &CoefficientVector, x: &[f64]) -> Result<f64> {
    cv.check_point(x)?;
    let sum: Complex64 = cv
        .coeffs
        .iter()
        .zip(cv.set.points())
        .map(|(c, v)| c * e(dot(x, v)))
        .sum();
    if sum.im.abs() > 1e-10 * cv.len() as f64 {
        return Err(Error::invariant(
            "real-valued",
            format!("imaginary part {} at {x:?}", sum.im),
        ));
    }
    Ok(sum.re)
}

/// Parameters of the flatness classes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatnessParams {
    pub eps: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub eta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Memberships {
    pub bourgain: bool,
    pub ultraflat: bool,
    /// `None` in dimension 3, where `Ṽ` is undefined.
    #[serde(rename = "F1")]
    pub f1: Option<bool>,
    #[serde(rename = "F2")]
    pub f2: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub v_inf: f64,
    #[serde(rename = "A4")]
    pub a4: f64,
    #[serde(rename = "V")]
    pub v: Option<f64>,
    #[serde(rename = "V_tilde")]
    pub v_tilde: Option<f64>,
    pub theta: f64,
    pub memberships: Memberships,
}

/// `N·max|c_λ|²`.
pub fn v_inf(cv: &CoefficientVector) -> f64 {
    cv.len() as f64 * cv.weights().into_iter().fold(0.0, f64::max)
}

/// `A_4 = N·Σ|c_λ|⁴ = cos(θ)^{-2}`.
pub fn a4(cv: &CoefficientVector) -> f64 {
    cv.len() as f64 * cv.weights().iter().map(|w| w * w).sum::<f64>()
}

/// `V = N·Σ ||c_{λ₊}|² − |c_λ|²|` around the circle.
pub fn variation(cv: &CoefficientVector) -> Result<f64> {
    if cv.dim() != Dim::Two {
        return Err(Error::invalid("V needs the circular order of d = 2"));
    }
    let w = cv.weights();
    let set = cv.set();
    let total: f64 = (0..w.len())
        .map(|i| (w[set.clockwise_successor(i)] - w[i]).abs())
        .sum();
    Ok(cv.len() as f64 * total)
}

pub fn is_bourgain(cv: &CoefficientVector) -> bool {
    let n = cv.len() as f64;
    cv.coeffs
        .iter()
        .all(|c| c.im == 0.0 && (c.re * c.re * n - 1.0).abs() <= 1e-12)
}

pub fn flatness_report(cv: &CoefficientVector, params: &FlatnessParams) -> Result<FlatnessReport> {
    if !(params.t > 1.0) || !(params.eps > 0.0) || !(params.eta > 0.0) {
        return Err(Error::invalid("flatness parameters need T > 1, eps > 0, eta > 0"));
    }
    let vi = v_inf(cv);
    let a = a4(cv);
    let (v, v_tilde) = match cv.dim() {
        Dim::Two => {
            let v = variation(cv)?;
            (Some(v), Some(vi * v / a))
        }
        Dim::Three => (None, None),
    };
    let n = cv.len() as f64;
    let t = params.t;
    Ok(FlatnessReport {
        v_inf: vi,
        a4: a,
        v,
        v_tilde,
        theta: a.powf(-0.5).min(1.0).acos(),
        memberships: Memberships {
            bourgain: is_bourgain(cv),
            ultraflat: vi <= n.powf(params.eps),
            f1: v_tilde.map(|vt| vt < params.eta * t / t.ln()),
            f2: vi < t.powf(params.eta),
        },
    })
}
