//! Adaptive Gauss–Kronrod quadrature on finite and half-infinite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gauss–Kronrod pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Gk15,
    Gk21,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rule: Rule,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Equal-width panels the interval is split into before adapting. Useful
    /// for oscillatory integrands where a single rule can alias.
    #[serde(default = "one")]
    pub initial_panels: usize,
}

fn one() -> usize {
    1
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rule: Rule::Gk21,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 10_000,
            initial_panels: 1,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::invalid("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions < 1 || self.initial_panels < 1 {
            return Err(Error::invalid("max_subdivisions and initial_panels must be >= 1"));
        }
        Ok(())
    }
}

/// Upper limit of integration.
pub enum Upper<'a> {
    Finite(f64),
    /// `+∞`, with `tail(B)` an upper bound on `|∫_B^∞ f|` that is
    /// non-increasing in `B`.
    Infinite { tail: &'a dyn Fn(f64) -> f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub err_est: f64,
    /// Truncation point used for an infinite interval.
    pub cutoff: Option<f64>,
    pub subdivisions: usize,
}

// Nodes are the non-negative abscissae in decreasing order; the Gauss rule
// uses every other Kronrod node starting from index 1.
const GK15_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const GK15_WK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const GK15_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const GK21_X: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];
const GK21_WK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];
// The 10-point Gauss rule has no node at the centre.
const GK21_WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

/// One Gauss–Kronrod panel: `(kronrod, |kronrod − gauss|)`.
fn panel(rule: Rule, f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let (xs, wk, wg, centre_is_gauss): (&[f64], &[f64], &[f64], bool) = match rule {
        Rule::Gk15 => (&GK15_X, &GK15_WK, &GK15_WG, true),
        Rule::Gk21 => (&GK21_X, &GK21_WK, &GK21_WG, false),
    };
    let last = xs.len() - 1;
    let fc = f(c);
    let mut kron = wk[last] * fc;
    let mut gauss = if centre_is_gauss { wg[wg.len() - 1] * fc } else { 0.0 };
    for i in 0..last {
        let dx = h * xs[i];
        let pair = f(c - dx) + f(c + dx);
        kron += wk[i] * pair;
        if i % 2 == 1 {
            gauss += wg[i / 2] * pair;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, spec: &QuadratureSpec) -> Result<Quadrature> {
    let mut heap = BinaryHeap::new();
    let width = (b - a) / spec.initial_panels as f64;
    for i in 0..spec.initial_panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == spec.initial_panels { b } else { lo + width };
        let (value, err) = panel(spec.rule, f, lo, hi);
        heap.push(Piece { a: lo, b: hi, value, err });
    }
    let mut subdivisions = 0;
    let mut total: f64 = heap.iter().map(|p| p.value).sum();
    let mut err: f64 = heap.iter().map(|p| p.err).sum();
    loop {
        if !total.is_finite() {
            return Err(Error::Quadrature("integrand produced a non-finite value".into()));
        }
        if err <= abs_tol.max(spec.rel_tol * total.abs()) {
            // Re-sum to drop the drift of the running totals.
            return Ok(Quadrature {
                value: heap.iter().map(|p| p.value).sum(),
                err_est: heap.iter().map(|p| p.err).sum(),
                cutoff: None,
                subdivisions,
            });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::Quadrature(format!(
                "tolerance not met after {subdivisions} subdivisions (error estimate {err:e})"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::Quadrature("interval collapsed below machine resolution".into()));
        }
        total -= worst.value;
        err -= worst.err;
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (value, e) = panel(spec.rule, f, lo, hi);
            total += value;
            err += e;
            heap.push(Piece { a: lo, b: hi, value, err: e });
        }
        subdivisions += 1;
    }
}

/// Integrates `f` over `[a, upper)`.
///
/// For an infinite upper limit the cutoff `B` is the first point of the
/// doubling sequence `max(a,1)·2^k` whose certified tail is at most half of
/// `abs_tol`; the finite part is then integrated to the other half.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, upper: Upper<'_>, spec: &QuadratureSpec) -> Result<Quadrature> {
    spec.validate()?;
    match upper {
        Upper::Finite(b) => {
            if !(a < b) || !a.is_finite() || !b.is_finite() {
                return Err(Error::invalid(format!("need finite a < b, got [{a}, {b}]")));
            }
            adapt(f, a, b, spec.abs_tol, spec)
        }
        Upper::Infinite { tail } => {
            if !a.is_finite() {
                return Err(Error::invalid("lower limit must be finite"));
            }
            let half = 0.5 * spec.abs_tol;
            let mut cutoff = a.abs().max(1.0) + a.max(0.0);
            let mut steps = 0;
            while !(tail(cutoff) <= half) {
                cutoff *= 2.0;
                steps += 1;
                if steps > 200 {
                    return Err(Error::Quadrature("tail bound never fell below tolerance".into()));
                }
            }
            let mut q = adapt(f, a, cutoff, half, spec)?;
            q.err_est += tail(cutoff);
            q.cutoff = Some(cutoff);
            Ok(q)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrand() {
        let q = integrate(&|_| 1.0, 0.0, Upper::Finite(1.0), &QuadratureSpec::default()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rules_integrate_polynomials_exactly() {
        // GK15 is exact to degree 22, GK21 to degree 31; odd powers vanish trivially.
        for (rule, deg) in [(Rule::Gk15, 22), (Rule::Gk21, 30)] {
            let (v, _) = panel(rule, &|x: f64| x.powi(deg), -1.0, 1.0);
            let exact = 2.0 / (deg as f64 + 1.0);
            assert!((v - exact).abs() < 1e-14, "{rule:?}: {v}");
        }
    }

    #[test]
    fn gauss_weights_sum_to_two() {
        let s15: f64 = 2.0 * GK15_WG[..3].iter().sum::<f64>() + GK15_WG[3];
        let s21: f64 = 2.0 * GK21_WG.iter().sum::<f64>();
        let k15: f64 = 2.0 * GK15_WK[..7].iter().sum::<f64>() + GK15_WK[7];
        let k21: f64 = 2.0 * GK21_WK[..10].iter().sum::<f64>() + GK21_WK[10];
        for s in [s15, s21, k15, k21] {
            assert!((s - 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn exponential_tail() {
        let tail = |b: f64| (-b).exp();
        let spec = QuadratureSpec {
            abs_tol: 1e-12,
            ..Default::default()
        };
        let q = integrate(&|x: f64| (-x).exp(), 0.0, Upper::Infinite { tail: &tail }, &spec).unwrap();
        assert!((q.value - 1.0).abs() < 1e-12);
        assert!(q.cutoff.unwrap() > 27.0);
    }

    #[test]
    fn reports_failure_when_budget_is_too_small() {
        let spec = QuadratureSpec {
            abs_tol: 1e-14,
            rel_tol: 1e-14,
            max_subdivisions: 2,
            ..Default::default()
        };
        let r = integrate(&|x: f64| (200.0 * x).sin().abs(), 0.0, Upper::Finite(10.0), &spec);
        assert!(matches!(r, Err(Error::Quadrature(_))));
    }

    #[test]
    fn rejects_reversed_interval() {
        assert!(integrate(&|x| x, 1.0, Upper::Finite(0.0), &QuadratureSpec::default()).is_err());
    }
}
