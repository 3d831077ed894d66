//! The random mass `X(x) = ∫_{B_x(r)} f²` and its moments.
//!
//! Every statistical path evaluates `X` through the difference table
//! `W(δ) = g_d(r‖δ‖) Σ_{λ−λ'=δ} c_λ c̄_λ'` (one entry per distinct nonzero
//! `δ`), so that
//! `X(x) = vol(B_r) + (2π)^{d/2} r^d Σ_δ W(δ) e(⟨x,δ⟩)`.

mod clt;
mod montecarlo;
mod pairdist;
mod quadrature;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

pub use clt::{clt_diagnostics, normal_cdf, CltDiagnostics, MomentRow};
pub use montecarlo::{
    monte_carlo_moments, sample_centre, sample_masses, summarize, McMoments, McSpec, Restriction, StandardizedMoment,
    JACKKNIFE_BLOCKS,
};
pub use pairdist::{close_pair_count, pair_distance_distribution, PairDistances, PairVariant};
pub use quadrature::{gauss_legendre, mass_quadrature};

use crate::eigenfunction::{dot, e, CoefficientVector};
use crate::error::{Error, Result};
use crate::lattice::{add, norm, sub, Dim, Vector};
use crate::specfun;

/// `vol(B_r) = E[X]`.
pub fn expectation_exact(r: f64, d: Dim) -> f64 {
    match d {
        Dim::Two => PI * r * r,
        Dim::Three => 4.0 / 3.0 * PI * r * r * r,
    }
}

/// `(2π)^{d/2} r^d`, the prefactor of the oscillating part of `X`.
pub fn spectral_scale(r: f64, d: Dim) -> f64 {
    match d {
        Dim::Two => TAU * r * r,
        Dim::Three => TAU.powf(1.5) * r * r * r,
    }
}

fn check_positive(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

/// Balls of radius `r < 1/2` embed in the fundamental domain.
pub fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 0.5) {
        return Err(Error::invalid(format!("radius must lie in (0, 1/2), got {r}")));
    }
    Ok(())
}

/// Deduplicated difference table of one coefficient vector at one radius.
#[derive(Clone, Debug)]
pub struct PairTable {
    dim: Dim,
    r: f64,
    deltas: Vec<Vector>,
    weights: Vec<Complex64>,
}

impl PairTable {
    /// Builds the table for any `r > 0`. The moment formulas hold for every
    /// radius; pointwise evaluation additionally needs `r < 1/2`.
    pub fn new(cv: &CoefficientVector, r: f64) -> Result<Self> {
        check_positive(r)?;
        let points = cv.set().points();
        let c = cv.coeffs();
        let mut map: FxHashMap<Vector, Complex64> = FxHashMap::default();
        for (i, p) in points.iter().enumerate() {
            if c[i] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, q) in points.iter().enumerate() {
                if i != j && c[j] != Complex64::new(0.0, 0.0) {
                    *map.entry(sub(p, q)).or_default() += c[i] * c[j].conj();
                }
            }
        }
        let mut entries: Vec<(Vector, Complex64)> = map.into_iter().collect();
        entries.sort_by_key(|a| a.0);
        let dim = cv.dim();
        let (deltas, weights) = entries
            .into_iter()
            .map(|(d, w)| (d, w * specfun::g(dim, r * norm(&d))))
            .unzip();
        Ok(PairTable { dim, r, deltas, weights })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Distinct nonzero differences, sorted lexicographically.
    pub fn deltas(&self) -> &[Vector] {
        &self.deltas
    }

    /// `W(δ)` aligned with [`Self::deltas`].
    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    pub fn scale(&self) -> f64 {
        spectral_scale(self.r, self.dim)
    }

    /// Index of the first `δ > 0`; the table is symmetric under `δ ↦ −δ`, so
    /// the positive half determines the real sum.
    pub(crate) fn positive_start(&self) -> usize {
        self.deltas.partition_point(|d| *d <= [0, 0, 0])
    }

    /// `X(x) − vol(B_r)`, with phases computed directly.
    pub fn oscillation(&self, x: &[f64]) -> f64 {
        let s: f64 = self.deltas[self.positive_start()..]
            .iter()
            .zip(&self.weights[self.positive_start()..])
            .map(|(d, w)| (w * e(dot(x, d))).re)
            .sum();
        2.0 * self.scale() * s
    }

    /// `X(x)`.
    pub fn mass(&self, x: &[f64]) -> f64 {
        expectation_exact(self.r, self.dim) + self.oscillation(x)
    }

    /// `Σ_δ |W(δ)|²`, the full-torus variance divided by the squared scale.
    pub(crate) fn energy(&self) -> f64 {
        self.weights.iter().map(|w| w.norm_sqr()).sum()
    }
}

/// `X(x)` through the spectral identity.
pub fn mass_exact(cv: &CoefficientVector, x: &[f64], r: f64) -> Result<f64> {
    if x.len() != cv.dim().get() {
        return Err(Error::invalid("centre dimension does not match the coefficient vector"));
    }
    check_radius(r)?;
    Ok(PairTable::new(cv, r)?.mass(x))
}

/// Spectral (pair-sum) variance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralVariance {
    /// `2(2π)^d r^{2d} Σ_{λ≠λ'} |c_λ|²|c_λ'|² h_d(r‖λ−λ'‖)`.
    pub main_term: f64,
    /// `(2π)^d r^{2d} Σ_λ |c_λ|²|c_{−λ}|² h_d(2T)`, counted twice by the main
    /// term.
    pub antipodal_correction: f64,
    /// `main_term − antipodal_correction`: the diagonal-tuple contribution.
    pub value: f64,
}

/// Variance from the diagonal (paired) quadruples only. Exact in `d = 2`;
/// the diagonal approximation in `d = 3`.
pub fn variance_spectral(cv: &CoefficientVector, r: f64) -> Result<SpectralVariance> {
    check_positive(r)?;
    let d = cv.dim();
    let set = cv.set();
    let w = cv.weights();
    let pts = set.points();
    let mut pair_sum = 0.0;
    for i in 0..pts.len() {
        if w[i] == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for j in 0..pts.len() {
            if i != j && w[j] != 0.0 {
                row += w[j] * specfun::h(d, r * norm(&sub(&pts[i], &pts[j])));
            }
        }
        pair_sum += w[i] * row;
    }
    let antipodal: f64 = (0..pts.len()).map(|i| w[i] * w[set.antipode(i)]).sum();
    let s2 = spectral_scale(r, d).powi(2);
    let main_term = 2.0 * s2 * pair_sum;
    let antipodal_correction = s2 * antipodal * specfun::h(d, 2.0 * r * set.radius());
    Ok(SpectralVariance {
        main_term,
        antipodal_correction,
        value: main_term - antipodal_correction,
    })
}

/// Exact variance `(2π)^d r^{2d} Σ_δ |W(δ)|²`, i.e. the sum over all zero-sum
/// quadruples grouped by their difference vector.
pub fn variance_exact_tuple(cv: &CoefficientVector, r: f64) -> Result<f64> {
    let table = PairTable::new(cv, r)?;
    Ok(variance_from_table(&table))
}

pub fn variance_from_table(table: &PairTable) -> f64 {
    table.scale().powi(2) * table.energy()
}

/// `k`-fold sums of differences weighted by `Π W(δ_i)`.
fn convolve(base: &FxHashMap<Vector, Complex64>, table: &PairTable) -> FxHashMap<Vector, Complex64> {
    let mut keys: Vec<&Vector> = base.keys().collect();
    keys.sort();
    let mut out: FxHashMap<Vector, Complex64> = FxHashMap::default();
    out.reserve(base.len() * 4);
    for s in keys {
        let v = base[s];
        for (d, w) in table.deltas.iter().zip(&table.weights) {
            *out.entry(add(s, d)).or_default() += v * w;
        }
    }
    out
}

fn power_maps(table: &PairTable, k: usize) -> FxHashMap<Vector, Complex64> {
    let mut map: FxHashMap<Vector, Complex64> = FxHashMap::default();
    map.insert([0, 0, 0], Complex64::new(1.0, 0.0));
    for _ in 0..k {
        map = convolve(&map, table);
    }
    map
}

/// `P^⌈k/2⌉` operation estimate for a `k`-th moment.
pub fn moment_work(table: &PairTable, k: usize) -> u128 {
    (0..k.div_ceil(2)).fold(1u128, |acc, _| acc.saturating_mul(table.len() as u128))
}

/// Largest `⌊k/2⌋`-fold sum map an exact moment may hold in memory.
pub const MAX_MAP_ENTRIES: u128 = 1 << 25;

/// Exact `k`-th centred moment `E[(X − E X)^k]` over the torus: the scaled
/// sum of `Π W(δ_i)` over `k`-tuples of differences summing to zero.
pub fn moment_exact_tuple(cv: &CoefficientVector, r: f64, k: usize, budget: u128) -> Result<f64> {
    let table = PairTable::new(cv, r)?;
    moment_from_table(&table, k, budget)
}

pub fn moment_from_table(table: &PairTable, k: usize, budget: u128) -> Result<f64> {
    if k < 2 {
        return Err(Error::invalid("moment order must be >= 2"));
    }
    let required = moment_work(table, k);
    if required > budget {
        return Err(Error::Budget { required, budget });
    }
    let half = k / 2;
    let entries = (0..half).fold(1u128, |acc, _| acc.saturating_mul(table.len() as u128));
    if half > 1 && entries > MAX_MAP_ENTRIES {
        return Err(Error::Budget { required: entries, budget: MAX_MAP_ENTRIES });
    }
    let sum = if k == 2 {
        Complex64::new(table.energy(), 0.0)
    } else {
        let left = power_maps(table, half);
        let mut keys: Vec<&Vector> = left.keys().collect();
        keys.sort();
        let lookup = |s: &Vector| left.get(&[-s[0], -s[1], -s[2]]).copied().unwrap_or_default();
        if k.is_multiple_of(2) {
            keys.into_iter().map(|s| left[s] * lookup(s)).sum()
        } else {
            // One more difference between the two halves.
            keys.into_iter()
                .map(|s| {
                    let inner: Complex64 = table
                        .deltas
                        .iter()
                        .zip(&table.weights)
                        .map(|(d, w)| w * lookup(&add(s, d)))
                        .sum();
                    left[s] * inner
                })
                .sum()
        }
    };
    if sum.im.abs() > 1e-8 * sum.re.abs().max(1e-300) && sum.im.abs() > 1e-14 {
        return Err(Error::invariant("real-moment", format!("moment sum {sum} is not real")));
    }
    Ok(table.scale().powi(k as i32) * sum.re)
}

/// Ball average of `e(⟨x,ξ⟩)` over `B_{x0}(ρ)` in the plane, divided by
/// `e(⟨x0,ξ⟩)`: `2 g_2(ρ‖ξ‖)`, and 1 at `ξ = 0`.
pub fn disc_average_factor(rho: f64, xi: &Vector) -> f64 {
    if *xi == [0, 0, 0] {
        1.0
    } else {
        2.0 * specfun::g(Dim::Two, rho * norm(xi))
    }
}

/// Exact restricted moments for centres uniform in `B_{x0}(ρ)` (`d = 2`).
///
/// `k = 1` returns the restricted mean of `X`, `k = 2` the restricted
/// variance, and `k ≥ 3` the restricted moment `E[(X − πr²)^k]`.
pub fn restricted_moment_exact(
    cv: &CoefficientVector,
    r: f64,
    x0: &[f64],
    rho: f64,
    k: usize,
    budget: u128,
) -> Result<f64> {
    if cv.dim() != Dim::Two {
        return Err(Error::invalid("restricted moments are implemented for d = 2"));
    }
    if x0.len() != 2 {
        return Err(Error::invalid("x0 must have two coordinates"));
    }
    if !(rho > 0.0 && rho < 0.5) {
        return Err(Error::invalid(format!("rho must lie in (0, 1/2), got {rho}")));
    }
    if k < 1 {
        return Err(Error::invalid("moment order must be >= 1"));
    }
    let table = PairTable::new(cv, r)?;
    let required = (0..k).fold(1u128, |acc, _| acc.saturating_mul(table.len() as u128));
    if required > budget {
        return Err(Error::Budget { required, budget });
    }
    let raw = |order: usize| -> f64 {
        let map = power_maps(&table, order);
        let mut keys: Vec<&Vector> = map.keys().collect();
        keys.sort();
        let s: Complex64 = keys
            .into_iter()
            .map(|xi| map[xi] * e(dot(x0, xi)) * disc_average_factor(rho, xi))
            .sum();
        table.scale().powi(order as i32) * s.re
    };
    let m1 = raw(1);
    Ok(match k {
        1 => expectation_exact(r, Dim::Two) + m1,
        2 => raw(2) - m1 * m1,
        _ => raw(k),
    })
}

/// Main term of the variance asymptotics: `16/(3π cos²θ)·r⁴/T` for `d = 2`,
/// `r⁶/T²` for `d = 3`.
pub fn predict_variance_asymptotic(d: Dim, theta: f64, r: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::invalid("T must be positive"));
    }
    Ok(match d {
        Dim::Two => 16.0 / (3.0 * PI * theta.cos().powi(2)) * r.powi(4) / t,
        Dim::Three => r.powi(6) / (t * t),
    })
}

/// Gaussian moment `E[Z^k]`: `(k−1)!!` for even `k`, 0 for odd.
pub fn gaussian_moment(k: usize) -> f64 {
    if k % 2 == 1 {
        0.0
    } else {
        (1..k).step_by(2).map(|j| j as f64).product()
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::correlations::for_each_tuple;
    use crate::brute::brute_moment;
    use crate::eigenfunction::{make_arc_supported, make_bourgain, BourgainSigns};
    use crate::lattice::{enumerate_lattice_points, LatticePointSet};
    use crate::rng::{CounterRng, Domain};
    use num_rational::Ratio;

    fn circle(n: u64) -> Arc<LatticePointSet> {
        Arc::new(enumerate_lattice_points(n, Dim::Two).unwrap())
    }

    fn single_pair(n: u64) -> CoefficientVector {
        let set = circle(n);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = *set.point(0);
        CoefficientVector::from_entries(
            set,
            &[(p, Complex64::new(s, 0.0)), ([-p[0], -p[1], 0], Complex64::new(s, 0.0))],
        )
        .unwrap()
    }

    #[test]
    fn expectation_values() {
        assert!((expectation_exact(0.1, Dim::Two) - 0.01 * PI).abs() < 1e-17);
        assert!((expectation_exact(0.1, Dim::Three) - 4.0 / 3.0 * PI * 1e-3).abs() < 1e-17);
        assert_eq!(expectation_exact(0.0, Dim::Two), 0.0);
    }

    #[test]
    fn single_antipodal_pair_hand_expansion() {
        let n = 25;
        let cv = single_pair(n);
        let r = 0.07;
        let t = r * (n as f64).sqrt();
        let lambda = cv.set().point(0);
        let table = PairTable::new(&cv, r).unwrap();
        let mut rng = CounterRng::new(1, Domain::MonteCarlo, 0);
        for _ in 0..10 {
            let x = [rng.uniform(), rng.uniform()];
            let expected = PI * r * r
                + 2.0 * PI * r * r * (2.0 * TAU * dot(&x, lambda)).cos() * specfun::g(Dim::Two, 2.0 * t);
            assert!((table.mass(&x) - expected).abs() < 1e-15);
        }
        // Exact variance 2π²r⁴h₂(2T); the pair-sum main term doubles it.
        let exact = variance_exact_tuple(&cv, r).unwrap();
        let want = 2.0 * PI * PI * r.powi(4) * specfun::h(Dim::Two, 2.0 * t);
        assert!((exact - want).abs() <= 1e-14 * want);
        let sv = variance_spectral(&cv, r).unwrap();
        assert!((sv.main_term - 2.0 * want).abs() <= 1e-14 * want);
        assert!((sv.value - exact).abs() <= 1e-14 * want);
    }

    #[test]
    fn zygmund_through_both_pipelines() {
        for n in [5, 25, 65, 325, 1105] {
            let set = circle(n);
            for cv in [
                make_bourgain(set.clone(), BourgainSigns::Seed(3)).unwrap(),
                make_arc_supported(set.clone(), Ratio::new(1, 2)).unwrap(),
            ] {
                let r = 0.05;
                let a = variance_spectral(&cv, r).unwrap().value;
                let b = variance_exact_tuple(&cv, r).unwrap();
                assert!((a - b).abs() <= 1e-10 * b, "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn third_moment_matches_brute_force() {
        let cv = make_bourgain(circle(25), BourgainSigns::Seed(1)).unwrap();
        let fast = moment_exact_tuple(&cv, 0.05, 3, u128::MAX).unwrap();
        let slow = brute_moment(&cv, 0.05, 3);
        assert!((fast - slow).abs() <= 1e-10 * slow.abs(), "{fast} vs {slow}");
    }

    #[test]
    fn fourth_and_fifth_moments_match_brute_force() {
        for (n, k) in [(5, 4), (2, 5), (2, 6)] {
            let cv = make_bourgain(circle(n), BourgainSigns::Seed(2)).unwrap();
            let fast = moment_exact_tuple(&cv, 0.2, k, u128::MAX).unwrap();
            let slow = brute_moment(&cv, 0.2, k);
            assert!((fast - slow).abs() <= 1e-10 * slow.abs().max(1e-30), "k={k}: {fast} vs {slow}");
        }
    }

    #[test]
    fn second_moment_is_the_variance() {
        let cv = make_bourgain(circle(65), BourgainSigns::Seed(9)).unwrap();
        let m2 = moment_exact_tuple(&cv, 0.05, 2, u128::MAX).unwrap();
        let v = variance_exact_tuple(&cv, 0.05).unwrap();
        assert_eq!(m2, v);
        // The convolution route agrees too.
        let table = PairTable::new(&cv, 0.05).unwrap();
        let map = power_maps(&table, 1);
        let conv: Complex64 = map.iter().map(|(s, w)| w * map[&[-s[0], -s[1], -s[2]]]).sum();
        assert!((table.scale().powi(2) * conv.re - v).abs() <= 1e-13 * v);
    }

    #[test]
    fn three_dimensional_off_diagonal_part() {
        let set = Arc::new(enumerate_lattice_points(3, Dim::Three).unwrap());
        let cv = make_bourgain(set.clone(), BourgainSigns::AllPlus).unwrap();
        let r = 0.2;
        let exact = variance_exact_tuple(&cv, r).unwrap();
        let diag = variance_spectral(&cv, r).unwrap().value;
        // Brute force over non-diagonal zero-sum quadruples.
        let w = 1.0 / set.len() as f64;
        let mut off = 0.0;
        for_each_tuple(set.len(), 4, |t| {
            let (a, b, c, d) = (t[0], t[1], t[2], t[3]);
            if a == b || c == d {
                return;
            }
            let s = add(&sub(set.point(a), set.point(b)), &sub(set.point(c), set.point(d)));
            if s != [0, 0, 0] || crate::correlations::is_diagonal(&set, &[a, set.antipode(b), c, set.antipode(d)]) {
                return;
            }
            let g1 = specfun::g(Dim::Three, r * norm(&sub(set.point(a), set.point(b))));
            let g2 = specfun::g(Dim::Three, r * norm(&sub(set.point(c), set.point(d))));
            off += w * w * g1 * g2;
        });
        off *= spectral_scale(r, Dim::Three).powi(2);
        assert!(off.abs() > 0.0);
        assert!((exact - diag - off).abs() <= 1e-12 * exact, "{exact} {diag} {off}");
    }

    #[test]
    fn mass_is_non_negative() {
        for (n, seed) in [(25, 1), (65, 2), (325, 3), (1105, 4), (5525, 5)] {
            let cv = make_bourgain(circle(n), BourgainSigns::Seed(seed)).unwrap();
            let table = PairTable::new(&cv, 0.1).unwrap();
            for i in 0..2000 {
                let mut rng = CounterRng::new(seed, Domain::MonteCarlo, i);
                assert!(table.mass(&[rng.uniform(), rng.uniform()]) >= -1e-12);
            }
        }
    }

    #[test]
    fn grid_average_is_the_volume() {
        // All difference coordinates of E_25 lie below 32 in absolute value, so
        // every nonconstant character averages to zero on the 64×64 grid.
        let cv = make_bourgain(circle(25), BourgainSigns::Seed(1)).unwrap();
        let table = PairTable::new(&cv, 0.1).unwrap();
        let mut sum = 0.0;
        for i in 0..64 {
            for j in 0..64 {
                sum += table.mass(&[i as f64 / 64.0, j as f64 / 64.0]);
            }
        }
        assert!((sum / 4096.0 - PI * 0.01).abs() < 1e-10);
    }

    #[test]
    fn mass_matches_direct_integration() {
        let cv = make_bourgain(circle(25), BourgainSigns::Seed(1)).unwrap();
        let table = PairTable::new(&cv, 0.1).unwrap();
        let x = [0.3, 0.7];
        let q = mass_quadrature(&cv, &x, 0.1, 1e-10).unwrap();
        assert!((q - table.mass(&x)).abs() < 1e-8);
    }

    #[test]
    fn restricted_single_pair_hand_expansion() {
        let cv = single_pair(25);
        let lambda = *cv.set().point(0);
        let (r, rho) = (0.07, 0.03);
        let x0 = [0.21, 0.64];
        let t = r * 5.0;
        let two_l = [2 * lambda[0], 2 * lambda[1], 0];
        // X − πr² = a cos(4π⟨x,λ⟩) with a = 2πr² g₂(2T).
        let a = 2.0 * PI * r * r * specfun::g(Dim::Two, 2.0 * t);
        let f1 = disc_average_factor(rho, &two_l);
        let f2 = disc_average_factor(rho, &[2 * two_l[0], 2 * two_l[1], 0]);
        let phase = TAU * dot(&x0, &two_l);
        let mean = a * phase.cos() * f1;
        let second = a * a * 0.5 * (1.0 + (2.0 * phase).cos() * f2);
        let m1 = restricted_moment_exact(&cv, r, &x0, rho, 1, u128::MAX).unwrap();
        let v = restricted_moment_exact(&cv, r, &x0, rho, 2, u128::MAX).unwrap();
        assert!((m1 - PI * r * r - mean).abs() < 1e-14);
        assert!((v - (second - mean * mean)).abs() < 1e-14);
    }

    #[test]
    fn restricted_moments_reject_three_dimensions() {
        let set = Arc::new(enumerate_lattice_points(3, Dim::Three).unwrap());
        let cv = make_bourgain(set, BourgainSigns::AllPlus).unwrap();
        assert!(restricted_moment_exact(&cv, 0.1, &[0.0, 0.0, 0.0], 0.1, 1, u128::MAX).is_err());
    }

    #[test]
    fn prediction_scaling() {
        let a = predict_variance_asymptotic(Dim::Two, 0.0, 0.01, 5.0).unwrap();
        let b = predict_variance_asymptotic(Dim::Two, 0.0, 0.01, 10.0).unwrap();
        assert!((a / b - 2.0).abs() < 1e-14);
        let c = predict_variance_asymptotic(Dim::Two, 0.0, 0.03, 5.0).unwrap();
        assert!((c / a - 81.0).abs() < 1e-10);
        let theta = (0.25f64).sqrt().acos();
        let arc = predict_variance_asymptotic(Dim::Two, theta, 0.01, 5.0).unwrap();
        assert!((arc / a - 4.0).abs() < 1e-12);
        let d3 = predict_variance_asymptotic(Dim::Three, 0.0, 0.1, 2.0).unwrap();
        assert!((d3 - 1e-6 / 4.0).abs() < 1e-20);
    }

    #[test]
    fn gaussian_moments() {
        assert_eq!(gaussian_moment(2), 1.0);
        assert_eq!(gaussian_moment(3), 0.0);
        assert_eq!(gaussian_moment(4), 3.0);
        assert_eq!(gaussian_moment(6), 15.0);
    }

    #[test]
    fn radius_checks() {
        let cv = make_bourgain(circle(25), BourgainSigns::AllPlus).unwrap();
        assert!(mass_exact(&cv, &[0.0, 0.0], 0.5).is_err());
        assert!(PairTable::new(&cv, 0.0).is_err());
        // Moments only need a positive radius.
        let v = variance_exact_tuple(&cv, 0.6).unwrap();
        assert!((variance_spectral(&cv, 0.6).unwrap().value - v).abs() <= 1e-12 * v);
    }
}
