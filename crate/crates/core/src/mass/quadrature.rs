//! Direct integration of `f²` over a ball, independent of the spectral
//! identity.

use std::f64::consts::{PI, TAU};

use crate::eigenfunction::{evaluate, CoefficientVector};
use crate::error::{Error, Result};
use crate::lattice::Dim;

use super::check_radius;

/// Gauss–Legendre nodes and weights on `[−1, 1]`, `m ≥ 1`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1, "need at least one node");
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = mf * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

const MAX_EVALUATIONS: usize = 1 << 28;

fn polar_rule(cv: &CoefficientVector, x: &[f64], r: f64, m: usize) -> Result<f64> {
    let (nodes, weights) = gauss_legendre(m);
    let q = 2 * m;
    let mut total = 0.0;
    for (t, w) in nodes.iter().zip(&weights) {
        let rho = 0.5 * r * (t + 1.0);
        let mut ring = 0.0;
        for j in 0..q {
            let phi = TAU * j as f64 / q as f64;
            let v = evaluate(cv, &[x[0] + rho * phi.cos(), x[1] + rho * phi.sin()])?;
            ring += v * v;
        }
        total += w * rho * ring * TAU / q as f64;
    }
    Ok(0.5 * r * total)
}

fn spherical_rule(cv: &CoefficientVector, x: &[f64], r: f64, m: usize) -> Result<f64> {
    let (nodes, weights) = gauss_legendre(m);
    let q = 2 * m;
    let mut total = 0.0;
    for (t, wr) in nodes.iter().zip(&weights) {
        let rho = 0.5 * r * (t + 1.0);
        let mut shell = 0.0;
        for (u, wu) in nodes.iter().zip(&weights) {
            let s = (1.0 - u * u).sqrt();
            for j in 0..q {
                let phi = TAU * j as f64 / q as f64;
                let p = [x[0] + rho * s * phi.cos(), x[1] + rho * s * phi.sin(), x[2] + rho * u];
                let v = evaluate(cv, &p)?;
                shell += wu * v * v;
            }
        }
        total += wr * rho * rho * shell * TAU / q as f64;
    }
    Ok(0.5 * r * total)
}

/// `∫_{B_x(r)} f²` by tensor Gauss–Legendre in the radius (and polar
/// cosine) with the trapezoid rule in azimuth. The node count doubles until
/// two successive values agree to `tol`.
pub fn mass_quadrature(cv: &CoefficientVector, x: &[f64], r: f64, tol: f64) -> Result<f64> {
    check_radius(r)?;
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let d = cv.dim();
    if x.len() != d.get() {
        return Err(Error::invalid("centre dimension does not match the coefficient vector"));
    }
    let rule = |m| match d {
        Dim::Two => polar_rule(cv, x, r, m),
        Dim::Three => spherical_rule(cv, x, r, m),
    };
    let cost = |m: usize| {
        let per = cv.len().max(1);
        match d {
            Dim::Two => 2 * m * m * per,
            Dim::Three => 2 * m * m * m * per,
        }
    };
    let mut m = 8;
    let mut prev = rule(m)?;
    loop {
        m *= 2;
        if cost(m) > MAX_EVALUATIONS {
            return Err(Error::Quadrature(format!("no convergence to {tol:e} within {} nodes", m / 2)));
        }
        let next = rule(m)?;
        if (next - prev).abs() <= tol {
            return Ok(next);
        }
        prev = next;
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::eigenfunction::{make_bourgain, BourgainSigns};
    use crate::lattice::enumerate_lattice_points;
    use crate::mass::PairTable;

    #[test]
    fn legendre_rule_is_exact_on_polynomials() {
        for m in [1, 2, 5, 8, 16, 33] {
            let (x, w) = gauss_legendre(m);
            for deg in 0..2 * m {
                let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((v - exact).abs() < 1e-13, "m={m} deg={deg}: {v}");
            }
        }
    }

    #[test]
    fn halving_tolerance_does_not_worsen_the_error() {
        let set = Arc::new(enumerate_lattice_points(65, Dim::Two).unwrap());
        let cv = make_bourgain(set, BourgainSigns::Seed(4)).unwrap();
        let x = [0.41, 0.13];
        let exact = PairTable::new(&cv, 0.2).unwrap().mass(&x);
        let mut last = f64::INFINITY;
        for tol in [1e-3, 5e-4, 1e-5, 5e-6, 1e-8] {
            let err = (mass_quadrature(&cv, &x, 0.2, tol).unwrap() - exact).abs();
            assert!(err <= last + 1e-15, "tol={tol}: {err} > {last}");
            last = err;
        }
        assert!(last < 1e-8);
    }

    #[test]
    fn three_dimensional_ball() {
        let set = Arc::new(enumerate_lattice_points(6, Dim::Three).unwrap());
        let cv = make_bourgain(set, BourgainSigns::Seed(2)).unwrap();
        let x = [0.1, 0.5, 0.8];
        let exact = PairTable::new(&cv, 0.15).unwrap().mass(&x);
        let q = mass_quadrature(&cv, &x, 0.15, 1e-10).unwrap();
        assert!((q - exact).abs() < 1e-9, "{q} vs {exact}");
    }
}
