//! Bessel kernels of the ball indicator and the quadrature used to check their
//! integral identities.
//!
//! `g_d(x) = J_{d/2}(2πx)/(2πx)^{d/2}` is the Fourier transform of the unit
//! ball indicator divided by `(2π)^{d/2}`, and `h_d = g_d²`.

mod bessel;
mod quad;

use std::f64::consts::{PI, TAU};

use serde::Serialize;

pub use bessel::{bessel_j, Order, ASYMPTOTIC_LIMIT, HALF_INTEGER_SERIES_LIMIT, SERIES_LIMIT};
pub use quad::{integrate, Quadrature, QuadratureSpec, Rule, Upper};

use crate::error::{Error, Result};
use crate::lattice::Dim;

/// Below this value of `2πx` the `d = 3` kernels use their Taylor series.
pub const G3_SERIES_LIMIT: f64 = 2.0;

/// `g_d(0) = vol(B_d)/(2π)^{d/2}`.
pub fn g_at_zero(d: Dim) -> f64 {
    match d {
        Dim::Two => 0.5,
        Dim::Three => (2.0 / PI).sqrt() / 3.0,
    }
}

/// `g_d(x) = J_{d/2}(2πx)/(2πx)^{d/2}`, `x ≥ 0`.
pub fn g(d: Dim, x: f64) -> f64 {
    debug_assert!(x >= 0.0, "kernels take norms, got {x}");
    let y = TAU * x;
    match d {
        Dim::Two => bessel::j1_over_x(y),
        Dim::Three => {
            if y < G3_SERIES_LIMIT {
                (2.0 / PI).sqrt() * bessel::sinc_minus_cos_over_y2(y)
            } else {
                bessel::bessel_j(Order::ThreeHalves, y).expect("y >= 0") / y.powf(1.5)
            }
        }
    }
}

/// `h_2(x) = J_1(2πx)²/(2πx)²`, `h_3(x) = (2/π)(2πx)^{-4}(sin y/y − cos y)²`.
pub fn h(d: Dim, x: f64) -> f64 {
    debug_assert!(x >= 0.0, "kernels take norms, got {x}");
    let y = TAU * x;
    match d {
        Dim::Two => {
            if y < SERIES_LIMIT {
                let v = bessel::j1_over_x(y);
                v * v
            } else {
                let j = bessel::jn(1, y);
                j * j / (y * y)
            }
        }
        Dim::Three => {
            if y < G3_SERIES_LIMIT {
                let q = bessel::sinc_minus_cos_over_y2(y);
                2.0 / PI * q * q
            } else {
                let s = y.sin() / y - y.cos();
                2.0 / PI * s * s / y.powi(4)
            }
        }
    }
}

/// `g_2'(x) = −J_2(2πx)/x` for `x > 0`.
pub fn g2_derivative(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("g2' needs x > 0, got {x}")));
    }
    Ok(-bessel::jn(2, TAU * x) / x)
}

/// Bound on `∫_B^∞ h_2`, from `y J_1(y)² ≤ 0.64` for `y ≥ 10`.
pub fn h2_tail_bound(b: f64) -> f64 {
    if TAU * b < 10.0 {
        return f64::INFINITY;
    }
    0.64 / (TAU.powi(3) * 2.0 * b * b)
}

/// Bound on `∫_B^∞ s·h_3(s) ds`, from `(sin y/y − cos y)² ≤ (1 + 1/y)²`.
pub fn s_h3_tail_bound(b: f64) -> f64 {
    let y = TAU * b;
    if y < 10.0 {
        return f64::INFINITY;
    }
    let amp = (1.0 + 1.0 / y).powi(2);
    2.0 / PI * amp / (TAU.powi(4) * 2.0 * b * b)
}

fn kernel_spec(abs_tol: f64) -> QuadratureSpec {
    QuadratureSpec {
        rule: Rule::Gk21,
        abs_tol,
        rel_tol: 1e-14,
        max_subdivisions: 200_000,
        initial_panels: 1,
    }
}

/// `∫_0^∞ h_2`, integrated panel by panel over unit-length pieces so the
/// oscillation never aliases the rule.
pub fn integral_h2(abs_tol: f64) -> Result<Quadrature> {
    oscillatory_half_line(&|s| h(Dim::Two, s), &h2_tail_bound, abs_tol)
}

/// `∫_0^∞ s·h_3(s) ds`.
pub fn integral_s_h3(abs_tol: f64) -> Result<Quadrature> {
    oscillatory_half_line(&|s| s * h(Dim::Three, s), &s_h3_tail_bound, abs_tol)
}

fn oscillatory_half_line(f: &dyn Fn(f64) -> f64, tail: &dyn Fn(f64) -> f64, abs_tol: f64) -> Result<Quadrature> {
    let mut cutoff = 1.0_f64;
    while !(tail(cutoff) <= 0.5 * abs_tol) {
        cutoff *= 2.0;
        if cutoff > 1e12 {
            return Err(Error::Quadrature("tail bound never fell below tolerance".into()));
        }
    }
    let spec = QuadratureSpec {
        initial_panels: (2.0 * cutoff) as usize,
        ..kernel_spec(0.5 * abs_tol)
    };
    let mut q = integrate(f, 0.0, Upper::Finite(cutoff), &spec)?;
    q.err_est += tail(cutoff);
    q.cutoff = Some(cutoff);
    Ok(q)
}

/// One line of the identity suite.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub observed: f64,
    pub expected: f64,
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityCheck {
    fn new(name: &'static str, observed: f64, expected: f64, error: f64, tolerance: f64) -> Self {
        IdentityCheck {
            name,
            observed,
            expected,
            error,
            tolerance,
            passed: error <= tolerance,
        }
    }
}

/// Log-spaced grid on `[lo, hi]` with `count` points.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Worst `|h_d − g_d²|` relative to `max(h_d, 1e-300)` over the grid.
pub fn max_square_identity_error(d: Dim, grid: &[f64]) -> f64 {
    grid.iter()
        .map(|&x| {
            let gx = g(d, x);
            let hx = h(d, x);
            (hx - gx * gx).abs() / hx.max(gx * gx).max(1e-300)
        })
        .fold(0.0, f64::max)
}

/// Worst disagreement between `g_2'` and a central difference of `g_2` with
/// step `1e-6`, measured relative to the kernel's envelope `(1+x)^{-3/2}`
/// wherever `|g_2'|` is smaller than it (near zeros of `J_2`).
pub fn max_derivative_error(grid: &[f64]) -> f64 {
    let step = 1e-6;
    grid.iter()
        .map(|&x| {
            let exact = g2_derivative(x).expect("grid is positive");
            let fd = (g(Dim::Two, x + step) - g(Dim::Two, x - step)) / (2.0 * step);
            let scale = exact.abs().max((1.0 + x).powf(-1.5));
            (fd - exact).abs() / scale
        })
        .fold(0.0, f64::max)
}

/// The kernel identity suite behind `specfun selftest` and the acceptance run.
pub fn identity_suite() -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    let q2 = integral_h2(1e-9)?;
    let target2 = 2.0 / (3.0 * PI * PI);
    out.push(IdentityCheck::new("integral of h2", q2.value, target2, (q2.value - target2).abs(), 1e-8));
    let q3 = integral_s_h3(1e-9)?;
    let target3 = TAU.powi(-3);
    out.push(IdentityCheck::new("integral of s*h3", q3.value, target3, (q3.value - target3).abs(), 1e-8));

    let grid = log_grid(1e-8, 1e4, 2001);
    for (name, d) in [("h2 = g2^2", Dim::Two), ("h3 = g3^2", Dim::Three)] {
        let err = max_square_identity_error(d, &grid);
        out.push(IdentityCheck::new(name, err, 0.0, err, 1e-12));
    }
    let fd_grid = log_grid(0.01, 100.0, 1001);
    let err = max_derivative_error(&fd_grid);
    out.push(IdentityCheck::new("g2' vs finite difference", err, 0.0, err, 1e-6));

    let g0 = g(Dim::Two, 0.0);
    out.push(IdentityCheck::new("g2(0) = 1/2", g0, 0.5, (g0 - 0.5).abs(), 1e-15));
    let g30 = g(Dim::Three, 0.0);
    let want = 4.0 * PI / 3.0 / TAU.powf(1.5);
    out.push(IdentityCheck::new("g3(0) = vol(B3)/(2pi)^(3/2)", g30, want, (g30 - want).abs(), 1e-15));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn values_at_zero() {
        assert_eq!(g(Dim::Two, 0.0), 0.5);
        assert_eq!(h(Dim::Two, 0.0), 0.25);
        assert!((g(Dim::Three, 0.0) - g_at_zero(Dim::Three)).abs() < 1e-16);
        assert!((g_at_zero(Dim::Three) - 4.0 * PI / 3.0 / TAU.powf(1.5)).abs() < 1e-16);
    }

    #[test]
    fn g2_decays_like_x_to_minus_three_halves() {
        let worst = log_grid(1.0, 1e4, 500)
            .into_iter()
            .map(|x| g(Dim::Two, x).abs() * x.powf(1.5))
            .fold(0.0, f64::max);
        assert!(worst < 0.1, "{worst}");
    }

    #[test]
    fn derivative_limits_and_bounds() {
        assert!(g2_derivative(0.0).is_err());
        assert!(g2_derivative(1e-8).unwrap().abs() < 1e-6);
        let worst = log_grid(1e-3, 999.0, 2000)
            .into_iter()
            .map(|x| g2_derivative(x).unwrap().abs() * (1.0 + x).powf(1.5))
            .fold(0.0, f64::max);
        assert!(worst < 10.0, "{worst}");
        let x = 1.0;
        let fd = (g(Dim::Two, x + 1e-6) - g(Dim::Two, x - 1e-6)) / 2e-6;
        let exact = g2_derivative(x).unwrap();
        assert!((fd - exact).abs() <= 1e-6 * exact.abs());
    }

    #[test]
    fn tail_envelopes_hold_on_a_dense_grid() {
        // y J_1(y)^2 <= 0.64 for y >= 10 underpins the h2 tail bound.
        for i in 0..200_000 {
            let y = 10.0 + i as f64 * 0.05;
            let j = bessel_j(Order::One, y).unwrap();
            assert!(y * j * j <= 0.64, "y = {y}");
        }
    }

    #[test]
    fn kernel_integrals() {
        let q2 = integral_h2(1e-9).unwrap();
        assert!((q2.value - 2.0 / (3.0 * PI * PI)).abs() < 1e-8, "{q2:?}");
        let q3 = integral_s_h3(1e-9).unwrap();
        assert!((q3.value - TAU.powi(-3)).abs() < 1e-8, "{q3:?}");
    }

    #[test]
    fn identity_suite_passes() {
        for check in identity_suite().unwrap() {
            assert!(check.passed, "{check:?}");
        }
    }

    proptest! {
        #[test]
        fn h_is_g_squared(x in 0.0f64..100.0) {
            for d in [Dim::Two, Dim::Three] {
                let gx = g(d, x);
                let hx = h(d, x);
                prop_assert!((hx - gx * gx).abs() <= 1e-12 * hx.max(gx * gx) + 1e-300);
                prop_assert!(hx >= 0.0);
            }
        }
    }
}
