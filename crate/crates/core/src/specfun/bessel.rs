//! Bessel functions of the first kind for the few orders the kernels need.
//!
//! Integer orders use three branches: the power series below
//! [`SERIES_LIMIT`], Miller's backward recurrence up to [`ASYMPTOTIC_LIMIT`],
//! and the Hankel asymptotic expansion beyond. Each branch is accurate to a few
//! ulps of `max(|J|, x^{-1/2})` in its range, well inside `1e-12` absolute.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const SERIES_LIMIT: f64 = 8.0;
pub const ASYMPTOTIC_LIMIT: f64 = 25.0;
/// Half-integer orders switch from their series to the trigonometric closed
/// forms here.
pub const HALF_INTEGER_SERIES_LIMIT: f64 = 1.0;

/// Orders supported by [`bessel_j`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Zero,
    One,
    Two,
    Half,
    ThreeHalves,
}

impl Order {
    pub fn from_f64(nu: f64) -> Result<Self> {
        [Order::Zero, Order::One, Order::Two, Order::Half, Order::ThreeHalves]
            .into_iter()
            .find(|o| o.value() == nu)
            .ok_or_else(|| Error::invalid(format!("unsupported Bessel order {nu}")))
    }

    pub fn value(self) -> f64 {
        match self {
            Order::Zero => 0.0,
            Order::One => 1.0,
            Order::Two => 2.0,
            Order::Half => 0.5,
            Order::ThreeHalves => 1.5,
        }
    }
}

/// `J_ν(x)` for `ν ∈ {0, 1, 2, 1/2, 3/2}` and `x ≥ 0`.
pub fn bessel_j(order: Order, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("Bessel argument must be finite and >= 0, got {x}")));
    }
    Ok(match order {
        Order::Zero => jn(0, x),
        Order::One => jn(1, x),
        Order::Two => jn(2, x),
        Order::Half => j_half(x),
        Order::ThreeHalves => j_three_halves(x),
    })
}

/// `J_n(x)` for small non-negative integer `n`; `x ≥ 0` is assumed.
pub(crate) fn jn(n: u32, x: f64) -> f64 {
    if x < SERIES_LIMIT {
        series(n as f64, gamma_integer(n + 1), x)
    } else if x < ASYMPTOTIC_LIMIT {
        miller(n, x)
    } else {
        hankel(n as f64, x)
    }
}

/// `J_1(x)/x` without the removable singularity at 0.
pub(crate) fn j1_over_x(x: f64) -> f64 {
    if x < SERIES_LIMIT {
        // Σ (-1)^k (x/2)^{2k} / (2 k! (k+1)!)
        let q = -0.25 * x * x;
        let mut term = 0.5;
        let mut sum = term;
        for k in 1..60 {
            term *= q / (k as f64 * (k + 1) as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        jn(1, x) / x
    }
}

fn gamma_integer(m: u32) -> f64 {
    (1..m).map(|k| k as f64).product()
}

/// Ascending series `Σ (-1)^k (x/2)^{2k+ν} / (k! Γ(k+ν+1))` with `Γ(ν+1)`
/// supplied by the caller.
fn series(nu: f64, gamma_nu_plus_one: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = half.powf(nu) / gamma_nu_plus_one;
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Miller's backward recurrence normalised by `J_0 + 2 Σ J_{2k} = 1`.
fn miller(n: u32, x: f64) -> f64 {
    let start = 2 * ((x as u32 + 20 + (40.0 * x).sqrt() as u32) / 2);
    let mut next = 0.0_f64;
    let mut cur = 1e-300_f64;
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        // `cur` now holds the unnormalised J_{k-1}.
        let m = k - 1;
        if m == n {
            wanted = cur;
        }
        if m % 2 == 0 && m > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            next *= 1e-250;
            cur *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    norm += cur;
    wanted / norm
}

/// Hankel asymptotic expansion `√(2/(πx)) (P cos χ − Q sin χ)`, summed until
/// the terms stop decreasing or fall below `1e-17`.
fn hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut last = f64::INFINITY;
    let eight_x = 8.0 * x;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * eight_x);
        if term.abs() > last || term.abs() < 1e-17 {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    let phase = (0.5 * nu + 0.25) * PI;
    let (s, c) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = c * cp + s * sp;
    let sin_chi = s * cp - c * sp;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

fn j_half(x: f64) -> f64 {
    if x < HALF_INTEGER_SERIES_LIMIT {
        series(0.5, PI.sqrt() / 2.0, x)
    } else {
        (2.0 / (PI * x)).sqrt() * x.sin()
    }
}

fn j_three_halves(x: f64) -> f64 {
    if x < HALF_INTEGER_SERIES_LIMIT {
        series(1.5, 3.0 * PI.sqrt() / 4.0, x)
    } else {
        (2.0 / (PI * x)).sqrt() * (x.sin() / x - x.cos())
    }
}

/// `(sin y / y − cos y) / y²`, the common factor of the `d = 3` kernels,
/// evaluated by its Taylor series `Σ_{k≥1} (-1)^{k+1} 2k y^{2k−2}/(2k+1)!`
/// below `y = 2`.
pub(crate) fn sinc_minus_cos_over_y2(y: f64) -> f64 {
    if y < 2.0 {
        let y2 = y * y;
        let mut pow = 1.0;
        let mut fact = 6.0;
        let mut sum = 0.0;
        for k in 1..30 {
            let kf = k as f64;
            let term = 2.0 * kf * pow / fact;
            if k % 2 == 1 {
                sum += term;
            } else {
                sum -= term;
            }
            if term < 1e-18 {
                break;
            }
            pow *= y2;
            fact *= (2.0 * kf + 2.0) * (2.0 * kf + 3.0);
        }
        sum
    } else {
        (y.sin() / y - y.cos()) / (y * y)
    }
}
