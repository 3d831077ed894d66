//! Normal approximation diagnostics for standardized samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::gaussian_moment;
use super::montecarlo::JACKKNIFE_BLOCKS;

const MIN_SAMPLES: usize = 100;

/// `Φ(z)`.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub k: usize,
    pub value: f64,
    pub stderr: f64,
    pub target: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CltDiagnostics {
    pub ks_statistic: f64,
    pub sample_count: usize,
    /// `E[Z^k]` for `k = 3..=6` against `E[N(0,1)^k]`.
    pub moments: Vec<MomentRow>,
}

/// Kolmogorov–Smirnov distance to `N(0,1)` and raw moments 3 to 6.
pub fn clt_diagnostics(samples: &[f64]) -> Result<CltDiagnostics> {
    let m = samples.len();
    if m < MIN_SAMPLES {
        return Err(Error::invalid(format!("need at least {MIN_SAMPLES} samples, got {m}")));
    }
    if samples.iter().any(|z| !z.is_finite()) {
        return Err(Error::invalid("samples must be finite"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mf = m as f64;
    let ks_statistic = sorted
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let p = normal_cdf(z);
            ((i + 1) as f64 / mf - p).max(p - i as f64 / mf)
        })
        .fold(0.0, f64::max);
    let moments = (3..=6)
        .map(|k| {
            let block_sums: Vec<f64> = (0..JACKKNIFE_BLOCKS)
                .map(|b| {
                    samples[b * m / JACKKNIFE_BLOCKS..(b + 1) * m / JACKKNIFE_BLOCKS]
                        .iter()
                        .map(|z| z.powi(k as i32))
                        .sum()
                })
                .collect();
            let total: f64 = block_sums.iter().sum();
            let loo: Vec<f64> = (0..JACKKNIFE_BLOCKS)
                .map(|b| {
                    let size = (b + 1) * m / JACKKNIFE_BLOCKS - b * m / JACKKNIFE_BLOCKS;
                    (total - block_sums[b]) / (m - size) as f64
                })
                .collect();
            let bf = JACKKNIFE_BLOCKS as f64;
            let mean = loo.iter().sum::<f64>() / bf;
            let ss: f64 = loo.iter().map(|v| (v - mean).powi(2)).sum();
            MomentRow {
                k,
                value: total / mf,
                stderr: ((bf - 1.0) / bf * ss).sqrt(),
                target: gaussian_moment(k),
            }
        })
        .collect();
    Ok(CltDiagnostics { ks_statistic, sample_count: m, moments })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{CounterRng, Domain};

    #[test]
    fn constant_sample_has_ks_one_half() {
        let d = clt_diagnostics(&[0.0; 500]).unwrap();
        assert!((d.ks_statistic - 0.5).abs() < 1e-15);
    }

    #[test]
    fn normal_sample_is_close() {
        let z: Vec<f64> = (0..100_000).map(|i| CounterRng::new(2, Domain::MonteCarlo, i).normal()).collect();
        let d = clt_diagnostics(&z).unwrap();
        assert!(d.ks_statistic < 1.63 / (100_000f64).sqrt());
        for row in &d.moments {
            assert!((row.value - row.target).abs() < 5.0 * row.stderr, "{row:?}");
        }
    }

    #[test]
    fn cdf_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(1.959963984540054) - 0.975).abs() < 1e-15);
        assert!(normal_cdf(-40.0) >= 0.0);
    }

    #[test]
    fn rejects_small_samples() {
        assert!(clt_diagnostics(&[0.0; 99]).is_err());
    }
}
