//! Deterministic Monte Carlo over ball centres.
//!
//! Sample `i` draws its centre from its own counter-based stream, values are
//! collected in index order and reduced sequentially, so results do not
//! depend on the number of worker threads.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigenfunction::e;
use crate::error::{Error, Result};
use crate::lattice::{Dim, Vector};
use crate::rng::{CounterRng, Domain};

use super::{check_radius, expectation_exact, PairTable};

pub const JACKKNIFE_BLOCKS: usize = 20;
const DEFAULT_BATCH: usize = 1 << 16;
// Powers of e(x_j) are re-anchored with a direct evaluation this often.
const ANCHOR: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McSpec {
    #[serde(rename = "M")]
    pub samples: u64,
    pub seed: u64,
    /// Samples evaluated per parallel batch; 0 picks a default.
    pub batch: usize,
}

/// Centres uniform in `B_{x0}(ρ)` instead of the whole torus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Restriction {
    pub x0: Vec<f64>,
    pub rho: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardizedMoment {
    pub k: usize,
    pub value: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct McMoments {
    pub samples: u64,
    pub mean: f64,
    pub mean_stderr: f64,
    pub variance: f64,
    pub variance_stderr: f64,
    /// `E[(X − X̄)^k]/σ̂^k` for `k = 3..=moments_upto`.
    pub standardized: Vec<StandardizedMoment>,
    /// `X` at every sampled centre, in index order.
    pub values: Vec<f64>,
}

/// Centre of sample `i`.
pub fn sample_centre(seed: u64, dim: Dim, restriction: Option<&Restriction>, i: u64) -> [f64; 3] {
    let mut rng = CounterRng::new(seed, Domain::MonteCarlo, i);
    let d = dim.get();
    let mut x = [0.0; 3];
    match restriction {
        None => {
            for c in x.iter_mut().take(d) {
                *c = rng.uniform();
            }
        }
        Some(res) => loop {
            let mut u = [0.0; 3];
            for c in u.iter_mut().take(d) {
                *c = rng.uniform_in(-1.0, 1.0);
            }
            if u.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
                for j in 0..d {
                    x[j] = res.x0[j] + res.rho * u[j];
                }
                break;
            }
        },
    }
    x
}

/// Phases `e(x_j·v)` needed along one axis: the distinct `|δ_j|`.
struct Axis {
    values: Vec<u64>,
    // Fill the table by repeated multiplication up to the largest value
    // instead of one direct evaluation per distinct value.
    dense: bool,
}

impl Axis {
    fn new(mut values: Vec<u64>) -> Self {
        values.sort_unstable();
        values.dedup();
        let max = values.last().copied().unwrap_or(0);
        let dense = (max as usize) < 4 * values.len();
        Axis { values, dense }
    }

    fn fill(&self, x: f64, full: &mut Vec<Complex64>, out: &mut [Complex64]) {
        if self.dense {
            let max = *self.values.last().expect("axis is non-empty") as usize;
            full.resize(max + 1, Complex64::new(1.0, 0.0));
            let base = e(x);
            for k in 1..=max {
                full[k] = if k % ANCHOR == 0 { e((k as f64 * x).fract()) } else { full[k - 1] * base };
            }
            for (o, &v) in out.iter_mut().zip(&self.values) {
                *o = full[v as usize];
            }
        } else {
            for (o, &v) in out.iter_mut().zip(&self.values) {
                *o = e((v as f64 * x).fract());
            }
        }
    }
}

/// Positive half of a pair table, with each difference coordinate replaced by
/// an index into its axis table and a sign.
struct Sampler<'a> {
    index: Vec<[u32; 3]>,
    negative: Vec<[bool; 3]>,
    weights: &'a [Complex64],
    axes: Vec<Axis>,
    twice_scale: f64,
}

struct Scratch {
    full: Vec<Complex64>,
    phases: Vec<Vec<Complex64>>,
}

impl<'a> Sampler<'a> {
    fn new(table: &'a PairTable) -> Self {
        let start = table.positive_start();
        let deltas: &[Vector] = &table.deltas()[start..];
        let dim = table.dim().get();
        let axes: Vec<Axis> = (0..dim)
            .map(|j| Axis::new(deltas.iter().map(|d| d[j].unsigned_abs()).collect()))
            .collect();
        let mut index = Vec::with_capacity(deltas.len());
        let mut negative = Vec::with_capacity(deltas.len());
        for d in deltas {
            let mut idx = [0u32; 3];
            let mut neg = [false; 3];
            for j in 0..dim {
                idx[j] = axes[j].values.binary_search(&d[j].unsigned_abs()).expect("value is present") as u32;
                neg[j] = d[j] < 0;
            }
            index.push(idx);
            negative.push(neg);
        }
        Sampler {
            index,
            negative,
            weights: &table.weights()[start..],
            axes,
            twice_scale: 2.0 * table.scale(),
        }
    }

    fn scratch(&self) -> Scratch {
        Scratch {
            full: Vec::new(),
            phases: self.axes.iter().map(|a| vec![Complex64::new(0.0, 0.0); a.values.len()]).collect(),
        }
    }

    #[inline]
    fn phase(table: &[Complex64], i: u32, negative: bool) -> Complex64 {
        let z = table[i as usize];
        if negative {
            z.conj()
        } else {
            z
        }
    }

    /// `X(x) − vol(B_r)`.
    fn oscillation(&self, x: &[f64; 3], scratch: &mut Scratch) -> f64 {
        for (j, axis) in self.axes.iter().enumerate() {
            axis.fill(x[j], &mut scratch.full, &mut scratch.phases[j]);
        }
        let p = &scratch.phases;
        let mut s = 0.0;
        let terms = self.index.iter().zip(&self.negative).zip(self.weights);
        if self.axes.len() == 2 {
            for ((i, neg), w) in terms {
                let z = Self::phase(&p[0], i[0], neg[0]) * Self::phase(&p[1], i[1], neg[1]);
                s += w.re * z.re - w.im * z.im;
            }
        } else {
            for ((i, neg), w) in terms {
                let z = Self::phase(&p[0], i[0], neg[0])
                    * Self::phase(&p[1], i[1], neg[1])
                    * Self::phase(&p[2], i[2], neg[2]);
                s += w.re * z.re - w.im * z.im;
            }
        }
        self.twice_scale * s
    }
}

/// Evaluates `X` at `spec.samples` centres.
pub fn sample_masses(table: &PairTable, spec: &McSpec, restriction: Option<&Restriction>) -> Vec<f64> {
    let sampler = Sampler::new(table);
    let dim = table.dim();
    let vol = expectation_exact(table.r(), dim);
    let batch = if spec.batch == 0 { DEFAULT_BATCH } else { spec.batch } as u64;
    let mut values = Vec::with_capacity(spec.samples as usize);
    let mut start = 0;
    while start < spec.samples {
        let end = (start + batch).min(spec.samples);
        let chunk: Vec<f64> = (start..end)
            .into_par_iter()
            .map_init(
                || sampler.scratch(),
                |scratch, i| vol + sampler.oscillation(&sample_centre(spec.seed, dim, restriction, i), scratch),
            )
            .collect();
        values.extend(chunk);
        start = end;
    }
    values
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Central moments `μ_2..μ_K` from power sums `S_0..S_K` of nearly centred
/// data.
fn central_moments(sums: &[f64]) -> Vec<f64> {
    let n = sums[0];
    let m = sums[1] / n;
    (0..sums.len())
        .map(|k| (0..=k).map(|j| binomial(k, j) * sums[j] / n * (-m).powi((k - j) as i32)).sum())
        .collect()
}

fn jackknife(blocks: &[Vec<f64>], stat: impl Fn(&[f64]) -> f64) -> f64 {
    let b = blocks.len();
    if b < 2 {
        return f64::NAN;
    }
    let total: Vec<f64> = (0..blocks[0].len()).map(|p| blocks.iter().map(|s| s[p]).sum()).collect();
    let loo: Vec<f64> = blocks
        .iter()
        .map(|s| stat(&total.iter().zip(s).map(|(t, v)| t - v).collect::<Vec<_>>()))
        .collect();
    let mean = loo.iter().sum::<f64>() / b as f64;
    let ss: f64 = loo.iter().map(|v| (v - mean).powi(2)).sum();
    ((b - 1) as f64 / b as f64 * ss).sqrt()
}

/// Moments of a sample with block-jackknife standard errors.
pub fn summarize(values: Vec<f64>, moments_upto: usize) -> Result<McMoments> {
    let m = values.len();
    if m < 2 * JACKKNIFE_BLOCKS {
        return Err(Error::invalid(format!("need at least {} samples", 2 * JACKKNIFE_BLOCKS)));
    }
    let kmax = moments_upto.max(2);
    let mean = values.iter().sum::<f64>() / m as f64;
    let blocks: Vec<Vec<f64>> = (0..JACKKNIFE_BLOCKS)
        .map(|b| {
            let mut sums = vec![0.0; kmax + 1];
            for v in &values[b * m / JACKKNIFE_BLOCKS..(b + 1) * m / JACKKNIFE_BLOCKS] {
                let y = v - mean;
                let mut p = 1.0;
                for s in sums.iter_mut() {
                    *s += p;
                    p *= y;
                }
            }
            sums
        })
        .collect();
    let total: Vec<f64> = (0..=kmax).map(|p| blocks.iter().map(|s| s[p]).sum()).collect();
    let mu = central_moments(&total);
    let variance = mu[2];
    let standardized_of = |k: usize| {
        move |sums: &[f64]| {
            let mu = central_moments(sums);
            mu[k] / mu[2].powf(k as f64 / 2.0)
        }
    };
    let standardized = (3..=moments_upto)
        .map(|k| StandardizedMoment {
            k,
            value: standardized_of(k)(&total),
            stderr: jackknife(&blocks, standardized_of(k)),
        })
        .collect();
    Ok(McMoments {
        samples: m as u64,
        mean,
        mean_stderr: (variance / (m - 1) as f64).sqrt(),
        variance,
        variance_stderr: jackknife(&blocks, |s| central_moments(s)[2]),
        standardized,
        values,
    })
}

/// Monte Carlo estimates of the mean, variance and standardized moments of
/// `X` over uniformly random centres (or centres uniform in a ball).
pub fn monte_carlo_moments(
    table: &PairTable,
    spec: &McSpec,
    restriction: Option<&Restriction>,
    moments_upto: usize,
) -> Result<McMoments> {
    check_radius(table.r())?;
    if let Some(res) = restriction {
        if res.x0.len() != table.dim().get() {
            return Err(Error::invalid("x0 dimension does not match"));
        }
        if !(res.rho > 0.0 && res.rho < 0.5) {
            return Err(Error::invalid(format!("rho must lie in (0, 1/2), got {}", res.rho)));
        }
    }
    summarize(sample_masses(table, spec, restriction), moments_upto)
}
