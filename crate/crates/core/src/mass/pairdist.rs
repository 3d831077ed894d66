//! Distribution of distances between projected lattice points.

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::eigenfunction::CoefficientVector;
use crate::error::{Error, Result};
use crate::lattice::{norm2, sub, Dim, LatticePointSet};

/// Which pairs are counted and how they are weighted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairVariant {
    /// `F(s) = Σ |c_λ|²|c_λ'|²` over ordered pairs at chord distance in `(0, s]`.
    Weighted,
    /// `F_{λ0}(s) = #{λ : ‖λ̂ − λ̂0‖ ≤ s}/N`, `λ0` included.
    FromPoint { index: usize },
    /// `F_3(s) = #{(λ, λ') : λ ≠ λ', ‖λ̂ − λ̂'‖ ≤ s}/N²` on the sphere.
    Sphere,
}

/// Sorted chord distances with cumulative weights.
#[derive(Clone, Debug)]
pub struct PairDistances {
    n: f64,
    // Squared chords times n, i.e. `‖λ − λ'‖²`, which are integers.
    keys: Vec<i128>,
    cumulative: Vec<f64>,
}

impl PairDistances {
    pub fn new(cv: &CoefficientVector, variant: PairVariant) -> Result<Self> {
        let set = cv.set();
        let len = set.len();
        let w = cv.weights();
        let planar = matches!(variant, PairVariant::Weighted | PairVariant::FromPoint { .. });
        if planar != (set.dim() == Dim::Two) {
            return Err(Error::invalid(format!("variant {variant:?} does not apply in d = {}", set.dim())));
        }
        let mut entries: FxHashMap<i128, f64> = FxHashMap::default();
        let mut push = |i: usize, j: usize, weight: f64| {
            if weight != 0.0 {
                *entries.entry(chord_key(set, i, j)).or_default() += weight;
            }
        };
        match variant {
            PairVariant::Weighted => {
                for i in 0..len {
                    for j in (0..len).filter(|&j| j != i) {
                        push(i, j, w[i] * w[j]);
                    }
                }
            }
            PairVariant::FromPoint { index } => {
                if index >= len {
                    return Err(Error::invalid(format!("point index {index} out of range")));
                }
                for j in 0..len {
                    push(index, j, 1.0 / len as f64);
                }
            }
            PairVariant::Sphere => {
                let u = 1.0 / (len * len) as f64;
                for i in 0..len {
                    for j in (0..len).filter(|&j| j != i) {
                        push(i, j, u);
                    }
                }
            }
        }
        let mut sorted: Vec<(i128, f64)> = entries.into_iter().collect();
        sorted.sort_by_key(|e| e.0);
        let mut acc = 0.0;
        let (keys, cumulative) = sorted
            .into_iter()
            .map(|(k, v)| {
                acc += v;
                (k, acc)
            })
            .unzip();
        Ok(PairDistances { n: set.n() as f64, keys, cumulative })
    }

    /// Distribution function at chord length `s`.
    pub fn cdf(&self, s: f64) -> f64 {
        let bound = s * s * self.n;
        let idx = self.keys.partition_point(|&k| (k as f64) <= bound);
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1]
        }
    }
}

fn chord_key(set: &LatticePointSet, i: usize, j: usize) -> i128 {
    norm2(&sub(set.point(i), set.point(j)))
}

/// Evaluates the chosen distribution function on a grid of chord lengths.
pub fn pair_distance_distribution(cv: &CoefficientVector, variant: PairVariant, grid: &[f64]) -> Result<Vec<f64>> {
    if grid.iter().any(|s| !(*s >= 0.0)) {
        return Err(Error::invalid("grid values must be non-negative"));
    }
    let table = PairDistances::new(cv, variant)?;
    Ok(grid.iter().map(|&s| table.cdf(s)).collect())
}

/// Ordered pairs `i ≠ j` with `‖x_i − x_j‖ ≤ 1/T`.
pub fn close_pair_count(points: &[[f64; 3]], t: f64) -> Result<u64> {
    if !(t > 1.0) {
        return Err(Error::invalid(format!("need T > 1, got {t}")));
    }
    let limit = 1.0 / (t * t);
    let cell = |p: &[f64; 3]| p.map(|c| (c * t).floor() as i64);
    let mut grid: FxHashMap<[i64; 3], Vec<usize>> = FxHashMap::default();
    for (i, p) in points.iter().enumerate() {
        grid.entry(cell(p)).or_default().push(i);
    }
    let mut count = 0u64;
    for (i, p) in points.iter().enumerate() {
        let c = cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(bucket) = grid.get(&[c[0] + dx, c[1] + dy, c[2] + dz]) {
                        count += bucket.iter().filter(|&&j| j != i && dist2(p, &points[j]) <= limit).count() as u64;
                    }
                }
            }
        }
    }
    Ok(count)
}

fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).powi(2)).sum()
}
