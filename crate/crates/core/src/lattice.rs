//! Lattice points on circles and spheres, their angular statistics, and the
//! discrepancy-based equidistribution checks.
//!
//! Points are stored as `[i64; 3]` with a zero third coordinate when `d = 2`,
//! so sums and differences can be hashed and compared exactly in either
//! dimension. All membership tests use integer arithmetic.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{CounterRng, Domain};

/// Integer lattice vector; the third coordinate is zero in dimension 2.
pub type Vector = [i64; 3];

/// Default upper bound on `N` for exact spherical-cap discrepancy.
pub const EXACT_CAP_LIMIT: usize = 200;

/// Ambient dimension of the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn get(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }
}

impl TryFrom<u8> for Dim {
    type Error = String;

    fn try_from(d: u8) -> std::result::Result<Self, String> {
        match d {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            other => Err(format!("dimension must be 2 or 3, got {other}")),
        }
    }
}

impl From<Dim> for u8 {
    fn from(d: Dim) -> u8 {
        d.get() as u8
    }
}

impl std::fmt::Display for Dim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.get())
    }
}

pub fn add(a: &Vector, b: &Vector) -> Vector {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: &Vector, b: &Vector) -> Vector {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn neg(a: &Vector) -> Vector {
    [-a[0], -a[1], -a[2]]
}

/// Exact squared Euclidean norm.
pub fn norm2(a: &Vector) -> i128 {
    a.iter().map(|&c| c as i128 * c as i128).sum()
}

pub fn norm(a: &Vector) -> f64 {
    (norm2(a) as f64).sqrt()
}

/// The set `E_n` of integer vectors of squared norm `n`, in canonical order
/// (ascending angle from 0 for `d = 2`, lexicographic for `d = 3`).
#[derive(Clone, Debug)]
pub struct LatticePointSet {
    n: u64,
    dim: Dim,
    points: Vec<Vector>,
    angles: Vec<f64>,
    index: FxHashMap<Vector, usize>,
    antipode: Vec<usize>,
}

impl LatticePointSet {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Cardinality `N`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Vector {
        &self.points[i]
    }

    /// Angles in `[0, 2π)`, strictly increasing; empty for `d = 3`.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn index_of(&self, v: &Vector) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.index.contains_key(v)
    }

    /// Index of `-λ_i`.
    pub fn antipode(&self, i: usize) -> usize {
        self.antipode[i]
    }

    pub fn radius(&self) -> f64 {
        (self.n as f64).sqrt()
    }

    /// Projection `λ / √n` onto the unit sphere.
    pub fn unit(&self, i: usize) -> [f64; 3] {
        let r = self.radius();
        let p = &self.points[i];
        [p[0] as f64 / r, p[1] as f64 / r, p[2] as f64 / r]
    }

    pub fn units(&self) -> Vec<[f64; 3]> {
        (0..self.len()).map(|i| self.unit(i)).collect()
    }

    /// Index of the clockwise nearest neighbour `λ₊` (previous angle, wrapping).
    pub fn clockwise_successor(&self, i: usize) -> usize {
        let n = self.len();
        (i + n - 1) % n
    }

    /// Builds a set from explicit points, validating every invariant. Used for
    /// synthetic inputs in tests and for external point lists.
    pub fn from_points(n: u64, dim: Dim, mut points: Vec<Vector>) -> Result<Self> {
        for p in &points {
            if norm2(p) != n as i128 {
                return Err(Error::invariant(
                    "on-sphere",
                    format!("point {p:?} does not have squared norm {n}"),
                ));
            }
            if dim == Dim::Two && p[2] != 0 {
                return Err(Error::invalid(format!("point {p:?} is not planar")));
            }
        }
        match dim {
            Dim::Two => points.sort_by(angle_order),
            Dim::Three => points.sort(),
        }
        points.dedup();
        Self::assemble(n, dim, points)
    }

    fn assemble(n: u64, dim: Dim, points: Vec<Vector>) -> Result<Self> {
        let index: FxHashMap<Vector, usize> =
            points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let antipode = points
            .iter()
            .map(|p| {
                index.get(&neg(p)).copied().ok_or_else(|| {
                    Error::invariant("negation-closed", format!("-{p:?} missing from set"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let angles = match dim {
            Dim::Two => points.iter().map(angle_of).collect(),
            Dim::Three => Vec::new(),
        };
        Ok(LatticePointSet {
            n,
            dim,
            points,
            angles,
            index,
            antipode,
        })
    }
}

fn angle_of(p: &Vector) -> f64 {
    let a = (p[1] as f64).atan2(p[0] as f64);
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

/// Exact angular order on planar integer vectors, starting at angle 0.
fn angle_order(a: &Vector, b: &Vector) -> Ordering {
    let half = |p: &Vector| if p[1] > 0 || (p[1] == 0 && p[0] > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128;
        0.cmp(&cross)
    })
}

fn isqrt(v: i128) -> Option<i64> {
    if v < 0 {
        return None;
    }
    let r = (v as u128).isqrt() as i64;
    (r as i128 * r as i128 == v).then_some(r)
}

/// All integer solutions of `a₁² + … + a_d² = n`, canonically ordered. An empty
/// set means `n ∉ S_d`.
pub fn enumerate_lattice_points(n: u64, dim: Dim) -> Result<LatticePointSet> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let n_i = n as i128;
    let bound = (n as u128).isqrt() as i64;
    let mut points = Vec::new();
    match dim {
        Dim::Two => {
            for a in -bound..=bound {
                if let Some(b) = isqrt(n_i - a as i128 * a as i128) {
                    points.push([a, b, 0]);
                    if b != 0 {
                        points.push([a, -b, 0]);
                    }
                }
            }
            points.sort_by(angle_order);
        }
        Dim::Three => {
            for a in -bound..=bound {
                let rem_a = n_i - a as i128 * a as i128;
                let bound_b = (rem_a as u128).isqrt() as i64;
                for b in -bound_b..=bound_b {
                    if let Some(c) = isqrt(rem_a - b as i128 * b as i128) {
                        if c != 0 {
                            points.push([a, b, -c]);
                        }
                        points.push([a, b, c]);
                    }
                }
            }
        }
    }
    LatticePointSet::assemble(n, dim, points)
}

/// Whether `n` is a sum of `d` integer squares.
pub fn is_sum_of_squares(n: u64, dim: Dim) -> bool {
    if n == 0 {
        return true;
    }
    let n_i = n as i128;
    let bound = (n as u128).isqrt() as i64;
    match dim {
        Dim::Two => (0..=bound).any(|a| isqrt(n_i - a as i128 * a as i128).is_some()),
        Dim::Three => (0..=bound).any(|a| {
            let rem = n_i - a as i128 * a as i128;
            let bb = (rem as u128).isqrt() as i64;
            (0..=bb).any(|b| isqrt(rem - b as i128 * b as i128).is_some())
        }),
    }
}

/// Where a discrepancy supremum is realised.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Arc from `start` counter-clockwise to `end` (radians). `closed = false`
    /// marks the limiting open arc.
    Arc { start: f64, end: f64, closed: bool },
    Cap {
        centre: [f64; 3],
        radius: f64,
        closed: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyResult {
    pub value: f64,
    pub witness: Witness,
    /// True when `value` is the exact supremum; false for sampled lower bounds.
    pub exact: bool,
}

/// Exact angular discrepancy `Δ(n)` of a planar set.
pub fn angular_discrepancy(set: &LatticePointSet) -> Result<DiscrepancyResult> {
    if set.dim() != Dim::Two {
        return Err(Error::invalid("angular discrepancy requires d = 2"));
    }
    if set.is_empty() {
        return Err(Error::invalid("angular discrepancy of an empty set"));
    }
    Ok(angular_discrepancy_of_angles(set.angles()))
}

/// Exact discrepancy of an arbitrary angle list over all arcs of the circle.
///
/// The supremum is attained (or approached) by arcs whose endpoints are data
/// angles, closed for the excess side and open for the deficit side, so an
/// `O(N²)` scan over endpoint pairs is exact.
pub fn angular_discrepancy_of_angles(angles: &[f64]) -> DiscrepancyResult {
    let mut a: Vec<f64> = angles.iter().map(|t| t.rem_euclid(TAU)).collect();
    a.sort_by(f64::total_cmp);
    let n = a.len();
    let nf = n as f64;
    let mut best = (
        0.0,
        Witness::Arc {
            start: 0.0,
            end: 0.0,
            closed: true,
        },
    );
    let mut consider = |value: f64, start: f64, end: f64, closed: bool| {
        if value > best.0 {
            best = (value, Witness::Arc { start, end, closed });
        }
    };
    for i in 0..n {
        consider(1.0 / nf, a[i], a[i], true);
        consider(1.0 / nf, a[i], a[i] + TAU, false);
        for j in 0..n {
            if i == j {
                continue;
            }
            let k = ((j + n - i) % n) as f64;
            let len = (a[j] - a[i]).rem_euclid(TAU) / TAU;
            consider((k + 1.0) / nf - len, a[i], a[j], true);
            consider(len - (k - 1.0) / nf, a[i], a[j], false);
        }
    }
    DiscrepancyResult {
        value: best.0,
        witness: best.1,
        exact: true,
    }
}

/// Outcome of the angular equidistribution hypothesis check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisD {
    pub holds: bool,
    pub margin: f64,
    pub threshold: f64,
    pub discrepancy: f64,
}

/// `D(n, ε)`: `Δ(n) ≤ (log n)^(-½·log(π/2) + ε)`.
pub fn check_hypothesis_d(set: &LatticePointSet, eps: f64) -> Result<HypothesisD> {
    if set.n() <= 2 {
        return Err(Error::invalid("hypothesis D needs n >= 3 so that log n > 1"));
    }
    if eps.partial_cmp(&0.0) != Some(Ordering::Greater) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let discrepancy = angular_discrepancy(set)?.value;
    let threshold = discrepancy_threshold(set.n(), eps);
    Ok(HypothesisD {
        holds: discrepancy <= threshold,
        margin: threshold - discrepancy,
        threshold,
        discrepancy,
    })
}

/// Right-hand side of `D(n, ε)`.
pub fn discrepancy_threshold(n: u64, eps: f64) -> f64 {
    (n as f64).ln().powf(-0.5 * (PI / 2.0).ln() + eps)
}

/// How the spherical-cap supremum is searched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapMode {
    /// True supremum; allowed for `N ≤ limit`.
    Exact { limit: usize },
    /// Lower bound from uniformly sampled centres with a full radius sweep each.
    Sampled { samples: usize, seed: u64 },
}

impl CapMode {
    pub fn exact() -> Self {
        CapMode::Exact {
            limit: EXACT_CAP_LIMIT,
        }
    }
}

const CAP_TOL: f64 = 1e-12;

#[derive(Clone, Copy)]
struct CapBest {
    value: f64,
    centre: [f64; 3],
    radius: f64,
    closed: bool,
}

impl CapBest {
    fn empty() -> Self {
        CapBest {
            value: 0.0,
            centre: [0.0, 0.0, 1.0],
            radius: 0.0,
            closed: true,
        }
    }

    fn offer(&mut self, value: f64, centre: [f64; 3], radius: f64, closed: bool) {
        if value > self.value {
            *self = CapBest {
                value,
                centre,
                radius,
                closed,
            };
        }
    }

    fn merge(self, other: CapBest) -> CapBest {
        if other.value > self.value {
            other
        } else {
            self
        }
    }
}

fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

fn normalize(v: [f64; 3]) -> Option<[f64; 3]> {
    let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (len > 1e-9).then(|| [v[0] / len, v[1] / len, v[2] / len])
}

/// All caps centred at `centre`: closed caps through every point and the
/// limiting open caps just inside every point.
fn sweep_centre(units: &[[f64; 3]], centre: [f64; 3], best: &mut CapBest) {
    let nf = units.len() as f64;
    let mut d2: Vec<f64> = units.iter().map(|u| dist2(u, &centre)).collect();
    d2.sort_by(f64::total_cmp);
    let mut i = 0;
    while i < d2.len() {
        let mut j = i;
        while j + 1 < d2.len() && d2[j + 1] - d2[i] <= CAP_TOL {
            j += 1;
        }
        let r2 = d2[i].min(4.0);
        let area = r2 / 4.0;
        best.offer((j + 1) as f64 / nf - area, centre, r2.sqrt(), true);
        best.offer(area - i as f64 / nf, centre, r2.sqrt(), false);
        i = j + 1;
    }
}

fn cap_counts(units: &[[f64; 3]], centre: &[f64; 3], r2: f64) -> (usize, usize) {
    let mut closed = 0;
    let mut open = 0;
    for u in units {
        let d = dist2(u, centre);
        if d <= r2 + CAP_TOL {
            closed += 1;
        }
        if d < r2 - CAP_TOL {
            open += 1;
        }
    }
    (closed, open)
}

/// Spherical-cap discrepancy `Δ₃(n)` with chordal radii and normalised area
/// `r²/4`.
///
/// The exact mode visits every locally extremal cap: centres at the points,
/// their antipodes and the (anti)normalised pair midpoints with a full radius
/// sweep, plus both caps whose boundary circle passes through each triple.
/// Cost is `O(N⁴)` in the triple pass, hence the size limit.
pub fn spherical_cap_discrepancy(set: &LatticePointSet, mode: CapMode) -> Result<DiscrepancyResult> {
    if set.dim() != Dim::Three {
        return Err(Error::invalid("spherical cap discrepancy requires d = 3"));
    }
    if set.is_empty() {
        return Err(Error::invalid("spherical cap discrepancy of an empty set"));
    }
    let units = set.units();
    Ok(match mode {
        CapMode::Exact { limit } => {
            if units.len() > limit {
                return Err(Error::invalid(format!(
                    "exact cap discrepancy limited to N <= {limit}, got N = {}",
                    units.len()
                )));
            }
            exact_cap_discrepancy(&units)
        }
        CapMode::Sampled { samples, seed } => sampled_cap_discrepancy(&units, samples, seed),
    })
}

/// Exact cap discrepancy of arbitrary unit vectors.
pub fn exact_cap_discrepancy(units: &[[f64; 3]]) -> DiscrepancyResult {
    let n = units.len();
    let nf = n as f64;
    let best = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = CapBest::empty();
            let ui = units[i];
            sweep_centre(units, ui, &mut best);
            sweep_centre(units, [-ui[0], -ui[1], -ui[2]], &mut best);
            for j in i + 1..n {
                let uj = units[j];
                if let Some(m) = normalize([ui[0] + uj[0], ui[1] + uj[1], ui[2] + uj[2]]) {
                    sweep_centre(units, m, &mut best);
                    sweep_centre(units, [-m[0], -m[1], -m[2]], &mut best);
                }
                for uk in &units[j + 1..] {
                    let e1 = [uj[0] - ui[0], uj[1] - ui[1], uj[2] - ui[2]];
                    let e2 = [uk[0] - ui[0], uk[1] - ui[1], uk[2] - ui[2]];
                    let cross = [
                        e1[1] * e2[2] - e1[2] * e2[1],
                        e1[2] * e2[0] - e1[0] * e2[2],
                        e1[0] * e2[1] - e1[1] * e2[0],
                    ];
                    let Some(c) = normalize(cross) else { continue };
                    for centre in [c, [-c[0], -c[1], -c[2]]] {
                        let r2 = dist2(&ui, &centre);
                        let (closed, open) = cap_counts(units, &centre, r2);
                        let area = r2 / 4.0;
                        best.offer(closed as f64 / nf - area, centre, r2.sqrt(), true);
                        best.offer(area - open as f64 / nf, centre, r2.sqrt(), false);
                    }
                }
            }
            best
        })
        .reduce(CapBest::empty, CapBest::merge);
    cap_result(best, true)
}

fn sampled_cap_discrepancy(units: &[[f64; 3]], samples: usize, seed: u64) -> DiscrepancyResult {
    let best = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let centre = CounterRng::new(seed, Domain::CapCentres, s).unit_sphere();
            let mut best = CapBest::empty();
            sweep_centre(units, centre, &mut best);
            best
        })
        .reduce(CapBest::empty, CapBest::merge);
    cap_result(best, false)
}

fn cap_result(best: CapBest, exact: bool) -> DiscrepancyResult {
    DiscrepancyResult {
        value: best.value,
        witness: Witness::Cap {
            centre: best.centre,
            radius: best.radius,
            closed: best.closed,
        },
        exact,
    }
}

/// The clockwise nearest neighbour `λ₊` of `λ` (decreasing angle, wrapping).
pub fn nearest_neighbor_clockwise(set: &LatticePointSet, lambda: &Vector) -> Result<Vector> {
    if set.dim() != Dim::Two {
        return Err(Error::invalid("clockwise neighbour requires d = 2"));
    }
    if set.len() < 2 {
        return Err(Error::invalid("clockwise neighbour needs N >= 2"));
    }
    let i = set
        .index_of(lambda)
        .ok_or_else(|| Error::invalid(format!("{lambda:?} is not in E_{}", set.n())))?;
    Ok(*set.point(set.clockwise_successor(i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_2d(n: i64) -> Vec<Vector> {
        let r = (n as f64).sqrt() as i64 + 1;
        let mut out = Vec::new();
        for a in -r..=r {
            for b in -r..=r {
                if a * a + b * b == n {
                    out.push([a, b, 0]);
                }
            }
        }
        out
    }

    #[test]
    fn unit_circle() {
        let set = enumerate_lattice_points(1, Dim::Two).unwrap();
        assert_eq!(
            set.points(),
            &[[1, 0, 0], [0, 1, 0], [-1, 0, 0], [0, -1, 0]]
        );
    }

    #[test]
    fn n25_has_twelve_points() {
        let set = enumerate_lattice_points(25, Dim::Two).unwrap();
        assert_eq!(set.len(), 12);
        let mut expected = brute_force_2d(25);
        let mut got = set.points().to_vec();
        expected.sort();
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn seven_is_not_a_sum_of_two_squares() {
        assert!(enumerate_lattice_points(7, Dim::Two).unwrap().is_empty());
        assert!(!is_sum_of_squares(7, Dim::Two));
        assert!(is_sum_of_squares(25, Dim::Two));
        assert!(is_sum_of_squares(1, Dim::Two));
    }

    #[test]
    fn sphere_n3() {
        let set = enumerate_lattice_points(3, Dim::Three).unwrap();
        assert_eq!(set.len(), 8);
        assert!(set.points().iter().all(|p| p.iter().all(|c| c.abs() == 1)));
        let mut sorted = set.points().to_vec();
        sorted.sort();
        assert_eq!(sorted, set.points());
    }

    #[test]
    fn congruence_obstruction_in_3d() {
        for n in (7..400).step_by(8) {
            assert!(!is_sum_of_squares(n, Dim::Three), "n = {n}");
            assert!(enumerate_lattice_points(n, Dim::Three).unwrap().is_empty());
        }
    }

    #[test]
    fn zero_is_rejected() {
        assert!(enumerate_lattice_points(0, Dim::Two).is_err());
    }

    #[test]
    fn discrepancy_of_equally_spaced_quadruples() {
        for n in [1, 2] {
            let set = enumerate_lattice_points(n, Dim::Two).unwrap();
            let d = angular_discrepancy(&set).unwrap();
            assert!((d.value - 0.25).abs() < 1e-15, "n = {n}: {}", d.value);
            assert!(d.exact);
        }
    }

    #[test]
    fn discrepancy_rejects_3d() {
        let set = enumerate_lattice_points(3, Dim::Three).unwrap();
        assert!(angular_discrepancy(&set).is_err());
    }

    #[test]
    fn hypothesis_d_needs_log_n_above_one() {
        let set = enumerate_lattice_points(2, Dim::Two).unwrap();
        assert!(check_hypothesis_d(&set, 0.1).is_err());
    }

    #[test]
    fn clockwise_neighbours() {
        let unit = enumerate_lattice_points(1, Dim::Two).unwrap();
        assert_eq!(nearest_neighbor_clockwise(&unit, &[1, 0, 0]).unwrap(), [0, -1, 0]);
        let mut p = [1, 0, 0];
        for _ in 0..4 {
            p = nearest_neighbor_clockwise(&unit, &p).unwrap();
        }
        assert_eq!(p, [1, 0, 0]);

        let set = enumerate_lattice_points(25, Dim::Two).unwrap();
        assert_eq!(nearest_neighbor_clockwise(&set, &[5, 0, 0]).unwrap(), [4, -3, 0]);
        assert!(nearest_neighbor_clockwise(&set, &[1, 0, 0]).is_err());
    }

    #[test]
    fn exact_cap_discrepancy_of_octahedron_vertices() {
        let set = enumerate_lattice_points(1, Dim::Three).unwrap();
        let d = spherical_cap_discrepancy(&set, CapMode::exact()).unwrap();
        assert!(d.value >= 1.0 / 6.0 - 1e-15);
        assert!(d.exact);
    }

    #[test]
    fn exact_mode_respects_size_limit() {
        let set = enumerate_lattice_points(3, Dim::Three).unwrap();
        assert!(spherical_cap_discrepancy(&set, CapMode::Exact { limit: 4 }).is_err());
    }
}
