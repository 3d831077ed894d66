//! Brute-force `O(N^l)` oracles for the fast counting and moment routines,
//! plus the equivalence suite that compares the two.

use num_complex::Complex64;
use serde::Serialize;

use crate::correlations::{
    count_correlations, count_quasi_correlations, floor_square, for_each_tuple, is_diagonal, tuple_sum,
    DEFAULT_BUDGET,
};
use crate::eigenfunction::{make_bourgain, BourgainSigns, CoefficientVector};
use crate::error::Result;
use crate::lattice::{add, enumerate_lattice_points, norm, norm2, sub, Dim, LatticePointSet};
use crate::mass::{moment_exact_tuple, spectral_scale};
use crate::specfun;

/// Largest planar set covered by the equivalence suite.
pub const MAX_N_2D: usize = 16;
/// Largest spatial set covered by the equivalence suite.
pub const MAX_N_3D: usize = 12;
/// Longest tuple covered by the equivalence suite.
pub const MAX_L: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteCounts {
    pub count_s: u128,
    pub count_d: u128,
    /// Quasi-correlation counts, one per requested `K`.
    pub quasi: Vec<u128>,
}

/// Visits every ordered `l`-tuple once and tallies `S`, `D` and `C(K)` for
/// each `K`.
pub fn brute_correlations(set: &LatticePointSet, l: usize, ks: &[f64]) -> Result<BruteCounts> {
    let bounds: Vec<u128> = ks.iter().map(|&k| floor_square(k)).collect::<Result<_>>()?;
    let mut out = BruteCounts {
        count_s: 0,
        count_d: 0,
        quasi: vec![0; ks.len()],
    };
    for_each_tuple(set.len(), l, |t| {
        let m = norm2(&tuple_sum(set, t)) as u128;
        if m == 0 {
            out.count_s += 1;
            if l.is_multiple_of(2) && is_diagonal(set, t) {
                out.count_d += 1;
            }
        } else {
            for (c, &b) in out.quasi.iter_mut().zip(&bounds) {
                if m <= b {
                    *c += 1;
                }
            }
        }
    });
    Ok(out)
}

/// `k`-th centred moment by direct summation over all `2k`-tuples.
pub fn brute_moment(cv: &CoefficientVector, r: f64, k: usize) -> f64 {
    let set = cv.set();
    let c = cv.coeffs();
    let mut total = Complex64::new(0.0, 0.0);
    for_each_tuple(set.len(), 2 * k, |t| {
        let mut s = [0i64; 3];
        for i in 0..k {
            if t[2 * i] == t[2 * i + 1] {
                return;
            }
            s = add(&s, &sub(set.point(t[2 * i]), set.point(t[2 * i + 1])));
        }
        if s != [0, 0, 0] {
            return;
        }
        let mut term = Complex64::new(1.0, 0.0);
        for i in 0..k {
            let (a, b) = (t[2 * i], t[2 * i + 1]);
            let gd = specfun::g(cv.dim(), r * norm(&sub(set.point(a), set.point(b))));
            term *= c[a] * c[b].conj() * gd;
        }
        total += term;
    });
    spectral_scale(r, cv.dim()).powi(k as i32) * total.re
}

/// One fast-versus-brute comparison.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceCheck {
    pub name: String,
    pub fast: String,
    pub brute: String,
    pub passed: bool,
}

/// Planar `n` with `N ≤ 16` and spatial `n` with `N ≤ 12`.
pub fn suite_sets() -> Result<Vec<LatticePointSet>> {
    let mut out = Vec::new();
    for n in [1, 5, 25, 65, 85] {
        out.push(enumerate_lattice_points(n, Dim::Two)?);
    }
    for n in [1, 2, 3, 8] {
        out.push(enumerate_lattice_points(n, Dim::Three)?);
    }
    Ok(out)
}

fn quasi_radii(set: &LatticePointSet) -> Vec<f64> {
    let root = (set.n() as f64).sqrt();
    vec![1.0, 0.5 * root, root + 0.5, 1.9 * root]
}

/// Every correlation and quasi-correlation count of [`suite_sets`] for
/// `2 ≤ l ≤ 6`, then the third moment at `n = 25`.
pub fn equivalence_suite() -> Result<Vec<EquivalenceCheck>> {
    let mut out = Vec::new();
    for set in suite_sets()? {
        let limit = match set.dim() {
            Dim::Two => MAX_N_2D,
            Dim::Three => MAX_N_3D,
        };
        debug_assert!(set.len() <= limit);
        let ks = quasi_radii(&set);
        for l in 2..=MAX_L {
            let brute = brute_correlations(&set, l, &ks)?;
            let fast = count_correlations(&set, l, DEFAULT_BUDGET)?;
            out.push(EquivalenceCheck {
                name: format!("n={} d={} l={l} S,D", set.n(), set.dim()),
                fast: format!("{},{}", fast.count_s, fast.count_d),
                brute: format!("{},{}", brute.count_s, brute.count_d),
                passed: fast.count_s == brute.count_s && fast.count_d == brute.count_d,
            });
            let fast_q: Vec<u128> = ks
                .iter()
                .map(|&k| count_quasi_correlations(&set, l, k, DEFAULT_BUDGET).map(|r| r.quasi.map_or(0, |q| q.count)))
                .collect::<Result<_>>()?;
            out.push(EquivalenceCheck {
                name: format!("n={} d={} l={l} quasi", set.n(), set.dim()),
                fast: format!("{fast_q:?}"),
                brute: format!("{:?}", brute.quasi),
                passed: fast_q == brute.quasi,
            });
        }
    }
    let set = std::sync::Arc::new(enumerate_lattice_points(25, Dim::Two)?);
    let cv = make_bourgain(set, BourgainSigns::Seed(1))?;
    let fast = moment_exact_tuple(&cv, 0.05, 3, DEFAULT_BUDGET)?;
    let slow = brute_moment(&cv, 0.05, 3);
    let rel = (fast - slow).abs() / slow.abs().max(f64::MIN_POSITIVE);
    out.push(EquivalenceCheck {
        name: "n=25 third moment".into(),
        fast: format!("{fast:.16e}"),
        brute: format!("{slow:.16e}"),
        passed: rel <= 1e-10,
    });
    Ok(out)
}
