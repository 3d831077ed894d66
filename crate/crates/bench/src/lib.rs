//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use toral_core::eigenfunction::make_bourgain;
use toral_core::lattice::enumerate_lattice_points;
use toral_core::{BourgainSigns, CoefficientVector, Dim, LatticePointSet};

pub fn circle(n: u64) -> Arc<LatticePointSet> {
    Arc::new(enumerate_lattice_points(n, Dim::Two).expect("n is a sum of two squares"))
}

/// Bourgain coefficients with seed 1 at `T / √n`.
pub fn bourgain_at(n: u64, t: f64) -> (CoefficientVector, f64) {
    let cv = make_bourgain(circle(n), BourgainSigns::Seed(1)).expect("valid coefficients");
    (cv, t / (n as f64).sqrt())
}
