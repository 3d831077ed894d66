//! Lattice points on circles and spheres, spectral correlations of toral
//! Laplace eigenfunctions, and the statistics of their `L²`-mass in random
//! balls at the wavelength scale.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod brute;
pub mod config;
pub mod correlations;
pub mod eigenfunction;
pub mod error;
pub mod experiment;
pub mod lattice;
pub mod mass;
pub mod rng;
pub mod specfun;

pub use config::{CoefficientSpec, ExperimentConfig, Overrides};
pub use correlations::CorrelationReport;
pub use eigenfunction::{BourgainSigns, CoefficientVector, FlatnessParams, FlatnessReport};
pub use error::{Error, Result};
pub use experiment::{Experiment, MomentSummary, RestrictedReport};
pub use lattice::{Dim, DiscrepancyResult, LatticePointSet};
pub use mass::{McMoments, McSpec, PairTable, Restriction};
