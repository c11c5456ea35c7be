//! Global smoothness estimation for Gaussian processes from discrete
//! observations, via quadratic variations of dilated divided differences.
//!
//! The process X is observed at n+1 design points on [0, T]. Its global
//! smoothness is summarized by H = 2(r₀ + β₀): X has r₀ derivatives, and the
//! r₀-th derivative has Hölder exponent β₀ ∈ (0, 1). Both indices are
//! estimated from a single path:
//!
//! 1. [`estimators::estimate_r0`] scans quadratic variations of divided
//!    differences of increasing order; the first order whose variation blows
//!    past n²·bₙ reveals r₀.
//! 2. [`estimators::estimate_beta`] compares the same statistic at two
//!    dilations u < v of the design step; the log-ratio recovers β₀.
//!
//! Around the estimator sit the pieces needed to study it:
//!
//! * [`design`] — sampling designs drawn from a positive density on [0, T];
//! * [`gp`] — Gaussian models with exact simulation (circulant embedding for
//!   the Brownian family, dense Cholesky in general);
//! * [`divdiff`] — divided differences on irregular grids and their
//!   quadratic variations, plus exact expected values;
//! * [`interp`] — plug-in piecewise-Lagrange approximation of the path, with
//!   quadrature and exact integrated mean-square error;
//! * [`montecarlo`] — a seeded, thread-invariant replication harness;
//! * [`estimators::theoretical_limit`] — the constant the normalized
//!   quadratic variation converges to, for checking against simulations.
//!
//! The numeric core is generic over the scalar type through [`Scalar`]
//! (`f64` and `f32` both satisfy it); the aliases below fix `f64`, which is
//! what the command-line tool and the serializable configs use.

// Guards are written `!(x > 0)` rather than `x <= 0` throughout: the negated
// form also rejects NaN, which `partial_cmp`-style rewrites would wave past.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod design;
pub mod divdiff;
pub mod error;
pub mod estimators;
pub mod gp;
pub mod interp;
pub mod montecarlo;
pub mod scalar;
pub mod util;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Double-precision sampling design.
pub type Design = design::SamplingDesign<f64>;
/// Double-precision sampling density.
pub type Density = design::DensitySpec<f64>;
/// Double-precision Gaussian model.
pub type Model = gp::GaussianModel<f64>;
/// Double-precision sample path.
pub type Path = gp::SamplePath<f64>;
/// Double-precision estimator configuration.
pub type Config = estimators::EstimatorConfig<f64>;
/// Double-precision estimation report.
pub type Estimate = estimators::RegularityEstimate<f64>;
