//! Spectral stability toolkit for rotationally symmetric hypersurfaces.
//!
//! The crate builds generating curves of rotationally symmetric minimal and
//! CMC hypersurfaces (catenoids, round spheres, Delaunay unduloids), equips
//! them with inverse-square-type weights, and counts negative and zero
//! eigenvalues of the stability operator L = Δ + |A|² + Ric(ν,ν) by
//! decomposing it into 1D Sturm-Liouville mode problems.
//!
//! Module map:
//! - [`profiles`]: profile curves (catenoid, sphere, Delaunay) with metric
//!   and second-fundamental-form data.
//! - [`lorentz`]: distribution functions, decreasing rearrangements, and
//!   Lorentz L(p,q) quasi-norms with exact step-function arithmetic.
//! - [`weights`]: bubble/sequence/base weights on profiles and their
//!   curvature and Lorentz-norm bounds.
//! - [`spectral`]: mode decomposition, P1 finite elements, Sturm-sequence
//!   eigenvalue counting, index/nullity reports.
//! - [`jacobi`]: closed-form Jacobi fields on the catenoid, residuals, and
//!   weighted-L² membership classification.
//! - [`neck`]: graphical-annulus Rayleigh quotients, cutoff functions, and
//!   capacity-scaling experiments.
//! - [`sweep`]: Delaunay degeneration sweeps with index semicontinuity
//!   verdicts.
//! - [`num`]: quadrature, finite-difference stencils, and tridiagonal
//!   eigenvalue machinery shared by the modules above.

// Validation guards are written as negated comparisons, !(x > 0.0), so
// that NaN fails them; the suggested x <= 0.0 would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Numeric kernels drive several aligned arrays with one index.
#![allow(clippy::needless_range_loop)]

pub mod jacobi;
pub mod lorentz;
pub mod neck;
pub mod num;
pub mod profiles;
pub mod rng;
pub mod spectral;
pub mod sweep;
pub mod tables;
pub mod tolerances;
pub mod weights;

use thiserror::Error;

/// Errors produced by profile construction, weight construction, and solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter violates a documented precondition.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A truncation in the s-coordinate was requested at or beyond the
    /// catenoid half-length.
    #[error("requested s-truncation {requested} is not below the half-length s_inf = {s_inf}")]
    BeyondHalfLength { requested: f64, s_inf: f64 },

    /// Delaunay shooting failed to close a period within tolerance.
    #[error("Delaunay shooting did not converge: last residual {residual}")]
    ShootingDiverged { residual: f64 },

    /// A weight or sample array does not match the grid it must align with.
    #[error("misaligned samples: expected {expected}, got {got}")]
    Misaligned { expected: usize, got: usize },

    /// The standing assumption 4·R·scale < delta failed for a bubble.
    #[error("bubble {index}: cap radius times 4R = {lhs} must stay below delta = {delta}")]
    BubbleCapTooLarge { index: usize, lhs: f64, delta: f64 },

    /// Writing a report or table failed.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    /// Serializing a report failed.
    #[error("serialization: {0}")]
    Serialization(#[from] serde_json::Error),

    /// CSV output failed.
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
