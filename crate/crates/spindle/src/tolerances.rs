//! Named numeric tolerances shared across modules.
//!
//! Every constant that gates a test or a solver decision lives here so the
//! value is set once and referenced by name.

/// Relative tolerance for the catenoid first-integral identity
/// h'² − (a·h^{2(n−1)} − 1) = 0 at every sample.
pub const CATENOID_IDENTITY_REL_TOL: f64 = 1e-9;

/// Absolute tolerance for the catenoid minimality residual (sum of principal
/// curvatures) recomputed from finite differences of the samples.
pub const MINIMALITY_RESIDUAL_TOL: f64 = 1e-8;

/// Tolerance for the Delaunay mean-curvature residual at every sample,
/// relative to H.
pub const CMC_RESIDUAL_REL_TOL: f64 = 1e-6;

/// Switch point between the local series start and ODE stepping for the
/// catenoid neck, as a multiple of h0.
pub const CATENOID_SERIES_SWITCH: f64 = 1e-3;

/// Internal integrator substep for catenoid profile construction, as a
/// multiple of h0. Decoupled from the sampling mesh so profile data stays
/// integrator-accurate even at coarse meshes.
pub const CATENOID_SUBSTEP: f64 = 1e-3;

/// Base step scale for Delaunay arclength shooting, as a fraction of the
/// local radius scale.
pub const DELAUNAY_STEP_SCALE: f64 = 5e-3;

/// Default adaptive-quadrature tolerance for internal integrals (tails,
/// capacity energies, oracles).
pub const QUAD_TOL: f64 = 1e-12;

/// Pivot guard for LDLᵀ Sturm counting: pivots smaller than this in
/// magnitude are replaced by a same-signed guard to avoid non-finite
/// arithmetic at near-singular shifts.
pub const STURM_PIVOT_GUARD: f64 = 1e-150;

/// Relative accuracy target for eigenvalue bisection.
pub const EIG_BISECT_REL_TOL: f64 = 1e-12;

/// Factor applied to the Richardson discretization-error estimate to get the
/// default zero-eigenvalue classification tolerance.
pub const ZERO_TOL_RICHARDSON_FACTOR: f64 = 10.0;

/// Floor for the automatically derived zero tolerance.
pub const ZERO_TOL_FLOOR: f64 = 1e-11;

/// Zero-eigenvalue tolerance for weighted nullity counts on truncated
/// catenoids at truncation radius 40 or larger. The translation modes
/// are exact zeros only on the complete surface; truncation shifts them
/// by an amount that decays with the radius and stays below 1.5e-3 in
/// magnitude from radius 40 on, for either boundary condition. The next
/// eigenvalues sit beyond 0.5, so this band separates cleanly.
pub const WEIGHTED_NULLITY_ZERO_TOL: f64 = 2.5e-3;

/// Exact-arithmetic tolerance for Lorentz step-function identities.
pub const LORENTZ_EXACT_TOL: f64 = 1e-12;

/// Membership classification: tail-increment slopes above this count as
/// divergence, below its negation as convergence; in between is
/// inconclusive.
pub const MEMBERSHIP_SLOPE_BAND: f64 = 0.5;
