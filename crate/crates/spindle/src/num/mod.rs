//! Shared numerical kernels: adaptive quadrature, finite-difference
//! stencils on arbitrary grids, and symmetric tridiagonal (optionally
//! periodic) generalized eigenvalue machinery.

pub mod fd;
pub mod quad;
pub mod tridiag;

/// Trapezoid rule over sampled data on a (possibly non-uniform) grid.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = 0.0;
    for i in 1..x.len() {
        acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    }
    acc
}

/// Least-squares slope of y against x. Used for fitting scaling exponents
/// on log-log data.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let m = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    (m * sxy - sx * sy) / (m * sxx - sx * sx)
}
