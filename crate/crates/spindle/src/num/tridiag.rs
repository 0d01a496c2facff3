//! Symmetric tridiagonal matrices with an optional periodic corner entry,
//! and the generalized eigenvalue machinery built on them: inertia counts,
//! bisection for extreme eigenvalues, and inverse-iteration eigenvectors.
//!
//! All eigenvalue problems here are `K v = lambda M v` with `M` a positive
//! diagonal (lumped) mass matrix.

use crate::tolerances::{EIG_BISECT_REL_TOL, STURM_PIVOT_GUARD};

/// Symmetric matrix with nonzero entries on the main diagonal, the first
/// off-diagonal, and optionally the (0, n-1) corner pair used by periodic
/// boundary conditions.
#[derive(Debug, Clone)]
pub struct SymTridiag {
    /// Main diagonal, length n.
    pub diag: Vec<f64>,
    /// First off-diagonal, length n - 1.
    pub off: Vec<f64>,
    /// Entry at (0, n-1) and (n-1, 0); zero for non-periodic problems.
    pub corner: f64,
}

impl SymTridiag {
    /// Build from bands. `corner != 0` requires dimension at least 3 so the
    /// corner does not overlap the off-diagonal.
    pub fn new(diag: Vec<f64>, off: Vec<f64>, corner: f64) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "band lengths inconsistent");
        assert!(
            corner == 0.0 || diag.len() >= 3,
            "periodic corner needs dimension >= 3"
        );
        SymTridiag { diag, off, corner }
    }

    /// Matrix dimension.
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Matrix-vector product including the corner pair.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(v.len(), n);
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * v[i + 1];
            }
            out[i] = acc;
        }
        if self.corner != 0.0 {
            out[0] += self.corner * v[n - 1];
            out[n - 1] += self.corner * v[0];
        }
        out
    }

    /// Rayleigh quotient (v'Kv)/(v'Mv) of the generalized pencil.
    pub fn rayleigh(&self, mass: &[f64], v: &[f64]) -> f64 {
        let kv = self.matvec(v);
        let num: f64 = v.iter().zip(&kv).map(|(a, b)| a * b).sum();
        let den: f64 = v.iter().zip(mass).map(|(a, m)| a * a * m).sum();
        num / den
    }

    /// Number of generalized eigenvalues strictly below `sigma`, by the
    /// inertia of K - sigma M. Pivot magnitudes are clamped away from zero;
    /// an exact zero pivot is treated as negative.
    ///
    /// With a corner entry the last pivot accumulates fill-in, so when
    /// `sigma` sits near a coincident eigenvalue of a leading submatrix the
    /// count can be off by one inside a band of width about 1e-9 times the
    /// matrix scale. Callers must keep `zero_tol` above that band.
    pub fn count_below(&self, mass: &[f64], sigma: f64) -> usize {
        let n = self.n();
        assert_eq!(mass.len(), n);
        let shifted = |i: usize| self.diag[i] - sigma * mass[i];
        let mut count = 0usize;
        let mut tally = |d: f64| {
            if d < 0.0 {
                count += 1;
            }
        };
        if self.corner == 0.0 {
            let mut d = guard(shifted(0));
            tally(d);
            for i in 1..n {
                let e = self.off[i - 1];
                d = guard(shifted(i) - e * e / d);
                tally(d);
            }
        } else {
            // Bordered elimination: r tracks the fill-in of the last column,
            // last accumulates the (n-1, n-1) pivot before its own step.
            let mut r = self.corner;
            let mut last = shifted(n - 1);
            let mut d = guard(shifted(0));
            tally(d);
            for i in 0..n - 2 {
                let e = self.off[i];
                let init = if i + 1 == n - 2 { self.off[n - 2] } else { 0.0 };
                let next_r = init - e * r / d;
                last -= r * r / d;
                d = guard(shifted(i + 1) - e * e / d);
                tally(d);
                r = next_r;
            }
            tally(guard(last - r * r / d));
        }
        count
    }

    /// The `k` smallest generalized eigenvalues in ascending order, with
    /// multiplicity, by bisection on the inertia count.
    pub fn smallest_eigenvalues(&self, mass: &[f64], k: usize) -> Vec<f64> {
        let n = self.n();
        let k = k.min(n);
        let (mut glo, mut ghi) = self.gershgorin(mass);
        let pad = 1e-12 * (1.0 + glo.abs().max(ghi.abs()));
        glo -= pad;
        ghi += pad;
        let scale = 1.0_f64.max(glo.abs()).max(ghi.abs());
        let mut out = Vec::with_capacity(k);
        for j in 0..k {
            let mut lo = glo;
            let mut hi = ghi;
            for _ in 0..200 {
                if hi - lo <= EIG_BISECT_REL_TOL * scale {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if self.count_below(mass, mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        out
    }

    /// Eigenvalue interval from Gershgorin disks of the symmetrically
    /// mass-scaled matrix.
    fn gershgorin(&self, mass: &[f64]) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let center = self.diag[i] / mass[i];
            let mut radius = 0.0;
            if i > 0 {
                radius += (self.off[i - 1] / (mass[i - 1] * mass[i]).sqrt()).abs();
            }
            if i + 1 < n {
                radius += (self.off[i] / (mass[i] * mass[i + 1]).sqrt()).abs();
            }
            if self.corner != 0.0 && (i == 0 || i == n - 1) {
                radius += (self.corner / (mass[0] * mass[n - 1]).sqrt()).abs();
            }
            lo = lo.min(center - radius);
            hi = hi.max(center + radius);
        }
        (lo, hi)
    }

    /// Solve (K - sigma M) x = rhs by bordered elimination without pivoting.
    /// Near-zero pivots are clamped, which for inverse iteration only
    /// amplifies the wanted eigendirection.
    pub fn solve_shifted(&self, mass: &[f64], sigma: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(rhs.len(), n);
        let shifted = |i: usize| self.diag[i] - sigma * mass[i];
        let mut scale: f64 = self.corner.abs();
        for i in 0..n {
            scale = scale.max(shifted(i).abs());
        }
        for &e in &self.off {
            scale = scale.max(e.abs());
        }
        let floor = (1e-15 * scale).max(1e-300);
        let clamp = |d: f64| {
            if d.abs() < floor {
                if d < 0.0 {
                    -floor
                } else {
                    floor
                }
            } else {
                d
            }
        };

        let mut d = vec![0.0; n];
        let mut r = vec![0.0; n.saturating_sub(1)];
        let mut b = rhs.to_vec();
        if n >= 2 {
            r[n - 2] = self.off[n - 2];
        }
        if self.corner != 0.0 {
            r[0] = self.corner;
        }
        d[0] = clamp(shifted(0));
        for i in 1..n {
            d[i] = shifted(i);
        }
        for i in 0..n.saturating_sub(2) {
            let e = self.off[i];
            let f1 = e / d[i];
            d[i + 1] = clamp(d[i + 1] - f1 * e);
            b[i + 1] -= f1 * b[i];
            if r[i] != 0.0 {
                let f2 = r[i] / d[i];
                r[i + 1] -= f1 * r[i];
                d[n - 1] -= f2 * r[i];
                b[n - 1] -= f2 * b[i];
            }
        }
        if n >= 2 {
            let f = r[n - 2] / d[n - 2];
            d[n - 1] = clamp(d[n - 1] - f * r[n - 2]);
            b[n - 1] -= f * b[n - 2];
        }

        let mut x = vec![0.0; n];
        x[n - 1] = b[n - 1] / d[n - 1];
        if n >= 2 {
            x[n - 2] = (b[n - 2] - r[n - 2] * x[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (b[i] - self.off[i] * x[i + 1] - r[i] * x[n - 1]) / d[i];
        }
        x
    }

    /// M-normalized eigenvector for the generalized eigenvalue `lambda`, by
    /// inverse iteration from a fixed deterministic start vector.
    pub fn eigenvector(&self, mass: &[f64], lambda: f64) -> Vec<f64> {
        let n = self.n();
        let mut v: Vec<f64> = (0..n).map(|i| ((i + 1) as f64 * 1.234567).sin()).collect();
        normalize_m(&mut v, mass);
        for _ in 0..4 {
            let b: Vec<f64> = v.iter().zip(mass).map(|(x, m)| x * m).collect();
            v = self.solve_shifted(mass, lambda, &b);
            normalize_m(&mut v, mass);
        }
        v
    }
}

fn guard(d: f64) -> f64 {
    if d.abs() < STURM_PIVOT_GUARD {
        -STURM_PIVOT_GUARD
    } else {
        d
    }
}

fn normalize_m(v: &mut [f64], mass: &[f64]) {
    let norm: f64 = v
        .iter()
        .zip(mass)
        .map(|(x, m)| x * x * m)
        .sum::<f64>()
        .sqrt();
    let mut lead = 0.0_f64;
    for &x in v.iter() {
        if x.abs() > lead.abs() {
            lead = x;
        }
    }
    let sign = if lead < 0.0 { -1.0 } else { 1.0 };
    for x in v.iter_mut() {
        *x *= sign / norm;
    }
}
