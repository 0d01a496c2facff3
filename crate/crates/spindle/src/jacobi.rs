//! Closed-form Jacobi fields on the n-catenoid generated by rigid
//! motions: translations, scaling, and rotations. Provides exact
//! evaluation, a discrete residual check against the stability
//! equation, weighted-space membership classification over truncation
//! sweeps, and the translation L2 norm with its closed form.

use serde::Serialize;

use crate::num::fd::derivs_5pt;
use crate::num::{ls_slope, trapezoid};
use crate::profiles::{
    catenoid_profile, unit_sphere_area, ProfileCurve, ProfileKind, ProfileParams,
};
use crate::tolerances::MEMBERSHIP_SLOPE_BAND;
use crate::weights::{weight_bubble, Weight};
use crate::{Error, Result};

/// Generator of a rigid-motion Jacobi field.
#[derive(Debug, Clone)]
pub enum FieldKind {
    /// Translation along coordinate axis `axis`, numbered 1..=n+1 with
    /// n+1 the rotation axis.
    Translation { axis: usize },
    /// Scaling about the origin.
    Dilation,
    /// Rotation with the given antisymmetric (n+1)x(n+1) generator.
    Rotation { generator: Vec<Vec<f64>> },
}

/// A rigid-motion Jacobi field on the n-catenoid. The field separates
/// as g(s) times a spherical harmonic of degree `mode`.
#[derive(Debug, Clone)]
pub struct JacobiField {
    kind: FieldKind,
    n: usize,
}

/// Membership verdict for a field relative to the weighted L2 space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    InL2Omega,
    Diverges,
    Inconclusive,
}

/// Growth diagnostics behind a membership verdict.
#[derive(Debug, Clone, Serialize)]
pub struct MembershipReport {
    pub field: String,
    pub mode: usize,
    pub membership: Membership,
    /// Truncation radii and the weighted square integrals up to them.
    pub integrals: Vec<(f64, f64)>,
    /// Log-log slope of consecutive integral increments; equals the
    /// growth exponent of the integral when it diverges polynomially.
    pub fitted_rate: f64,
    /// (n - 2) + 2 gamma, with gamma the fitted amplitude growth.
    pub predicted_rate: f64,
    /// Fitted exponent gamma of the field amplitude in the truncation.
    pub amplitude_growth: f64,
}

/// Truncated translation norm, its exact tail, and the closed form.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TranslationNorm {
    pub truncated: f64,
    pub tail: f64,
    pub closed_form: f64,
    pub rel_error: f64,
}

impl JacobiField {
    pub fn translation(n: usize, axis: usize) -> Result<Self> {
        check_dim(n)?;
        if axis == 0 || axis > n + 1 {
            return Err(Error::InvalidParameter {
                name: "axis",
                reason: format!("axis {axis} outside 1..={}", n + 1),
            });
        }
        Ok(JacobiField {
            kind: FieldKind::Translation { axis },
            n,
        })
    }

    pub fn dilation(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(JacobiField {
            kind: FieldKind::Dilation,
            n,
        })
    }

    /// Rotation field from an antisymmetric generator. The purely
    /// horizontal block acts within each sphere of revolution and
    /// contributes nothing; the field is determined by the entries
    /// R[i][n] coupling the horizontal axes to the rotation axis, and a
    /// generator with all of those zero produces the zero field and is
    /// rejected.
    pub fn rotation(n: usize, generator: Vec<Vec<f64>>) -> Result<Self> {
        check_dim(n)?;
        let d = n + 1;
        if generator.len() != d || generator.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidParameter {
                name: "generator",
                reason: format!("generator must be {d}x{d}"),
            });
        }
        let scale = generator
            .iter()
            .flatten()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        for i in 0..d {
            for j in 0..d {
                if (generator[i][j] + generator[j][i]).abs() > 1e-12 * scale.max(1.0) {
                    return Err(Error::InvalidParameter {
                        name: "generator",
                        reason: format!("not antisymmetric at ({i}, {j})"),
                    });
                }
            }
        }
        if (0..n).all(|i| generator[i][n] == 0.0) {
            return Err(Error::InvalidParameter {
                name: "generator",
                reason: "purely horizontal rotations fix the surface and generate the zero field"
                    .into(),
            });
        }
        Ok(JacobiField {
            kind: FieldKind::Rotation { generator },
            n,
        })
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Spherical-harmonic degree the field lives in: 1 for horizontal
    /// translations and rotations, 0 for the vertical translation and
    /// the dilation.
    pub fn mode(&self) -> usize {
        match &self.kind {
            FieldKind::Translation { axis } if *axis <= self.n => 1,
            FieldKind::Translation { .. } => 0,
            FieldKind::Dilation => 0,
            FieldKind::Rotation { .. } => 1,
        }
    }

    /// Short name for report tables.
    pub fn label(&self) -> String {
        match &self.kind {
            FieldKind::Translation { axis } => format!("translation_{axis}"),
            FieldKind::Dilation => "dilation".into(),
            FieldKind::Rotation { .. } => "rotation".into(),
        }
    }

    /// Coefficients R[i][n] of a rotation generator, when applicable.
    fn rotation_coeffs(&self) -> Option<Vec<f64>> {
        match &self.kind {
            FieldKind::Rotation { generator } => {
                Some((0..self.n).map(|i| generator[i][self.n]).collect())
            }
            _ => None,
        }
    }

    /// Radial factor g at every profile node, normalized so the angular
    /// factor is 1 (degree 0) or a unit-coefficient linear harmonic
    /// (degree 1). Rotations absorb the Euclidean norm of their
    /// coefficient vector into g.
    pub fn radial_part(&self, profile: &ProfileCurve) -> Result<Vec<f64>> {
        if profile.n != self.n {
            return Err(Error::InvalidParameter {
                name: "profile",
                reason: format!(
                    "field dimension {} but profile dimension {}",
                    self.n, profile.n
                ),
            });
        }
        let m = profile.len();
        let mut g = Vec::with_capacity(m);
        for i in 0..m {
            let s = profile.grid[i];
            let h = profile.h[i];
            let dh = profile.dh[i];
            let ginv = 1.0 / (1.0 + dh * dh).sqrt();
            let v = match &self.kind {
                FieldKind::Translation { axis } if *axis <= self.n => ginv,
                FieldKind::Translation { .. } => -dh * ginv,
                FieldKind::Dilation => (h - s * dh) * ginv,
                FieldKind::Rotation { .. } => {
                    let c = self.rotation_coeffs().expect("rotation kind");
                    let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
                    norm * (s + h * dh) * ginv
                }
            };
            g.push(v);
        }
        Ok(g)
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: format!("surface dimension must be at least 3, got {n}"),
        });
    }
    Ok(())
}

/// Evaluate the field at axial coordinate s and unit direction w on the
/// cross-sectional sphere. Profile data is interpolated linearly at s,
/// so grid points evaluate exactly.
pub fn field_value(field: &JacobiField, profile: &ProfileCurve, s: f64, w: &[f64]) -> Result<f64> {
    if profile.n != field.n {
        return Err(Error::InvalidParameter {
            name: "profile",
            reason: format!(
                "field dimension {} but profile dimension {}",
                field.n, profile.n
            ),
        });
    }
    if w.len() != field.n {
        return Err(Error::Misaligned {
            expected: field.n,
            got: w.len(),
        });
    }
    let grid = &profile.grid;
    let m = grid.len();
    if !(s >= grid[0] && s <= grid[m - 1]) {
        return Err(Error::InvalidParameter {
            name: "s",
            reason: format!(
                "s = {s} outside the sampled range [{}, {}]",
                grid[0],
                grid[m - 1]
            ),
        });
    }
    let j = grid.partition_point(|&x| x < s).clamp(1, m - 1);
    let t = (s - grid[j - 1]) / (grid[j] - grid[j - 1]);
    let h = profile.h[j - 1] + (profile.h[j] - profile.h[j - 1]) * t;
    let dh = profile.dh[j - 1] + (profile.dh[j] - profile.dh[j - 1]) * t;
    let ginv = 1.0 / (1.0 + dh * dh).sqrt();
    let value = match &field.kind {
        FieldKind::Translation { axis } if *axis <= field.n => w[*axis - 1] * ginv,
        FieldKind::Translation { .. } => -dh * ginv,
        FieldKind::Dilation => (h - s * dh) * ginv,
        FieldKind::Rotation { .. } => {
            let c = field.rotation_coeffs().expect("rotation kind");
            let dot: f64 = c.iter().zip(w).map(|(a, b)| a * b).sum();
            (s + h * dh) * ginv * dot
        }
    };
    Ok(value)
}

/// Pointwise residual of the degree-l stability equation for a sampled
/// radial function g: the divergence-form operator is reassembled from
/// analytic catenoid coefficients and finite differences of g, and the
/// result is normalized by the area density so a constant g at l = 0
/// reproduces |A|^2 exactly.
pub fn mode_residual(profile: &ProfileCurve, g: &[f64], l: usize) -> Result<f64> {
    if profile.kind != ProfileKind::Catenoid {
        return Err(Error::InvalidParameter {
            name: "profile",
            reason: format!(
                "analytic residual coefficients require a catenoid, got {:?}",
                profile.kind
            ),
        });
    }
    if g.len() != profile.len() {
        return Err(Error::Misaligned {
            expected: profile.len(),
            got: g.len(),
        });
    }
    let n = profile.n;
    let ProfileParams::Catenoid { h0 } = profile.params else {
        return Err(Error::InvalidParameter {
            name: "profile",
            reason: "catenoid profile without catenoid parameters".into(),
        });
    };
    let a = h0.powi(-2 * (n as i32 - 1));
    let angular = (l * (l + n - 2)) as f64;
    let mut worst = 0.0_f64;
    for i in 0..profile.len() {
        let h = profile.h[i];
        let dh = profile.dh[i];
        let ddh = (n as f64 - 1.0) * a * h.powi(2 * n as i32 - 3);
        let ginv = 1.0 / (1.0 + dh * dh).sqrt();
        let p = h.powi(n as i32 - 1) * ginv;
        let dp = (n as f64 - 1.0) * h.powi(n as i32 - 2) * dh * ginv
            - h.powi(n as i32 - 1) * dh * ddh * ginv.powi(3);
        let (g1, g2) = derivs_5pt(&profile.grid, g, i);
        let sqrt_g = profile.sqrt_g[i];
        let res =
            (-(dp * g1 + p * g2) + (angular / (h * h) - profile.a2[i]) * sqrt_g * g[i]) / sqrt_g;
        worst = worst.max(res.abs());
    }
    Ok(worst)
}

/// Sup over the grid of the discrete stability-equation residual of the
/// field's radial part in its own mode.
pub fn residual(field: &JacobiField, profile: &ProfileCurve) -> Result<f64> {
    let g = field.radial_part(profile)?;
    mode_residual(profile, &g, field.mode())
}

/// Weighted square integral of the field over a truncated profile,
/// with the angular factor folded in.
pub fn weighted_square_integral(
    field: &JacobiField,
    profile: &ProfileCurve,
    weight: &Weight,
) -> Result<f64> {
    if weight.len() != profile.len() {
        return Err(Error::Misaligned {
            expected: profile.len(),
            got: weight.len(),
        });
    }
    let g = field.radial_part(profile)?;
    let masses = profile.surface_masses();
    let angular_factor = if field.mode() == 0 {
        1.0
    } else {
        1.0 / field.n as f64
    };
    let mut acc = 0.0;
    for i in 0..profile.len() {
        acc += g[i] * g[i] * weight.samples()[i] * masses[i];
    }
    Ok(acc * angular_factor)
}

/// Classify membership of the field in the weighted L2 space of the
/// complete catenoid, by sweeping Euclidean truncation radii and
/// fitting the growth of the weighted square integral.
///
/// Increment slopes above the band count as divergence and are checked
/// against the predicted rate (n - 2) + 2 gamma; slopes below the
/// negated band certify a convergent tail. Anything else, including a
/// divergence that misses the predicted rate by more than 0.5, is
/// inconclusive.
pub fn classify_membership(
    field: &JacobiField,
    h0: f64,
    r_cap: f64,
    truncations: &[f64],
    mesh: usize,
) -> Result<MembershipReport> {
    if truncations.len() < 3 {
        return Err(Error::InvalidParameter {
            name: "truncations",
            reason: format!("{} radii given, at least 3 required", truncations.len()),
        });
    }
    if truncations.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidParameter {
            name: "truncations",
            reason: "radii must be strictly increasing".into(),
        });
    }
    let n = field.n;
    let mut integrals = Vec::with_capacity(truncations.len());
    let mut amplitudes = Vec::with_capacity(truncations.len());
    for &s in truncations {
        let profile = catenoid_profile(n, h0, s, mesh)?;
        let weight = weight_bubble(&profile, r_cap)?;
        let g = field.radial_part(&profile)?;
        integrals.push((s, weighted_square_integral(field, &profile, &weight)?));
        amplitudes.push(g.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
    }

    let log_s: Vec<f64> = truncations.iter().map(|s| s.ln()).collect();
    let log_amp: Vec<f64> = amplitudes.iter().map(|a| a.ln()).collect();
    let amplitude_growth = ls_slope(&log_s, &log_amp);
    let predicted_rate = (n as f64 - 2.0) + 2.0 * amplitude_growth;

    let mut inc_x = Vec::new();
    let mut inc_y = Vec::new();
    for k in 0..integrals.len() - 1 {
        let d = integrals[k + 1].1 - integrals[k].1;
        if d > 0.0 {
            inc_x.push(truncations[k + 1].ln());
            inc_y.push(d.ln());
        }
    }
    let fitted_rate = if inc_x.len() >= 2 {
        ls_slope(&inc_x, &inc_y)
    } else {
        f64::NEG_INFINITY
    };

    let membership = if fitted_rate > MEMBERSHIP_SLOPE_BAND {
        if (fitted_rate - predicted_rate).abs() <= 0.5 {
            Membership::Diverges
        } else {
            Membership::Inconclusive
        }
    } else if fitted_rate < -MEMBERSHIP_SLOPE_BAND {
        Membership::InL2Omega
    } else {
        Membership::Inconclusive
    };
    Ok(MembershipReport {
        field: field.label(),
        mode: field.mode(),
        membership,
        integrals,
        fitted_rate,
        predicted_rate,
        amplitude_growth,
    })
}

/// Unweighted square integral of a horizontal translation field over
/// the truncated catenoid, its exact tail out to the complete surface,
/// and the closed form (2 s_inf / sqrt(a)) times the sphere factor.
///
/// The radial integrand h^{n-1} (1 + h'^2)^{-1/2} is identically
/// 1/sqrt(a) by the first integral, which makes the tail exact. The
/// sphere factor is the integral of w_i^2 over the unit sphere,
/// area/n by symmetry; the first power of w_i integrates to zero by
/// antisymmetry and cannot be what the squared field contains.
pub fn translation_l2_norm(axis: usize, profile: &ProfileCurve) -> Result<TranslationNorm> {
    if profile.kind != ProfileKind::Catenoid {
        return Err(Error::InvalidParameter {
            name: "profile",
            reason: format!(
                "translation norms are catenoid quantities, got {:?}",
                profile.kind
            ),
        });
    }
    let n = profile.n;
    if axis == 0 || axis > n {
        return Err(Error::InvalidParameter {
            name: "axis",
            reason: format!("horizontal axis {axis} outside 1..={n}"),
        });
    }
    let ProfileParams::Catenoid { h0 } = profile.params else {
        return Err(Error::InvalidParameter {
            name: "profile",
            reason: "catenoid profile without catenoid parameters".into(),
        });
    };
    let a = h0.powi(-2 * (n as i32 - 1));
    let sphere_factor = unit_sphere_area(n) / n as f64;
    let p: Vec<f64> = (0..profile.len())
        .map(|i| {
            let dh = profile.dh[i];
            profile.h[i].powi(n as i32 - 1) / (1.0 + dh * dh).sqrt()
        })
        .collect();
    let truncated = trapezoid(&profile.grid, &p) * sphere_factor;
    let s_end = *profile.grid.last().expect("profile is nonempty");
    let tail = 2.0 * (profile.s_inf - s_end) / a.sqrt() * sphere_factor;
    let closed_form = 2.0 * profile.s_inf / a.sqrt() * sphere_factor;
    let rel_error = ((truncated + tail - closed_form) / closed_form).abs();
    Ok(TranslationNorm {
        truncated,
        tail,
        closed_form,
        rel_error,
    })
}
