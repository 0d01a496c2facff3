//! Generating curves of rotationally symmetric hypersurfaces.
//!
//! A hypersurface of revolution in flat ambient space is described by its
//! profile radius h(s) > 0 over the axial coordinate s, with induced metric
//! (1 + h'(s)^2) ds^2 + h(s)^2 g_{S^{n-1}} and area measure factor
//! sqrt_g = h^{n-1} (1 + h'^2)^{1/2}. Three families are constructed here:
//! the minimal n-catenoid, the round sphere, and one period of a Delaunay
//! unduloid with constant mean curvature.

use serde::{Deserialize, Serialize};

use crate::num::quad;
use crate::tolerances::{
    CATENOID_IDENTITY_REL_TOL, CATENOID_SERIES_SWITCH, CATENOID_SUBSTEP, CMC_RESIDUAL_REL_TOL,
    DELAUNAY_STEP_SCALE, QUAD_TOL,
};
use crate::{Error, Result};

/// Family tag for a profile curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    Catenoid,
    Sphere,
    Delaunay,
}

/// Originating parameters of a profile, kept for reporting and rebuilding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileParams {
    Catenoid { h0: f64 },
    Sphere { radius: f64 },
    Delaunay { mean_curvature: f64, neck: f64 },
}

/// Boundary condition for eigenvalue problems posed on a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    /// Zero trace at both truncation ends.
    Dirichlet,
    /// No essential constraint; the variational problem is assembled as is.
    Natural,
    /// End samples identified; valid for Delaunay profiles only.
    Periodic,
}

/// Sampled generating curve with metric and curvature data.
///
/// Samples live on a strictly increasing axial grid. Catenoid and Delaunay
/// grids are symmetric about s = 0 with h even in s; the sphere grid is
/// staggered in latitude so every sample keeps h > 0.
#[derive(Debug, Clone)]
pub struct ProfileCurve {
    /// Ambient-minus-one dimension, at least 3.
    pub n: usize,
    /// Axial sample coordinates, strictly increasing.
    pub grid: Vec<f64>,
    /// Profile radius at each sample, positive.
    pub h: Vec<f64>,
    /// Derivative dh/ds at each sample.
    pub dh: Vec<f64>,
    /// Squared norm of the second fundamental form at each sample.
    pub a2: Vec<f64>,
    /// Area measure factor h^{n-1} (1 + h'^2)^{1/2} at each sample.
    pub sqrt_g: Vec<f64>,
    /// Family tag.
    pub kind: ProfileKind,
    /// Originating parameters.
    pub params: ProfileParams,
    /// Profile half-length: the full asymptotic half-length for the
    /// catenoid, the radius for the sphere, the half-period for Delaunay.
    pub s_inf: f64,
}

impl ProfileCurve {
    /// Number of samples.
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    /// True when the profile holds no samples.
    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Euclidean distance from the axis origin to sample `i`.
    pub fn euclidean_radius(&self, i: usize) -> f64 {
        (self.h[i] * self.h[i] + self.grid[i] * self.grid[i]).sqrt()
    }

    /// Full period of a Delaunay profile; twice the half-length.
    pub fn period(&self) -> f64 {
        2.0 * self.s_inf
    }

    /// Surface measure attributed to each sample: the trapezoid cell
    /// width around the node times sqrt_g times the cross-section area.
    pub fn surface_masses(&self) -> Vec<f64> {
        let area = unit_sphere_area(self.n);
        let m = self.len();
        (0..m)
            .map(|i| {
                let left = if i == 0 {
                    0.0
                } else {
                    0.5 * (self.grid[i] - self.grid[i - 1])
                };
                let right = if i + 1 == m {
                    0.0
                } else {
                    0.5 * (self.grid[i + 1] - self.grid[i])
                };
                area * self.sqrt_g[i] * (left + right)
            })
            .collect()
    }

    /// Check the structural invariants shared by every profile: positive
    /// radius and a strictly increasing grid.
    pub fn validate(&self) -> Result<()> {
        for (i, &hi) in self.h.iter().enumerate() {
            if !(hi > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "h",
                    reason: format!("nonpositive radius {hi} at sample {i}"),
                });
            }
        }
        for w in self.grid.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParameter {
                    name: "grid",
                    reason: format!("grid not strictly increasing at {} -> {}", w[0], w[1]),
                });
            }
        }
        Ok(())
    }
}

/// Surface description sufficient to rebuild a profile plus the data an
/// eigenvalue problem needs: truncation radius, boundary condition, and the
/// ambient Ricci term (zero in flat ambients).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub kind: ProfileKind,
    pub params: ProfileParams,
    /// Euclidean truncation radius; ignored by compact kinds.
    pub truncation: f64,
    pub bc: BoundaryCondition,
    /// Ambient Ricci curvature in the normal direction.
    pub ricci: f64,
}

impl SurfaceSpec {
    /// Dimension carried by the parameters is not stored here; `build`
    /// receives it explicitly so one spec can be reused across dimensions.
    pub fn build(&self, n: usize, mesh: usize) -> Result<ProfileCurve> {
        if !(self.truncation > 0.0) {
            return Err(Error::InvalidParameter {
                name: "truncation",
                reason: "truncation radius must be positive".into(),
            });
        }
        if self.bc == BoundaryCondition::Periodic && self.kind != ProfileKind::Delaunay {
            return Err(Error::InvalidParameter {
                name: "bc",
                reason: "periodic boundary conditions require a Delaunay profile".into(),
            });
        }
        match (self.kind, self.params) {
            (ProfileKind::Catenoid, ProfileParams::Catenoid { h0 }) => {
                catenoid_profile(n, h0, self.truncation, mesh)
            }
            (ProfileKind::Sphere, ProfileParams::Sphere { radius }) => {
                sphere_profile(n, radius, mesh)
            }
            (
                ProfileKind::Delaunay,
                ProfileParams::Delaunay {
                    mean_curvature,
                    neck,
                },
            ) => delaunay_profile(n, mean_curvature, neck, mesh),
            _ => Err(Error::InvalidParameter {
                name: "params",
                reason: "parameter variant does not match the surface kind".into(),
            }),
        }
    }
}

/// Surface area of the unit sphere S^{n-1} bounding the unit ball in
/// dimension n, by the two-step downward recursion in the dimension.
pub fn unit_sphere_area(n: usize) -> f64 {
    assert!(n >= 1, "sphere area needs a positive ambient dimension");
    match n {
        1 => 2.0,
        2 => 2.0 * std::f64::consts::PI,
        _ => 2.0 * std::f64::consts::PI * unit_sphere_area(n - 2) / (n - 2) as f64,
    }
}

fn check_common(n: usize, mesh: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: format!("dimension must be at least 3, got {n}"),
        });
    }
    if mesh < 16 {
        return Err(Error::InvalidParameter {
            name: "mesh",
            reason: format!("mesh must be at least 16, got {mesh}"),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Catenoid
// ---------------------------------------------------------------------------

/// Conserved-quantity coefficient a = h0^{-2(n-1)} of the catenoid equation
/// h'^2 = a h^{2(n-1)} - 1.
fn catenoid_a(n: usize, h0: f64) -> f64 {
    h0.powi(-2 * (n as i32 - 1))
}

/// Closed-form slope on the increasing branch, h >= h0.
fn catenoid_dh(n: usize, a: f64, h: f64) -> f64 {
    (a * h.powi(2 * (n as i32 - 1)) - 1.0).max(0.0).sqrt()
}

/// Nonsingular second-order form h'' = (n-1) a h^{2n-3}.
fn catenoid_ddh(n: usize, a: f64, h: f64) -> f64 {
    (n as f64 - 1.0) * a * h.powi(2 * n as i32 - 3)
}

/// Even local series of h about the neck, valid for |s| << h0.
fn catenoid_series(n: usize, h0: f64, s: f64) -> (f64, f64) {
    let nf = n as f64;
    let c2 = (nf - 1.0) / (2.0 * h0);
    let c4 = (nf - 1.0) * (nf - 1.0) * (2.0 * nf - 3.0) / (24.0 * h0.powi(3));
    let c6 = (nf - 1.0) * (2.0 * nf - 3.0) * (c4 + (nf - 2.0) * c2 * c2 / h0) / (30.0 * h0 * h0);
    let s2 = s * s;
    let h = h0 + s2 * (c2 + s2 * (c4 + s2 * c6));
    let dh = s * (2.0 * c2 + s2 * (4.0 * c4 + s2 * 6.0 * c6));
    (h, dh)
}

/// One fixed RK4 step of the system (h, v)' = (v, (n-1) a h^{2n-3}).
fn catenoid_step(n: usize, a: f64, h: f64, v: f64, ds: f64) -> (f64, f64) {
    let f = |h: f64, v: f64| (v, catenoid_ddh(n, a, h));
    let (k1h, k1v) = f(h, v);
    let (k2h, k2v) = f(h + 0.5 * ds * k1h, v + 0.5 * ds * k1v);
    let (k3h, k3v) = f(h + 0.5 * ds * k2h, v + 0.5 * ds * k2v);
    let (k4h, k4v) = f(h + ds * k3h, v + ds * k3v);
    (
        h + ds / 6.0 * (k1h + 2.0 * k2h + 2.0 * k3h + k4h),
        v + ds / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )
}

/// Advance (h, v) from s to s_target with fixed substeps of at most
/// `CATENOID_SUBSTEP * h0`.
fn catenoid_advance(n: usize, a: f64, h0: f64, state: (f64, f64), span: f64) -> (f64, f64) {
    if span == 0.0 {
        return state;
    }
    let cap = CATENOID_SUBSTEP * h0;
    let k = (span / cap).ceil().max(1.0) as usize;
    let ds = span / k as f64;
    let (mut h, mut v) = state;
    for _ in 0..k {
        let next = catenoid_step(n, a, h, v, ds);
        h = next.0;
        v = next.1;
    }
    (h, v)
}

/// Axial advance of the end region in tau = ln h, where
/// ds/dtau = h / h'(h) in closed form. A single RK4 step reduces to a
/// Simpson evaluation because the right side depends on tau only.
fn catenoid_s_step(n: usize, a: f64, tau: f64, dtau: f64) -> f64 {
    let g = |t: f64| {
        let h = t.exp();
        h / catenoid_dh(n, a, h)
    };
    dtau / 6.0 * (g(tau) + 4.0 * g(tau + 0.5 * dtau) + g(tau + dtau))
}

fn catenoid_s_advance(n: usize, a: f64, tau: f64, span: f64, cap: f64) -> f64 {
    if span == 0.0 {
        return 0.0;
    }
    let k = (span / cap).ceil().max(1.0) as usize;
    let dtau = span / k as f64;
    let mut s = 0.0;
    for j in 0..k {
        s += catenoid_s_step(n, a, tau + j as f64 * dtau, dtau);
    }
    s
}

/// Remaining axial length from radius `h_from` out to infinity, via the
/// substitution t = 1/h which removes the improper endpoint.
fn catenoid_tail(n: usize, a: f64, h_from: f64) -> f64 {
    let p = 2 * (n as i32 - 1);
    let integrand = move |t: f64| {
        if t == 0.0 && n == 3 {
            return 1.0 / a.sqrt();
        }
        t.powi(n as i32 - 3) / (a - t.powi(p)).sqrt()
    };
    quad::integrate(&integrand, 0.0, 1.0 / h_from, QUAD_TOL)
}

/// Truncation target for the catenoid builder.
enum Trunc {
    /// Stop where the Euclidean radius (h^2 + s^2)^{1/2} reaches the value.
    Euclid(f64),
    /// Stop at the given axial coordinate.
    Axial(f64),
}

struct CatenoidScout {
    /// Axial coordinate where h crosses 2 h0, if the profile gets there.
    s_switch: Option<f64>,
    s_max: f64,
    h_max: f64,
}

fn catenoid_scout(n: usize, h0: f64, target: &Trunc) -> Result<CatenoidScout> {
    let a = catenoid_a(n, h0);
    let eps = CATENOID_SERIES_SWITCH * h0;
    let step = CATENOID_SUBSTEP * h0;
    let reached = |s: f64, h: f64| -> bool {
        match *target {
            Trunc::Euclid(radius) => h * h + s * s >= radius * radius,
            Trunc::Axial(s_half) => s >= s_half,
        }
    };

    let (mut h, mut v) = catenoid_series(n, h0, eps);
    let mut s = eps;
    if reached(s, h) {
        return Err(Error::InvalidParameter {
            name: "S",
            reason: "truncation lies inside the series neighborhood of the neck".into(),
        });
    }

    // inner region: march in s until h doubles or the target is hit
    let s_switch = loop {
        let (hn, vn) = catenoid_step(n, a, h, v, step);
        let sn = s + step;
        if hn >= 2.0 * h0 {
            let mut lo = 0.0;
            let mut hi = step;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let (hm, _) = catenoid_step(n, a, h, v, mid);
                if hm >= 2.0 * h0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            break s + 0.5 * (lo + hi);
        }
        if reached(sn, hn) {
            let mut lo = 0.0;
            let mut hi = step;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let (hm, _) = catenoid_step(n, a, h, v, mid);
                if reached(s + mid, hm) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let ds = 0.5 * (lo + hi);
            let (hm, _) = catenoid_step(n, a, h, v, ds);
            return Ok(CatenoidScout {
                s_switch: None,
                s_max: s + ds,
                h_max: hm,
            });
        }
        h = hn;
        v = vn;
        s = sn;
    };

    // end region: march in tau = ln h with the closed-form slope
    let mut tau = (2.0 * h0).ln();
    let mut s = s_switch;
    let dtau = 1e-2;
    let tau_cap = (1e9 * h0).ln();
    loop {
        let ds = catenoid_s_step(n, a, tau, dtau);
        let tn = tau + dtau;
        let sn = s + ds;
        if reached(sn, tn.exp()) {
            let mut lo = 0.0;
            let mut hi = dtau;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let dsm = catenoid_s_step(n, a, tau, mid);
                if reached(s + dsm, (tau + mid).exp()) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let mid = 0.5 * (lo + hi);
            return Ok(CatenoidScout {
                s_switch: Some(s_switch),
                s_max: s + catenoid_s_step(n, a, tau, mid),
                h_max: (tau + mid).exp(),
            });
        }
        if tn > tau_cap {
            // axial target beyond the finite half-length
            let s_inf = sn + catenoid_tail(n, a, tn.exp());
            let requested = match *target {
                Trunc::Axial(s_half) => s_half,
                Trunc::Euclid(_) => unreachable!("euclidean target is always reachable"),
            };
            return Err(Error::BeyondHalfLength { requested, s_inf });
        }
        tau = tn;
        s = sn;
    }
}

fn catenoid_build(n: usize, h0: f64, target: Trunc, mesh: usize) -> Result<ProfileCurve> {
    check_common(n, mesh)?;
    if !(h0 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "h0",
            reason: "neck radius must be positive".into(),
        });
    }
    if let Trunc::Euclid(radius) = target {
        if !(radius > h0) {
            return Err(Error::InvalidParameter {
                name: "S",
                reason: format!("truncation radius {radius} must exceed the neck radius {h0}"),
            });
        }
    }
    if let Trunc::Axial(s_half) = target {
        if !(s_half > 0.0) {
            return Err(Error::InvalidParameter {
                name: "S",
                reason: "axial half-length must be positive".into(),
            });
        }
    }

    let a = catenoid_a(n, h0);
    let scout = catenoid_scout(n, h0, &target)?;
    let m_side = mesh.div_ceil(2);
    let eps = CATENOID_SERIES_SWITCH * h0;

    // one-sided node values of s, h, dh for s in [0, s_max]
    let mut s_nodes = Vec::with_capacity(m_side + 1);
    let mut h_nodes = Vec::with_capacity(m_side + 1);
    let mut dh_nodes = Vec::with_capacity(m_side + 1);

    // inner nodes are uniform in s; within the series neighborhood of the
    // neck the closed series is used, beyond it node-to-node RK4
    let record_inner = |s_nodes: &mut Vec<f64>,
                        h_nodes: &mut Vec<f64>,
                        dh_nodes: &mut Vec<f64>,
                        m_inner: usize,
                        s_end: f64| {
        let mut state = catenoid_series(n, h0, eps);
        let mut s_cur = eps;
        for k in 0..=m_inner {
            let sk = k as f64 / m_inner as f64 * s_end;
            let (h, dh) = if sk <= eps {
                catenoid_series(n, h0, sk)
            } else {
                state = catenoid_advance(n, a, h0, state, sk - s_cur);
                s_cur = sk;
                state
            };
            s_nodes.push(sk);
            h_nodes.push(h);
            dh_nodes.push(dh);
        }
    };

    match scout.s_switch {
        None => {
            // truncation inside the inner region: a single uniform grid in s
            record_inner(
                &mut s_nodes,
                &mut h_nodes,
                &mut dh_nodes,
                m_side,
                scout.s_max,
            );
        }
        Some(s_switch) => {
            // graded grid: uniform in s up to the switch, uniform in
            // tau = ln h beyond it
            let m_inner = (m_side / 2).max(8);
            let m_outer = m_side - m_inner;
            record_inner(&mut s_nodes, &mut h_nodes, &mut dh_nodes, m_inner, s_switch);
            // anchor the end region to the recorded junction state so both
            // integration paths pass through the identical shared node
            let h_junction = *h_nodes.last().unwrap();
            *dh_nodes.last_mut().unwrap() = catenoid_dh(n, a, h_junction);
            let tau_lo = h_junction.ln();
            let tau_hi = scout.h_max.ln();
            let mut s = s_switch;
            for k in 1..=m_outer {
                let t0 = tau_lo + (k - 1) as f64 / m_outer as f64 * (tau_hi - tau_lo);
                let t1 = tau_lo + k as f64 / m_outer as f64 * (tau_hi - tau_lo);
                s += catenoid_s_advance(n, a, t0, t1 - t0, 1e-3);
                let h = t1.exp();
                s_nodes.push(s);
                h_nodes.push(h);
                dh_nodes.push(catenoid_dh(n, a, h));
            }
        }
    }

    // even mirror about s = 0
    let side = s_nodes.len();
    let total = 2 * side - 1;
    let mut grid = vec![0.0; total];
    let mut h = vec![0.0; total];
    let mut dh = vec![0.0; total];
    for k in 0..side {
        grid[side - 1 + k] = s_nodes[k];
        grid[side - 1 - k] = -s_nodes[k];
        h[side - 1 + k] = h_nodes[k];
        h[side - 1 - k] = h_nodes[k];
        dh[side - 1 + k] = dh_nodes[k];
        dh[side - 1 - k] = -dh_nodes[k];
    }

    let s_inf = *s_nodes.last().unwrap() + catenoid_tail(n, a, *h_nodes.last().unwrap());

    let mut profile = ProfileCurve {
        n,
        grid,
        h,
        dh,
        a2: vec![0.0; total],
        sqrt_g: vec![0.0; total],
        kind: ProfileKind::Catenoid,
        params: ProfileParams::Catenoid { h0 },
        s_inf,
    };
    install_measure(&mut profile);
    second_fundamental(&mut profile);
    profile.validate()?;

    for i in 0..profile.len() {
        let hi = profile.h[i];
        let lhs = profile.dh[i] * profile.dh[i];
        let rhs = a * hi.powi(2 * (n as i32 - 1)) - 1.0;
        let scale = a * hi.powi(2 * (n as i32 - 1));
        assert!(
            (lhs - rhs).abs() <= CATENOID_IDENTITY_REL_TOL * scale,
            "catenoid identity violated at sample {i}: {lhs} vs {rhs}"
        );
    }
    Ok(profile)
}

/// Minimal n-catenoid with neck radius `h0`, truncated where the Euclidean
/// radius (h^2 + s^2)^{1/2} reaches `radius`, sampled on a graded grid with
/// about `mesh` intervals.
pub fn catenoid_profile(n: usize, h0: f64, radius: f64, mesh: usize) -> Result<ProfileCurve> {
    catenoid_build(n, h0, Trunc::Euclid(radius), mesh)
}

/// Catenoid truncated at axial coordinate `s_half` instead of a Euclidean
/// radius. Rejects requests at or beyond the finite half-length s_inf,
/// reporting the computed value.
pub fn catenoid_profile_to_s(n: usize, h0: f64, s_half: f64, mesh: usize) -> Result<ProfileCurve> {
    catenoid_build(n, h0, Trunc::Axial(s_half), mesh)
}

// ---------------------------------------------------------------------------
// Sphere
// ---------------------------------------------------------------------------

/// Round sphere of the given radius, sampled at staggered latitudes so no
/// sample sits on a pole and h > 0 everywhere.
pub fn sphere_profile(n: usize, radius: f64, mesh: usize) -> Result<ProfileCurve> {
    check_common(n, mesh)?;
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter {
            name: "radius",
            reason: "radius must be positive".into(),
        });
    }
    let total = mesh + 1;
    let mut grid = Vec::with_capacity(total);
    let mut h = Vec::with_capacity(total);
    let mut dh = Vec::with_capacity(total);
    for i in 0..total {
        let theta = (i as f64 + 0.5) * std::f64::consts::PI / total as f64;
        let (sin_t, cos_t) = theta.sin_cos();
        grid.push(-radius * cos_t);
        h.push(radius * sin_t);
        dh.push(cos_t / sin_t);
    }
    let mut profile = ProfileCurve {
        n,
        grid,
        h,
        dh,
        a2: vec![0.0; total],
        sqrt_g: vec![0.0; total],
        kind: ProfileKind::Sphere,
        params: ProfileParams::Sphere { radius },
        s_inf: radius,
    };
    install_measure(&mut profile);
    second_fundamental(&mut profile);
    profile.validate()?;
    Ok(profile)
}

// ---------------------------------------------------------------------------
// Delaunay
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct ShootState {
    /// Profile radius.
    r: f64,
    /// Axial coordinate.
    z: f64,
    /// Tangent angle against the axis; zero at necks and bulges.
    theta: f64,
}

/// Arclength derivative of the shooting state. H is the sum of principal
/// curvatures with the normal chosen so spheres have H = n / radius > 0.
fn shoot_rhs(n: usize, big_h: f64, st: ShootState) -> (f64, f64, f64) {
    (
        st.theta.sin(),
        st.theta.cos(),
        (n as f64 - 1.0) * st.theta.cos() / st.r - big_h,
    )
}

fn shoot_step(n: usize, big_h: f64, st: ShootState, dt: f64) -> ShootState {
    let f = |s: ShootState| shoot_rhs(n, big_h, s);
    let add = |s: ShootState, k: (f64, f64, f64), w: f64| ShootState {
        r: s.r + w * k.0,
        z: s.z + w * k.1,
        theta: s.theta + w * k.2,
    };
    let k1 = f(st);
    let k2 = f(add(st, k1, 0.5 * dt));
    let k3 = f(add(st, k2, 0.5 * dt));
    let k4 = f(add(st, k3, dt));
    ShootState {
        r: st.r + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        z: st.z + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        theta: st.theta + dt / 6.0 * (k1.2 + 2.0 * k2.2 + 2.0 * k3.2 + k4.2),
    }
}

/// Conserved flux of the CMC shooting system.
fn delaunay_flux(n: usize, big_h: f64, st: ShootState) -> f64 {
    st.r.powi(n as i32 - 1) * st.theta.cos() - big_h / n as f64 * st.r.powi(n as i32)
}

/// Deterministic arclength step bounded by the local curvature scale.
fn shoot_dt(n: usize, big_h: f64, st: ShootState, scale: f64) -> f64 {
    scale / ((n as f64 - 1.0) / st.r + big_h)
}

/// One period of the Delaunay unduloid with mean curvature `big_h` and neck
/// radius `neck`, sampled uniformly in the axial coordinate over
/// [-period/2, period/2] with the neck at 0 and bulges at the ends.
pub fn delaunay_profile(n: usize, big_h: f64, neck: f64, mesh: usize) -> Result<ProfileCurve> {
    delaunay_profile_with_step(n, big_h, neck, mesh, DELAUNAY_STEP_SCALE)
}

/// Same as `delaunay_profile` with an explicit shooting step scale, exposed
/// so step-halving invariance can be tested.
pub fn delaunay_profile_with_step(
    n: usize,
    big_h: f64,
    neck: f64,
    mesh: usize,
    step_scale: f64,
) -> Result<ProfileCurve> {
    check_common(n, mesh)?;
    if !(big_h > 0.0) {
        return Err(Error::InvalidParameter {
            name: "H",
            reason: "mean curvature must be positive".into(),
        });
    }
    let r_cyl = (n as f64 - 1.0) / big_h;
    if !(neck > 0.0 && neck < r_cyl) {
        return Err(Error::InvalidParameter {
            name: "neck",
            reason: format!(
                "neck radius must lie strictly between 0 and the cylinder radius {r_cyl}; \
                 larger values start at a bulge, not a neck"
            ),
        });
    }

    // scout: march from the neck to the first bulge, where theta returns to 0
    let start = ShootState {
        r: neck,
        z: 0.0,
        theta: 0.0,
    };
    let mut st = shoot_step(n, big_h, start, shoot_dt(n, big_h, start, step_scale));
    if st.theta <= 0.0 {
        return Err(Error::ShootingDiverged {
            residual: st.theta.abs(),
        });
    }
    let flux0 = delaunay_flux(n, big_h, start);
    // pointwise mean-curvature deviation: delta H = n * delta Phi / r^n,
    // evaluated where the drift actually occurred
    let deviation = |state: ShootState| {
        n as f64 * (delaunay_flux(n, big_h, state) - flux0).abs() / state.r.powi(n as i32)
    };
    let mut h_residual: f64 = 0.0;
    let bulge = loop {
        let dt = shoot_dt(n, big_h, st, step_scale);
        let next = shoot_step(n, big_h, st, dt);
        h_residual = h_residual.max(deviation(next));
        if next.theta <= 0.0 {
            let mut lo = 0.0;
            let mut hi = dt;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if shoot_step(n, big_h, st, mid).theta <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            break shoot_step(n, big_h, st, 0.5 * (lo + hi));
        }
        if next.z > 1e6 * r_cyl {
            return Err(Error::ShootingDiverged {
                residual: h_residual,
            });
        }
        st = next;
    };
    let half_period = bulge.z;

    let m_half = mesh.div_ceil(2);
    let dz = half_period / m_half as f64;
    if dz > 0.25 * neck {
        return Err(Error::InvalidParameter {
            name: "mesh",
            reason: format!(
                "axial spacing {dz} cannot resolve neck radius {neck}; \
                 refine to at least {} points",
                (8.0 * half_period / neck).ceil()
            ),
        });
    }

    // record: land on uniform axial nodes by cutting steps with Newton
    let mut z_nodes = Vec::with_capacity(m_half + 1);
    let mut h_nodes = Vec::with_capacity(m_half + 1);
    let mut dh_nodes = Vec::with_capacity(m_half + 1);
    z_nodes.push(0.0);
    h_nodes.push(neck);
    dh_nodes.push(0.0);
    let mut st = start;
    for k in 1..m_half {
        let zk = k as f64 / m_half as f64 * half_period;
        loop {
            let dt = shoot_dt(n, big_h, st, step_scale);
            let next = shoot_step(n, big_h, st, dt);
            if next.z >= zk {
                let mut cut = dt;
                for _ in 0..8 {
                    let probe = shoot_step(n, big_h, st, cut);
                    cut -= (probe.z - zk) / probe.theta.cos();
                }
                let landed = shoot_step(n, big_h, st, cut);
                h_residual = h_residual.max(deviation(landed));
                z_nodes.push(zk);
                h_nodes.push(landed.r);
                dh_nodes.push(landed.theta.tan());
                st = landed;
                break;
            }
            h_residual = h_residual.max(deviation(next));
            st = next;
        }
    }
    z_nodes.push(half_period);
    h_nodes.push(bulge.r);
    dh_nodes.push(0.0);

    if h_residual > CMC_RESIDUAL_REL_TOL * big_h.max(1.0) {
        return Err(Error::ShootingDiverged {
            residual: h_residual,
        });
    }

    // even mirror about the neck
    let side = z_nodes.len();
    let total = 2 * side - 1;
    let mut grid = vec![0.0; total];
    let mut h = vec![0.0; total];
    let mut dh = vec![0.0; total];
    for k in 0..side {
        grid[side - 1 + k] = z_nodes[k];
        grid[side - 1 - k] = -z_nodes[k];
        h[side - 1 + k] = h_nodes[k];
        h[side - 1 - k] = h_nodes[k];
        dh[side - 1 + k] = dh_nodes[k];
        dh[side - 1 - k] = -dh_nodes[k];
    }

    let mut profile = ProfileCurve {
        n,
        grid,
        h,
        dh,
        a2: vec![0.0; total],
        sqrt_g: vec![0.0; total],
        kind: ProfileKind::Delaunay,
        params: ProfileParams::Delaunay {
            mean_curvature: big_h,
            neck,
        },
        s_inf: half_period,
    };
    install_measure(&mut profile);
    second_fundamental(&mut profile);
    profile.validate()?;
    Ok(profile)
}

// ---------------------------------------------------------------------------
// Curvature data
// ---------------------------------------------------------------------------

fn install_measure(profile: &mut ProfileCurve) {
    let p = profile.n as i32 - 1;
    for i in 0..profile.len() {
        profile.sqrt_g[i] = profile.h[i].powi(p) * (1.0 + profile.dh[i] * profile.dh[i]).sqrt();
    }
}

/// Principal curvatures (rotational, axial) at sample `i`, with the normal
/// oriented so spheres have both positive.
pub fn principal_curvatures(profile: &ProfileCurve, i: usize) -> (f64, f64) {
    let nf = profile.n as f64;
    let k_rot = 1.0 / (profile.h[i] * (1.0 + profile.dh[i] * profile.dh[i]).sqrt());
    let k_ax = match profile.params {
        ProfileParams::Catenoid { .. } => -(nf - 1.0) * k_rot,
        ProfileParams::Sphere { radius } => {
            return (1.0 / radius, 1.0 / radius);
        }
        ProfileParams::Delaunay { mean_curvature, .. } => mean_curvature - (nf - 1.0) * k_rot,
    };
    (k_rot, k_ax)
}

/// Install |A|^2 = kappa_axial^2 + (n-1) kappa_rot^2 from the populated
/// h and dh samples, using each family's exact curvature structure: the
/// catenoid is minimal, the sphere umbilic, Delaunay has constant H.
pub fn second_fundamental(profile: &mut ProfileCurve) {
    let nf = profile.n as f64;
    for i in 0..profile.len() {
        let (k_rot, k_ax) = principal_curvatures(profile, i);
        profile.a2[i] = k_ax * k_ax + (nf - 1.0) * k_rot * k_rot;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catenoid_neck_values_and_evenness() {
        let p = catenoid_profile(3, 1.0, 30.0, 200).unwrap();
        let mid = p.len() / 2;
        assert_eq!(p.grid[mid], 0.0);
        assert_eq!(p.h[mid], 1.0);
        assert_eq!(p.dh[mid], 0.0);
        for k in 0..=mid {
            assert_eq!(p.grid[mid - k], -p.grid[mid + k], "grid mirror at {k}");
            assert_eq!(p.h[mid - k], p.h[mid + k], "h mirror at {k}");
            assert_eq!(p.dh[mid - k], -p.dh[mid + k], "dh mirror at {k}");
        }
        p.validate().unwrap();
    }

    #[test]
    fn catenoid_slope_at_doubled_radius() {
        // h' = (h^4 - 1)^{1/2} for n = 3, h0 = 1; at h = 2 this is sqrt(15)
        let p = catenoid_profile(3, 1.0, 30.0, 400).unwrap();
        let i = (0..p.len())
            .find(|&i| p.grid[i] > 0.0 && (p.h[i] - 2.0).abs() < 1e-10)
            .expect("grid contains the doubled-radius node");
        assert!((p.dh[i] - 15.0_f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn catenoid_neck_curvature_closed_form() {
        // |A|^2 at the neck is n(n-1)/h0^2
        for (n, h0) in [(3usize, 1.0), (4, 1.0), (3, 2.0)] {
            let p = catenoid_profile(n, h0, 20.0 * h0, 200).unwrap();
            let mid = p.len() / 2;
            let expect = (n * (n - 1)) as f64 / (h0 * h0);
            assert!(
                (p.a2[mid] - expect).abs() < 1e-12 * expect,
                "n={n} h0={h0}: {} vs {expect}",
                p.a2[mid]
            );
        }
    }

    #[test]
    fn catenoid_truncation_reaches_requested_radius() {
        let p = catenoid_profile(3, 1.0, 30.0, 500).unwrap();
        let last = p.len() - 1;
        assert!((p.euclidean_radius(last) - 30.0).abs() < 1e-8);
        assert!(p.euclidean_radius(0) >= 30.0 - 1e-8);
    }

    #[test]
    fn catenoid_axial_truncation_beyond_half_length_reports_it() {
        let err = catenoid_profile_to_s(3, 1.0, 2.0, 200).unwrap_err();
        match err {
            Error::BeyondHalfLength { requested, s_inf } => {
                assert_eq!(requested, 2.0);
                assert!((s_inf - 1.3110287771461).abs() < 1e-6, "s_inf {s_inf}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn catenoid_axial_truncation_inside_works() {
        let p = catenoid_profile_to_s(3, 1.0, 1.0, 300).unwrap();
        let last = p.len() - 1;
        // the endpoint agrees with the request to integration accuracy
        assert!((p.grid[last] - 1.0).abs() < 1e-9);
        assert!(p.s_inf > 1.3 && p.s_inf < 1.32);
    }

    #[test]
    fn sphere_curvature_is_constant() {
        let p = sphere_profile(3, 1.0, 64).unwrap();
        for &v in &p.a2 {
            assert_eq!(v, 3.0);
        }
        let q = sphere_profile(4, 2.0, 64).unwrap();
        for &v in &q.a2 {
            assert_eq!(v, 1.0);
        }
    }

    #[test]
    fn sphere_samples_lie_on_the_sphere() {
        let r = 1.7;
        let p = sphere_profile(3, r, 128).unwrap();
        for i in 0..p.len() {
            assert!((p.euclidean_radius(i) - r).abs() < 1e-12);
            // dh = -s/h on the circle h^2 + s^2 = r^2
            assert!((p.dh[i] + p.grid[i] / p.h[i]).abs() < 1e-12);
        }
        p.validate().unwrap();
    }

    #[test]
    fn delaunay_rejects_out_of_family_necks() {
        // cylinder radius for H = 3, n = 3 is 2/3
        assert!(delaunay_profile(3, 3.0, 2.0 / 3.0, 512).is_err());
        assert!(delaunay_profile(3, 3.0, 0.9, 512).is_err());
        assert!(delaunay_profile(3, 3.0, 0.0, 512).is_err());
    }

    #[test]
    fn delaunay_tiny_neck_requires_refinement() {
        let err = delaunay_profile(3, 3.0, 1e-4, 64).unwrap_err();
        match err {
            Error::InvalidParameter { name, .. } => assert_eq!(name, "mesh"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn delaunay_profile_shape() {
        let p = delaunay_profile(3, 3.0, 0.3, 512).unwrap();
        p.validate().unwrap();
        let mid = p.len() / 2;
        assert_eq!(p.h[mid], 0.3, "neck at the center");
        assert_eq!(p.dh[mid], 0.0);
        let r_max = p.h.iter().cloned().fold(0.0, f64::max);
        assert_eq!(r_max, p.h[0], "bulge at the period ends");
        assert_eq!(p.h[0], p.h[p.len() - 1]);
        // bulge sits between the cylinder and sphere radii
        assert!(r_max > 2.0 / 3.0 && r_max < 1.0, "bulge {r_max}");
        assert!(p.period() > 0.0);
    }

    #[test]
    fn delaunay_radii_stay_in_band() {
        let p = delaunay_profile(4, 2.0, 0.8, 512).unwrap();
        let r_cyl = 3.0 / 2.0;
        let r_sph = 4.0 / 2.0;
        for &h in &p.h {
            assert!(h >= 0.8 - 1e-12 && h <= r_sph, "radius {h}");
        }
        let r_max = p.h.iter().cloned().fold(0.0, f64::max);
        assert!(r_max > r_cyl, "bulge {r_max} beyond cylinder radius");
    }

    #[test]
    fn surface_spec_dispatch_and_validation() {
        let spec = SurfaceSpec {
            kind: ProfileKind::Catenoid,
            params: ProfileParams::Catenoid { h0: 1.0 },
            truncation: 20.0,
            bc: BoundaryCondition::Dirichlet,
            ricci: 0.0,
        };
        assert!(spec.build(3, 128).is_ok());

        let bad = SurfaceSpec {
            bc: BoundaryCondition::Periodic,
            ..spec
        };
        assert!(bad.build(3, 128).is_err(), "periodic requires delaunay");
    }
}
