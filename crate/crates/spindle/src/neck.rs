//! Weighted Rayleigh quotients on graphical annuli, polynomial cutoff
//! functions, and capacity scaling of cutoff energies around a point.
//!
//! A graphical annulus is a rotationally symmetric graph over a flat
//! annulus, carrying a constant conformal factor so the metric can be
//! pushed away from the Euclidean one while its distortion stays
//! controlled. The quadratic form ∫|∇f|² − Vf² with the constraint
//! ∫f²ω = 1 decomposes over spherical-harmonic degrees into the same
//! kind of one dimensional generalized eigenproblems as the stability
//! operator; its infimum is the smallest generalized eigenvalue.

use serde::Serialize;

use crate::lorentz::{lorentz_quasinorm, MeasuredSamples};
use crate::num::ls_slope;
use crate::num::quad::integrate;
use crate::num::tridiag::SymTridiag;
use crate::profiles::unit_sphere_area;
use crate::{Error, Result};

/// Gauss point offset for two-point quadrature on the unit element.
const GAUSS_OFFSET: f64 = 0.577_350_269_189_625_8;

/// Steepest slope of the quintic cutoff profile, attained at the midpoint
/// of the transition interval.
pub const CUTOFF_SLOPE_BOUND: f64 = 1.875;

/// Rotationally symmetric graph over a flat annulus in R^n, with a
/// constant conformal factor on the graph metric, a potential, and a
/// strictly positive weight.
///
/// Invariants enforced at construction: the graphing function has
/// |u'| <= 1/2 at every node, the weight is strictly positive, and the
/// metric distortion relative to the flat annulus is recorded in
/// `distortion`.
#[derive(Debug, Clone)]
pub struct GraphAnnulus {
    /// Dimension of the graph as a hypersurface.
    pub n: usize,
    /// Radial grid, uniform and strictly increasing.
    pub r: Vec<f64>,
    /// Graph heights at the nodes.
    pub u: Vec<f64>,
    /// Radial derivative of the graph at the nodes.
    pub du: Vec<f64>,
    /// Constant conformal factor multiplying the graph metric.
    pub conformal: f64,
    /// Distortion K: (1/K)|X|^2 <= g(X,X) <= K|X|^2 at every node.
    pub distortion: f64,
    /// Potential samples at the nodes.
    pub v: Vec<f64>,
    /// Weight samples at the nodes, strictly positive.
    pub omega: Vec<f64>,
    /// L(n/2, infinity) quasi-norm of the weight in the metric volume.
    pub weight_norm: f64,
}

/// Build a [`GraphAnnulus`] on a uniform radial grid of `mesh` nodes.
///
/// `graph` returns the pair (u, u') at a radius; supplying the
/// derivative analytically keeps the gradient check free of finite
/// difference noise. `potential` and `weight` are sampled at the nodes.
#[allow(clippy::too_many_arguments)]
pub fn graph_annulus(
    n: usize,
    r_in: f64,
    r_out: f64,
    mesh: usize,
    graph: &dyn Fn(f64) -> (f64, f64),
    conformal: f64,
    potential: &dyn Fn(f64) -> f64,
    weight: &dyn Fn(f64) -> f64,
) -> Result<GraphAnnulus> {
    if n < 3 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: format!("dimension {n} is below 3"),
        });
    }
    if !(r_in > 0.0 && r_out > r_in) {
        return Err(Error::InvalidParameter {
            name: "radii",
            reason: format!("need 0 < r_in < r_out, got ({r_in}, {r_out})"),
        });
    }
    if mesh < 8 {
        return Err(Error::InvalidParameter {
            name: "mesh",
            reason: format!("{mesh} nodes are too few"),
        });
    }
    if !(conformal > 0.0 && conformal.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "conformal",
            reason: format!("factor must be positive and finite, got {conformal}"),
        });
    }

    let step = (r_out - r_in) / (mesh - 1) as f64;
    let r: Vec<f64> = (0..mesh).map(|i| r_in + i as f64 * step).collect();
    let mut u = Vec::with_capacity(mesh);
    let mut du = Vec::with_capacity(mesh);
    let mut v = Vec::with_capacity(mesh);
    let mut omega = Vec::with_capacity(mesh);
    for &ri in &r {
        let (ui, dui) = graph(ri);
        if dui.abs() > 0.5 + 1e-12 {
            return Err(Error::InvalidParameter {
                name: "graph",
                reason: format!("|u'| = {} at r = {ri} exceeds 1/2", dui.abs()),
            });
        }
        let vi = potential(ri);
        let wi = weight(ri);
        if !vi.is_finite() {
            return Err(Error::InvalidParameter {
                name: "potential",
                reason: format!("non-finite value at r = {ri}"),
            });
        }
        if !(wi > 0.0 && wi.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "weight",
                reason: format!("weight must be strictly positive, got {wi} at r = {ri}"),
            });
        }
        u.push(ui);
        du.push(dui);
        v.push(vi);
        omega.push(wi);
    }

    // Metric eigenvalues relative to the flat annulus are c(1 + u'^2)
    // radially and c angularly, so both bounds reduce to these factors.
    let fac_max = du.iter().fold(1.0_f64, |m, d| m.max(1.0 + d * d));
    let distortion = (conformal * fac_max).max(1.0 / conformal).max(1.0);

    let area = unit_sphere_area(n);
    let cv = conformal.powf(n as f64 / 2.0);
    let mut masses = vec![0.0; mesh];
    for e in 0..mesh - 1 {
        let half = 0.5 * (r[e + 1] - r[e]);
        for i in [e, e + 1] {
            let dens = cv * r[i].powi(n as i32 - 1) * (1.0 + du[i] * du[i]).sqrt();
            masses[i] += half * dens * area;
        }
    }
    let samples = MeasuredSamples::new(omega.clone(), masses)?;
    let weight_norm = lorentz_quasinorm(&samples, n as f64 / 2.0, f64::INFINITY);

    Ok(GraphAnnulus {
        n,
        r,
        u,
        du,
        conformal,
        distortion,
        v,
        omega,
        weight_norm,
    })
}

impl GraphAnnulus {
    /// Number of radial nodes.
    pub fn len(&self) -> usize {
        self.r.len()
    }

    /// True when the annulus has no nodes; never holds for built annuli.
    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Copy of the annulus with the potential replaced by `eps` times
    /// the weight.
    pub fn potential_from_weight(&self, eps: f64) -> GraphAnnulus {
        let mut out = self.clone();
        out.v = self.omega.iter().map(|w| eps * w).collect();
        out
    }
}

/// Assemble the degree-l block of the quadratic form as a generalized
/// eigenproblem with Dirichlet conditions on both circles.
fn assemble_mode(a: &GraphAnnulus, l: usize) -> (SymTridiag, Vec<f64>) {
    let m = a.len();
    let n = a.n;
    let angular = (l * (l + n - 2)) as f64;
    let cg = a.conformal.powf(n as f64 / 2.0 - 1.0);
    let cv = a.conformal.powf(n as f64 / 2.0);

    let mut nodal_p = Vec::with_capacity(m);
    let mut nodal_q = Vec::with_capacity(m);
    let mut nodal_w = Vec::with_capacity(m);
    for i in 0..m {
        let ri = a.r[i];
        let slope = (1.0 + a.du[i] * a.du[i]).sqrt();
        let rpow = ri.powi(n as i32 - 1);
        nodal_p.push(cg * rpow / slope);
        nodal_q.push(angular * cg * ri.powi(n as i32 - 3) * slope - a.v[i] * cv * rpow * slope);
        nodal_w.push(a.omega[i] * cv * rpow * slope);
    }

    let mut diag = vec![0.0; m];
    let mut off = vec![0.0; m - 1];
    let mut mass = vec![0.0; m];
    let ts = [0.5 * (1.0 - GAUSS_OFFSET), 0.5 * (1.0 + GAUSS_OFFSET)];
    for e in 0..m - 1 {
        let d = a.r[e + 1] - a.r[e];
        let lerp = |x: f64, y: f64, t: f64| x + (y - x) * t;
        let p_mean = 0.5
            * (lerp(nodal_p[e], nodal_p[e + 1], ts[0]) + lerp(nodal_p[e], nodal_p[e + 1], ts[1]));
        let k_grad = p_mean / d;
        let mut k00 = k_grad;
        let mut k11 = k_grad;
        let mut k01 = -k_grad;
        for &t in &ts {
            let q = lerp(nodal_q[e], nodal_q[e + 1], t);
            let w = lerp(nodal_w[e], nodal_w[e + 1], t);
            let half_d = 0.5 * d;
            k00 += half_d * q * (1.0 - t) * (1.0 - t);
            k11 += half_d * q * t * t;
            k01 += half_d * q * (1.0 - t) * t;
            mass[e] += half_d * w * (1.0 - t);
            mass[e + 1] += half_d * w * t;
        }
        diag[e] += k00;
        diag[e + 1] += k11;
        off[e] += k01;
    }

    let diag_r = diag[1..m - 1].to_vec();
    let off_r = off[1..m - 2].to_vec();
    let mass_r = mass[1..m - 1].to_vec();
    (SymTridiag::new(diag_r, off_r, 0.0), mass_r)
}

/// Infimum of the quotient (∫|∇f|² − Vf²) / ∫f²ω over the degree-l
/// rotational component, functions vanishing on both boundary circles.
pub fn mode_infimum(annulus: &GraphAnnulus, l: usize) -> Result<f64> {
    let (stiffness, mass) = assemble_mode(annulus, l);
    Ok(stiffness.smallest_eigenvalues(&mass, 1)[0])
}

/// Minimum of [`mode_infimum`] over degrees 0..=modes.
///
/// The angular term is nonnegative and grows with the degree, so the
/// minimum always sits at degree zero; the range is swept anyway so the
/// monotonicity is verified rather than assumed.
pub fn rayleigh_infimum(annulus: &GraphAnnulus, modes: usize) -> Result<f64> {
    if modes > 64 {
        return Err(Error::InvalidParameter {
            name: "modes",
            reason: format!("{modes} angular degrees requested, cap is 64"),
        });
    }
    let mut best = f64::INFINITY;
    for l in 0..=modes {
        best = best.min(mode_infimum(annulus, l)?);
    }
    Ok(best)
}

/// Cutoff profile equal to 1 below its inner radius and 0 beyond twice
/// that radius, interpolated by a quintic with slope in
/// [-CUTOFF_SLOPE_BOUND, 0] on the unit-scale transition.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Cutoff {
    scale: f64,
}

fn chi(t: f64) -> f64 {
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        let x = t - 1.0;
        1.0 - x * x * x * (10.0 - 15.0 * x + 6.0 * x * x)
    }
}

fn chi_prime(t: f64) -> f64 {
    if !(1.0..2.0).contains(&t) {
        0.0
    } else {
        let x = t - 1.0;
        -30.0 * x * x * (1.0 - x) * (1.0 - x)
    }
}

/// Build the cutoff that is 1 inside `inner_radius` and 0 outside twice
/// `inner_radius`.
pub fn build_cutoff(inner_radius: f64) -> Result<Cutoff> {
    if !(inner_radius > 0.0 && inner_radius.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "inner_radius",
            reason: format!("must be positive and finite, got {inner_radius}"),
        });
    }
    Ok(Cutoff {
        scale: inner_radius,
    })
}

impl Cutoff {
    /// Inner radius of the scaled cutoff.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Cutoff value at distance `d` from the marked point.
    pub fn value(&self, d: f64) -> f64 {
        chi(d / self.scale)
    }

    /// Radial derivative of the scaled cutoff at distance `d`.
    pub fn slope(&self, d: f64) -> f64 {
        chi_prime(d / self.scale) / self.scale
    }

    /// Largest magnitude the scaled slope can attain.
    pub fn slope_bound(&self) -> f64 {
        CUTOFF_SLOPE_BOUND / self.scale
    }
}

/// Rotationally symmetric ambient space around a marked point: flat, or
/// a round sphere of the stated radius with geodesic polar coordinates.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityDomain {
    Flat { n: usize },
    Sphere { n: usize, radius: f64 },
}

impl CapacityDomain {
    fn dimension(&self) -> usize {
        match *self {
            CapacityDomain::Flat { n } => n,
            CapacityDomain::Sphere { n, .. } => n,
        }
    }
}

/// Dirichlet energy ∫|∇χ_ε|² of the cutoff that removes a ball of
/// radius `epsilon` around the marked point.
pub fn cutoff_energy(domain: &CapacityDomain, epsilon: f64) -> Result<f64> {
    let n = domain.dimension();
    if n < 3 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: format!("capacity scaling needs dimension at least 3, got {n}"),
        });
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: format!("must be positive and finite, got {epsilon}"),
        });
    }
    let cutoff = build_cutoff(epsilon)?;
    let area = unit_sphere_area(n);
    let energy = match *domain {
        CapacityDomain::Flat { .. } => {
            let f = |r: f64| {
                let s = cutoff.slope(r);
                s * s * r.powi(n as i32 - 1)
            };
            integrate(&f, epsilon, 2.0 * epsilon, 1e-13) * area
        }
        CapacityDomain::Sphere { radius, .. } => {
            if !(radius > 0.0 && radius.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "radius",
                    reason: format!("must be positive and finite, got {radius}"),
                });
            }
            // The transition shell must stay inside a geodesic ball well
            // clear of the equator at rho = pi r / 2.
            if 2.0 * epsilon > 0.5 * std::f64::consts::PI * radius {
                return Err(Error::InvalidParameter {
                    name: "epsilon",
                    reason: format!(
                        "shell radius {} leaves the polar cap of the sphere of radius {radius}",
                        2.0 * epsilon
                    ),
                });
            }
            let f = |rho: f64| {
                let s = cutoff.slope(rho);
                s * s * (radius * (rho / radius).sin()).powi(n as i32 - 1)
            };
            integrate(&f, epsilon, 2.0 * epsilon, 1e-13) * area
        }
    };
    Ok(energy)
}

/// Cutoff energies over a sweep of removal radii, with the fitted
/// log-log exponent.
#[derive(Debug, Clone, Serialize)]
pub struct CapacityReport {
    pub domain: CapacityDomain,
    /// Pairs (epsilon, energy).
    pub rows: Vec<(f64, f64)>,
    /// Least squares slope of log energy against log epsilon.
    pub fitted_exponent: f64,
}

/// Sweep cutoff energies across `epsilons` and fit the scaling exponent.
pub fn capacity_estimate(domain: &CapacityDomain, epsilons: &[f64]) -> Result<CapacityReport> {
    if epsilons.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "epsilons",
            reason: format!("{} radii given, at least 2 required", epsilons.len()),
        });
    }
    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        rows.push((eps, cutoff_energy(domain, eps)?));
    }
    let log_e: Vec<f64> = rows.iter().map(|r| r.0.ln()).collect();
    let log_v: Vec<f64> = rows.iter().map(|r| r.1.ln()).collect();
    let fitted_exponent = ls_slope(&log_e, &log_v);
    Ok(CapacityReport {
        domain: *domain,
        rows,
        fitted_exponent,
    })
}

/// Calibration result: the largest potential scale that keeps every
/// battery case strictly stable, with the bracketing evidence.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    /// Largest scale eps with all infima positive for V = eps * omega.
    pub threshold: f64,
    /// Smallest scale found with some infimum nonpositive.
    pub bracket_upper: f64,
    /// Minimum infimum across the battery at the threshold.
    pub floor: f64,
    /// Per-case infima at the threshold.
    pub infima: Vec<f64>,
    /// Highest angular degree swept per case.
    pub modes: usize,
}

/// Per-case Rayleigh infima of a battery under the potential V = eps * omega.
pub fn battery_infima(cases: &[GraphAnnulus], eps: f64, modes: usize) -> Result<Vec<f64>> {
    cases
        .iter()
        .map(|c| rayleigh_infimum(&c.potential_from_weight(eps), modes))
        .collect()
}

/// Find by bisection the largest eps such that every case of the battery
/// stays strictly stable under the potential V = eps * omega.
///
/// The quotient is monotone non-increasing in the potential, so
/// feasibility is monotone in eps and bisection is justified. The
/// returned bracket satisfies bracket_upper - threshold <=
/// rel_tol * bracket_upper.
pub fn calibrate_threshold(
    cases: &[GraphAnnulus],
    modes: usize,
    rel_tol: f64,
) -> Result<ThresholdReport> {
    if cases.is_empty() {
        return Err(Error::InvalidParameter {
            name: "cases",
            reason: "empty battery".into(),
        });
    }
    if !(rel_tol > 0.0 && rel_tol < 0.5) {
        return Err(Error::InvalidParameter {
            name: "rel_tol",
            reason: format!("must lie in (0, 0.5), got {rel_tol}"),
        });
    }

    let feasible = |eps: f64| -> Result<bool> {
        Ok(battery_infima(cases, eps, modes)?.iter().all(|&v| v > 0.0))
    };

    let mut lo;
    let mut hi;
    if feasible(1.0)? {
        lo = 1.0;
        hi = 2.0;
        let mut guard = 0;
        while feasible(hi)? {
            lo = hi;
            hi *= 2.0;
            guard += 1;
            if guard > 60 {
                return Err(Error::InvalidParameter {
                    name: "cases",
                    reason: "no potential scale destabilizes the battery".into(),
                });
            }
        }
    } else {
        hi = 1.0;
        lo = 0.5;
        let mut guard = 0;
        while !feasible(lo)? {
            hi = lo;
            lo *= 0.5;
            guard += 1;
            if guard > 60 {
                return Err(Error::InvalidParameter {
                    name: "cases",
                    reason: "battery is unstable at every potential scale".into(),
                });
            }
        }
    }

    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let infima = battery_infima(cases, lo, modes)?;
    let floor = infima.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    Ok(ThresholdReport {
        threshold: lo,
        bracket_upper: hi,
        floor,
        infima,
        modes,
    })
}

/// Deterministic 20-case battery over both dimensions: two annulus
/// shapes and a thin one, flat and rippled and tilted and bumped graphs,
/// conformal factors keeping the distortion at or below 2, and constant,
/// inverse square, and mixed weights.
pub fn standard_battery(mesh: usize) -> Result<Vec<GraphAnnulus>> {
    // (r_in, r_out, graph id, conformal, weight id)
    let rows: [(f64, f64, usize, f64, usize); 10] = [
        (0.5, 2.0, 0, 1.0, 0),
        (0.5, 2.0, 1, 1.3, 1),
        (0.5, 2.0, 2, 1.55, 0),
        (0.5, 2.0, 3, 1.0, 2),
        (1.0, 4.0, 0, 1.3, 1),
        (1.0, 4.0, 1, 1.55, 0),
        (1.0, 4.0, 2, 1.0, 1),
        (1.0, 4.0, 3, 1.3, 2),
        (0.25, 1.0, 0, 1.55, 1),
        (0.25, 1.0, 1, 1.0, 0),
    ];
    let mut out = Vec::with_capacity(20);
    for n in [3usize, 4] {
        for &(r_in, r_out, graph_id, conformal, weight_id) in &rows {
            let span = r_out - r_in;
            let graph = move |r: f64| -> (f64, f64) {
                match graph_id {
                    0 => (0.0, 0.0),
                    1 => {
                        let k = 1.5;
                        (0.3 * (k * (r - r_in)).sin(), 0.45 * (k * (r - r_in)).cos())
                    }
                    2 => (0.45 * (r - r_in), 0.45),
                    _ => {
                        let amp = 0.45 * span / std::f64::consts::PI;
                        let arg = std::f64::consts::PI * (r - r_in) / span;
                        (amp * arg.sin() * arg.sin(), 0.45 * (2.0 * arg).sin())
                    }
                }
            };
            let weight = move |r: f64| -> f64 {
                match weight_id {
                    0 => 1.0,
                    1 => 1.0 / (r * r),
                    _ => 0.5 + 1.0 / (r * r),
                }
            };
            out.push(graph_annulus(
                n,
                r_in,
                r_out,
                mesh,
                &graph,
                conformal,
                &|_| 0.0,
                &weight,
            )?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    use std::f64::consts::PI;

    fn flat_unit_case(n: usize, mesh: usize) -> GraphAnnulus {
        graph_annulus(n, 0.5, 2.0, mesh, &|_| (0.0, 0.0), 1.0, &|_| 0.0, &|_| 1.0).unwrap()
    }

    #[test]
    fn cutoff_meets_the_printed_constraints() {
        let c = build_cutoff(1.0).unwrap();
        assert_eq!(c.value(0.5), 1.0);
        assert_eq!(c.value(1.0), 1.0);
        assert_eq!(c.value(2.0), 0.0);
        assert_eq!(c.value(3.0), 0.0);
        assert!((c.value(1.5) - 0.5).abs() <= 1e-15);

        let mut min_slope = 0.0_f64;
        let mut last = c.value(0.0);
        for i in 1..=3000 {
            let t = 3.0 * i as f64 / 3000.0;
            let val = c.value(t);
            assert!(val <= last + 1e-15, "cutoff must be non-increasing");
            last = val;
            let s = c.slope(t);
            assert!(s <= 0.0);
            min_slope = min_slope.min(s);
        }
        assert!(min_slope >= -CUTOFF_SLOPE_BOUND - 1e-12);
        assert!(min_slope >= -3.0);
        assert!(min_slope <= -1.8, "steepest slope {min_slope}");
    }

    #[test]
    fn scaled_cutoff_localizes_between_its_radii() {
        let eps = 0.3;
        let c = build_cutoff(eps).unwrap();
        assert_eq!(c.value(0.29), 1.0);
        assert_eq!(c.value(0.61), 0.0);
        let mid = c.value(0.45);
        assert!(mid > 0.0 && mid < 1.0);
        assert!((c.slope_bound() - CUTOFF_SLOPE_BOUND / eps).abs() <= 1e-12);

        // The analytic slope must match a central difference of the value.
        for d in [0.33, 0.45, 0.58] {
            let h = 1e-6;
            let fd = (c.value(d + h) - c.value(d - h)) / (2.0 * h);
            assert!(
                (c.slope(d) - fd).abs() <= 1e-6 * (1.0 + fd.abs()),
                "slope mismatch at {d}: {} vs {fd}",
                c.slope(d)
            );
        }
    }

    /// For n = 3, no graph, no potential, unit weight, the substitution
    /// f = y / r turns the radial problem into y'' + lambda y = 0 with
    /// Dirichlet ends, so the infimum is exactly (pi / L)^2.
    #[test]
    fn flat_annulus_with_no_potential_matches_the_interval_oracle() {
        let a = flat_unit_case(3, 400);
        let inf = rayleigh_infimum(&a, 3).unwrap();
        let want = (PI / 1.5) * (PI / 1.5);
        assert!(inf > 0.0);
        assert!((inf - want).abs() <= 1e-3 * want, "infimum {inf} vs {want}");

        // Any admissible discrete vector bounds the infimum from above.
        let (stiffness, mass) = assemble_mode(&a, 0);
        let dim = stiffness.n();
        let mut hat = vec![0.0; dim];
        hat[dim / 2] = 1.0;
        assert!(inf <= stiffness.rayleigh(&mass, &hat) + 1e-12);
    }

    #[test]
    fn strong_potentials_drive_the_quotient_negative() {
        let a = flat_unit_case(3, 400).potential_from_weight(10.0);
        assert!(rayleigh_infimum(&a, 2).unwrap() < 0.0);
    }

    #[test]
    fn rayleigh_infimum_is_monotone_in_the_potential() {
        let base = flat_unit_case(4, 300);
        let mut last = f64::INFINITY;
        for eps in [0.0, 1.0, 2.0, 4.0] {
            let inf = rayleigh_infimum(&base.potential_from_weight(eps), 1).unwrap();
            assert!(
                inf < last,
                "infimum must strictly decrease, got {inf} after {last}"
            );
            last = inf;
        }
    }

    #[test]
    fn mode_infima_increase_with_the_angular_degree() {
        let a = graph_annulus(
            3,
            1.0,
            4.0,
            300,
            &|r: f64| {
                (
                    0.3 * (1.5 * (r - 1.0)).sin(),
                    0.45 * (1.5 * (r - 1.0)).cos(),
                )
            },
            1.3,
            &|_| 0.2,
            &|r: f64| 1.0 / (r * r),
        )
        .unwrap();
        let mut last = f64::NEG_INFINITY;
        for l in 0..=4 {
            let inf = mode_infimum(&a, l).unwrap();
            assert!(inf > last, "degree {l} infimum {inf} after {last}");
            last = inf;
        }
    }

    /// Scaling the annulus by 2 while scaling potential and weight by
    /// 1/4 multiplies stiffness and mass entries by the same power of
    /// the scale, so the infimum is unchanged.
    #[test]
    fn infimum_is_invariant_under_the_scaling_symmetry() {
        for n in [3usize, 4] {
            let graph = |r: f64| {
                (
                    0.3 * (1.5 * (r - 0.5)).sin(),
                    0.45 * (1.5 * (r - 0.5)).cos(),
                )
            };
            let base = graph_annulus(
                n,
                0.5,
                2.0,
                300,
                &graph,
                1.3,
                &|r: f64| 0.4 / (r * r),
                &|r: f64| 1.0 / (r * r),
            )
            .unwrap();
            let scaled = graph_annulus(
                n,
                1.0,
                4.0,
                300,
                &|r: f64| {
                    let (u, du) = graph(r / 2.0);
                    (2.0 * u, du)
                },
                1.3,
                &|r: f64| 0.1 / ((r / 2.0) * (r / 2.0)),
                &|r: f64| 0.25 / ((r / 2.0) * (r / 2.0)),
            )
            .unwrap();
            for l in [0usize, 1] {
                let a = mode_infimum(&base, l).unwrap();
                let b = mode_infimum(&scaled, l).unwrap();
                assert!(
                    (a - b).abs() <= 1e-12 * a.abs().max(1.0),
                    "n = {n}, l = {l}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn standard_battery_satisfies_the_lemma_hypotheses() {
        let battery = standard_battery(200).unwrap();
        assert_eq!(battery.len(), 20);
        assert_eq!(battery.iter().filter(|c| c.n == 3).count(), 10);
        assert_eq!(battery.iter().filter(|c| c.n == 4).count(), 10);
        for case in &battery {
            assert!(case.distortion <= 2.0, "distortion {}", case.distortion);
            assert!(case.distortion >= 1.0);
            assert!(case.du.iter().all(|d| d.abs() <= 0.5 + 1e-12));
            assert!(case.omega.iter().all(|w| *w > 0.0));
            assert!(case.weight_norm.is_finite() && case.weight_norm > 0.0);
            assert!(case.v.iter().all(|v| *v == 0.0));
        }
    }

    /// Flat-space cutoff energies have the closed forms
    /// 4 pi (250/77) eps in dimension 3 and 2 pi^2 (765/154) eps^2 in
    /// dimension 4, from integrating the squared quintic slope against
    /// the shell volume.
    #[test]
    fn flat_capacity_energy_matches_the_closed_form() {
        for eps in [0.05, 0.2] {
            let e3 = cutoff_energy(&CapacityDomain::Flat { n: 3 }, eps).unwrap();
            let want3 = 4.0 * PI * (250.0 / 77.0) * eps;
            assert!((e3 - want3).abs() <= 1e-9 * want3, "{e3} vs {want3}");

            let e4 = cutoff_energy(&CapacityDomain::Flat { n: 4 }, eps).unwrap();
            let want4 = 2.0 * PI * PI * (765.0 / 154.0) * eps * eps;
            assert!((e4 - want4).abs() <= 1e-9 * want4, "{e4} vs {want4}");
        }
    }

    #[test]
    fn capacity_exponent_matches_the_dimension() {
        let epsilons = [0.025, 0.05, 0.1];
        for n in [3usize, 4] {
            let flat = capacity_estimate(&CapacityDomain::Flat { n }, &epsilons).unwrap();
            let want = n as f64 - 2.0;
            assert!(
                (flat.fitted_exponent - want).abs() <= 1e-9,
                "flat n = {n}: exponent {}",
                flat.fitted_exponent
            );

            let dome = CapacityDomain::Sphere { n, radius: 1.0 };
            let sphere = capacity_estimate(&dome, &epsilons).unwrap();
            assert!(
                (sphere.fitted_exponent - want).abs() <= 0.2,
                "sphere n = {n}: exponent {}",
                sphere.fitted_exponent
            );
            for (k, row) in sphere.rows.iter().enumerate() {
                assert!(row.1 < flat.rows[k].1, "curvature must shrink the shell");
            }
        }
    }

    #[test]
    fn calibrated_threshold_brackets_the_sign_change() {
        let battery: Vec<GraphAnnulus> =
            standard_battery(120).unwrap().into_iter().take(4).collect();
        let report = calibrate_threshold(&battery, 1, 1e-2).unwrap();
        assert!(report.threshold > 0.0);
        assert!(report.bracket_upper > report.threshold);
        assert!(report.bracket_upper - report.threshold <= 1e-2 * report.bracket_upper + 1e-12);
        assert_eq!(report.infima.len(), 4);
        assert!(report.infima.iter().all(|v| *v > 0.0));
        assert!(report.floor > 0.0);
        let beyond = battery_infima(&battery, report.bracket_upper, 1).unwrap();
        assert!(beyond.iter().any(|v| *v <= 0.0));
    }
}
