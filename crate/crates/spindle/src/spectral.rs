//! Mode decomposition of the stability operator on rotationally
//! symmetric hypersurfaces, one dimensional finite element assembly per
//! spherical-harmonic degree, and inertia counting of negative and zero
//! eigenvalues of the weighted and unweighted problems.
//!
//! The operator is L = Laplacian + |A|^2 + Ric(nu, nu). All built
//! profiles live in flat ambient space, so the Ricci term is zero in
//! [`assemble_mode`]; a nonzero constant can still be threaded through
//! [`index_nullity`] via the surface spec for experiments.

use serde::Serialize;

use crate::num::tridiag::SymTridiag;
use crate::profiles::{BoundaryCondition, ProfileCurve, ProfileKind, SurfaceSpec};
use crate::tolerances::{ZERO_TOL_FLOOR, ZERO_TOL_RICHARDSON_FACTOR};
use crate::weights::{weight_bubble, weight_sequence, Weight};
use crate::{Error, Result};

/// Gauss point offset for two-point quadrature on the unit element.
const GAUSS_OFFSET: f64 = 0.577_350_269_189_625_8;

/// Highest spherical-harmonic degree the mode enumeration will try
/// before giving up.
const MODE_CAP: usize = 64;

/// Exact binomial coefficient, small arguments only.
fn binom(a: usize, b: usize) -> usize {
    if b > a {
        return 0;
    }
    let mut res: u128 = 1;
    for i in 1..=b {
        res = res * (a - b + i) as u128 / i as u128;
    }
    res as usize
}

/// Dimension of the space of degree-l spherical harmonics on S^{n-1}.
pub fn mode_multiplicity(n: usize, l: usize) -> usize {
    assert!(n >= 3, "surface dimension must be at least 3, got {n}");
    match l {
        0 => 1,
        1 => n,
        _ => binom(n + l - 1, l) - binom(n + l - 3, l - 2),
    }
}

/// One radial Sturm-Liouville problem: the degree-l block of the
/// stability operator, discretized with linear elements on the profile
/// grid and a lumped mass matrix.
#[derive(Debug, Clone)]
pub struct ModeProblem {
    pub l: usize,
    pub multiplicity: usize,
    pub stiffness: SymTridiag,
    pub mass: Vec<f64>,
    pub bc: BoundaryCondition,
}

impl ModeProblem {
    /// Number of unknowns after boundary reduction.
    pub fn dim(&self) -> usize {
        self.stiffness.n()
    }

    /// The k smallest generalized eigenvalues, for diagnostics.
    pub fn smallest(&self, k: usize) -> Vec<f64> {
        self.stiffness
            .smallest_eigenvalues(&self.mass, k.min(self.dim()))
    }
}

fn check_bc(profile: &ProfileCurve, bc: BoundaryCondition) -> Result<()> {
    let ok = match profile.kind {
        ProfileKind::Catenoid => bc != BoundaryCondition::Periodic,
        ProfileKind::Sphere => bc == BoundaryCondition::Natural,
        ProfileKind::Delaunay => bc == BoundaryCondition::Periodic,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "bc",
            reason: format!("{bc:?} is not admissible for a {:?} profile", profile.kind),
        })
    }
}

fn assemble_with_ricci(
    profile: &ProfileCurve,
    weight: Option<&Weight>,
    l: usize,
    bc: BoundaryCondition,
    ricci: f64,
) -> Result<ModeProblem> {
    let m = profile.len();
    if m < 8 {
        return Err(Error::InvalidParameter {
            name: "profile",
            reason: format!("{m} samples are too few to assemble a mode"),
        });
    }
    if let Some(w) = weight {
        if w.len() != m {
            return Err(Error::Misaligned {
                expected: m,
                got: w.len(),
            });
        }
    }
    check_bc(profile, bc)?;

    let n = profile.n;
    let angular = (l * (l + n - 2)) as f64;
    let nodal_p: Vec<f64> = (0..m)
        .map(|i| {
            let dh = profile.dh[i];
            profile.h[i].powi(n as i32 - 1) / (1.0 + dh * dh).sqrt()
        })
        .collect();
    let omega = |i: usize| weight.map_or(1.0, |w| w.samples()[i]);

    let mut diag = vec![0.0; m];
    let mut off = vec![0.0; m - 1];
    let mut mass = vec![0.0; m];
    let ts = [0.5 * (1.0 - GAUSS_OFFSET), 0.5 * (1.0 + GAUSS_OFFSET)];
    for e in 0..m - 1 {
        let d = profile.grid[e + 1] - profile.grid[e];
        let lerp = |a: f64, b: f64, t: f64| a + (b - a) * t;
        let p_mean = 0.5
            * (lerp(nodal_p[e], nodal_p[e + 1], ts[0]) + lerp(nodal_p[e], nodal_p[e + 1], ts[1]));
        let k_grad = p_mean / d;
        let mut k00 = k_grad;
        let mut k11 = k_grad;
        let mut k01 = -k_grad;
        for &t in &ts {
            let h = lerp(profile.h[e], profile.h[e + 1], t);
            let a2 = lerp(profile.a2[e], profile.a2[e + 1], t);
            let sg = lerp(profile.sqrt_g[e], profile.sqrt_g[e + 1], t);
            let w = lerp(omega(e), omega(e + 1), t);
            let q = (angular / (h * h) - a2 - ricci) * sg;
            let half_d = 0.5 * d;
            k00 += half_d * q * (1.0 - t) * (1.0 - t);
            k11 += half_d * q * t * t;
            k01 += half_d * q * (1.0 - t) * t;
            mass[e] += half_d * w * sg * (1.0 - t);
            mass[e + 1] += half_d * w * sg * t;
        }
        diag[e] += k00;
        diag[e + 1] += k11;
        off[e] += k01;
    }

    let (stiffness, mass) = match bc {
        BoundaryCondition::Natural => (SymTridiag::new(diag, off, 0.0), mass),
        BoundaryCondition::Dirichlet => {
            let diag_r = diag[1..m - 1].to_vec();
            let off_r = off[1..m - 2].to_vec();
            let mass_r = mass[1..m - 1].to_vec();
            (SymTridiag::new(diag_r, off_r, 0.0), mass_r)
        }
        BoundaryCondition::Periodic => {
            // the last grid node repeats the first one a full period later
            let mu = m - 1;
            let mut diag_r = diag[..mu].to_vec();
            diag_r[0] += diag[mu];
            let corner = off[mu - 1];
            let off_r = off[..mu - 1].to_vec();
            let mut mass_r = mass[..mu].to_vec();
            mass_r[0] += mass[mu];
            (SymTridiag::new(diag_r, off_r, corner), mass_r)
        }
    };
    Ok(ModeProblem {
        l,
        multiplicity: mode_multiplicity(n, l),
        stiffness,
        mass,
        bc,
    })
}

/// Assemble the degree-l block of the stability operator as a
/// generalized symmetric eigenproblem K x = lambda M x.
///
/// `weight` of `None` uses the unit weight. The ambient Ricci term is
/// zero: every built profile sits in flat space.
pub fn assemble_mode(
    profile: &ProfileCurve,
    weight: Option<&Weight>,
    l: usize,
    bc: BoundaryCondition,
) -> Result<ModeProblem> {
    assemble_with_ricci(profile, weight, l, bc, 0.0)
}

/// Count eigenvalues below -zero_tol and within [-zero_tol, zero_tol].
///
/// Inertia counts are exact up to a roundoff-level band around each
/// eigenvalue; zero_tol must sit well above that band.
pub fn count_nonpositive(problem: &ModeProblem, zero_tol: f64) -> (usize, usize) {
    assert!(
        zero_tol > 0.0,
        "zero tolerance must be positive, got {zero_tol}"
    );
    let neg = problem.stiffness.count_below(&problem.mass, -zero_tol);
    let nonpos = problem.stiffness.count_below(&problem.mass, zero_tol);
    (neg, nonpos - neg)
}

/// Recipe for building a weight on whichever grid a sweep entry uses.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    Unit,
    Bubble {
        r_cap: f64,
    },
    Sequence {
        bubbles: Vec<(f64, f64)>,
        delta: f64,
        r_cap: f64,
    },
    Constant {
        c: f64,
    },
}

impl WeightMode {
    /// Build the weight on a concrete profile; `None` means unit.
    pub fn build(&self, profile: &ProfileCurve) -> Result<Option<Weight>> {
        match self {
            WeightMode::Unit => Ok(None),
            WeightMode::Bubble { r_cap } => Ok(Some(weight_bubble(profile, *r_cap)?)),
            WeightMode::Sequence {
                bubbles,
                delta,
                r_cap,
            } => Ok(Some(weight_sequence(profile, bubbles, *delta, *r_cap)?)),
            WeightMode::Constant { c } => Ok(Some(Weight::constant(profile, *c)?)),
        }
    }
}

/// Counts for one spherical-harmonic degree.
#[derive(Debug, Clone, Serialize)]
pub struct ModeCount {
    pub l: usize,
    pub multiplicity: usize,
    pub neg_count: usize,
    pub zero_count: usize,
    /// Smallest few eigenvalues, for diagnostics.
    pub smallest: Vec<f64>,
}

/// Index and nullity of a surface, reported at the finest sweep entry.
#[derive(Debug, Clone, Serialize)]
pub struct IndexReport {
    pub per_mode: Vec<ModeCount>,
    pub total_index: usize,
    pub total_nullity: usize,
    pub zero_tolerance: f64,
    pub truncation: f64,
    pub mesh: usize,
    pub boundary_condition: BoundaryCondition,
    /// Totals agree across the last two sweep entries.
    pub converged: bool,
    /// Set when a caller-supplied zero tolerance is smaller than the
    /// observed discretization error estimate.
    pub zero_tol_warning: bool,
}

struct ModeSlot {
    l: usize,
    multiplicity: usize,
    problem: ModeProblem,
    smallest: Vec<f64>,
}

/// Enumerate modes from l = 0 until two consecutive degrees have their
/// smallest eigenvalue above `stop_tol`; mode monotonicity makes every
/// later degree positive as well.
fn enumerate_modes(
    profile: &ProfileCurve,
    weight: Option<&Weight>,
    bc: BoundaryCondition,
    ricci: f64,
    stop_tol: f64,
) -> Result<Vec<ModeSlot>> {
    let mut slots = Vec::new();
    let mut consecutive_positive = 0;
    for l in 0..=MODE_CAP {
        let problem = assemble_with_ricci(profile, weight, l, bc, ricci)?;
        let smallest = problem.smallest(4);
        let lambda_min = smallest[0];
        slots.push(ModeSlot {
            l,
            multiplicity: problem.multiplicity,
            problem,
            smallest,
        });
        if lambda_min > stop_tol {
            consecutive_positive += 1;
            if consecutive_positive == 2 {
                return Ok(slots);
            }
        } else {
            consecutive_positive = 0;
        }
    }
    Err(Error::InvalidParameter {
        name: "l_max",
        reason: format!("no two consecutive positive modes up to degree {MODE_CAP}"),
    })
}

/// Morse index and nullity over a truncation and mesh sweep.
///
/// Each sweep entry (S, mesh) rebuilds the profile and weight, counts
/// per-mode negative and zero eigenvalues, and the report carries the
/// finest entry together with a convergence flag comparing the last two
/// entries. When `zero_tol` is absent, the tolerance is ten times the
/// Richardson error estimate from the two finest entries, floored.
pub fn index_nullity(
    n: usize,
    spec: &SurfaceSpec,
    weight_mode: &WeightMode,
    zero_tol: Option<f64>,
    sweep: &[(f64, usize)],
) -> Result<IndexReport> {
    if sweep.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "sweep",
            reason: format!("{} entries given, at least 2 required", sweep.len()),
        });
    }
    let stop_tol = zero_tol.unwrap_or(ZERO_TOL_FLOOR);
    let mut entries: Vec<Vec<ModeSlot>> = Vec::with_capacity(sweep.len());
    for &(s, mesh) in sweep {
        let mut spec_s = *spec;
        spec_s.truncation = s;
        let profile = spec_s.build(n, mesh)?;
        let weight = weight_mode.build(&profile)?;
        entries.push(enumerate_modes(
            &profile,
            weight.as_ref(),
            spec.bc,
            spec.ricci,
            stop_tol,
        )?);
    }

    // Discretization error estimate by Richardson comparison of the two
    // finest meshes at the final truncation. A truncation change shifts
    // eigenvalues for geometric reasons, so the comparison partner must
    // share the final S; a half-mesh rebuild fills in when the sweep
    // never repeats it.
    let &(s_last, mesh_last) = sweep.last().expect("sweep is nonempty");
    let rebuilt_coarse;
    let coarse: &[ModeSlot] = {
        let mut best: Option<(usize, usize)> = None;
        for (i, &(s, mesh)) in sweep.iter().enumerate().take(sweep.len() - 1) {
            if s == s_last && mesh < mesh_last && best.is_none_or(|(m, _)| mesh > m) {
                best = Some((mesh, i));
            }
        }
        match best {
            Some((_, i)) => &entries[i],
            None => {
                let mut spec_s = *spec;
                spec_s.truncation = s_last;
                let profile = spec_s.build(n, (mesh_last / 2).max(16))?;
                let weight = weight_mode.build(&profile)?;
                rebuilt_coarse =
                    enumerate_modes(&profile, weight.as_ref(), spec.bc, spec.ricci, stop_tol)?;
                &rebuilt_coarse
            }
        }
    };
    // The zero band has to cover the mesh drift of the eigenvalues being
    // classified, which are the ones nearest zero; the drift of a deep
    // negative eigenvalue can be orders of magnitude larger without
    // affecting any count.
    let nearest_zero = |slot: &ModeSlot| -> f64 {
        slot.smallest
            .iter()
            .copied()
            .min_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(0.0)
    };
    let estimate = {
        let fine = &entries[entries.len() - 1];
        let mut worst = 0.0_f64;
        for slot in fine {
            if let Some(other) = coarse.iter().find(|c| c.l == slot.l) {
                worst = worst.max((nearest_zero(slot) - nearest_zero(other)).abs() / 3.0);
            }
        }
        worst
    };
    let tol = match zero_tol {
        Some(t) => t,
        None => (ZERO_TOL_RICHARDSON_FACTOR * estimate).max(ZERO_TOL_FLOOR),
    };
    let zero_tol_warning = tol < estimate;

    let totals: Vec<(usize, usize)> = entries
        .iter()
        .map(|slots| {
            let mut index = 0;
            let mut nullity = 0;
            for slot in slots {
                let (neg, zero) = count_nonpositive(&slot.problem, tol);
                index += slot.multiplicity * neg;
                nullity += slot.multiplicity * zero;
            }
            (index, nullity)
        })
        .collect();
    let converged = totals[totals.len() - 1] == totals[totals.len() - 2];

    let last = entries.last().expect("sweep is nonempty");
    let per_mode: Vec<ModeCount> = last
        .iter()
        .map(|slot| {
            let (neg, zero) = count_nonpositive(&slot.problem, tol);
            ModeCount {
                l: slot.l,
                multiplicity: slot.multiplicity,
                neg_count: neg,
                zero_count: zero,
                smallest: slot.smallest.clone(),
            }
        })
        .collect();
    let (total_index, total_nullity) = totals[totals.len() - 1];
    let &(s_last, mesh_last) = sweep.last().expect("sweep is nonempty");
    Ok(IndexReport {
        per_mode,
        total_index,
        total_nullity,
        zero_tolerance: tol,
        truncation: s_last,
        mesh: mesh_last,
        boundary_condition: spec.bc,
        converged,
        zero_tol_warning,
    })
}

/// Dimensions of the nonpositive eigenspaces of the weighted and the
/// unweighted problem on the same discretization.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EquivalenceReport {
    pub dim_weighted: usize,
    pub dim_unweighted: usize,
    pub equal: bool,
}

/// Compare nonpositive eigenspace dimensions with and without a weight.
///
/// Takes the built profile rather than a spec because the weight is
/// sampled on a concrete grid. Modes are enumerated until both problems
/// show two consecutive positive degrees.
pub fn compare_weighted_unweighted(
    profile: &ProfileCurve,
    weight: &Weight,
    bc: BoundaryCondition,
    zero_tol: f64,
) -> Result<EquivalenceReport> {
    let mut dim_weighted = 0;
    let mut dim_unweighted = 0;
    let mut consecutive_positive = 0;
    for l in 0..=MODE_CAP {
        let weighted = assemble_mode(profile, Some(weight), l, bc)?;
        let unweighted = assemble_mode(profile, None, l, bc)?;
        let (wn, wz) = count_nonpositive(&weighted, zero_tol);
        let (un, uz) = count_nonpositive(&unweighted, zero_tol);
        let mult = weighted.multiplicity;
        dim_weighted += mult * (wn + wz);
        dim_unweighted += mult * (un + uz);
        let lw = weighted.smallest(1)[0];
        let lu = unweighted.smallest(1)[0];
        if lw > zero_tol && lu > zero_tol {
            consecutive_positive += 1;
            if consecutive_positive == 2 {
                return Ok(EquivalenceReport {
                    dim_weighted,
                    dim_unweighted,
                    equal: dim_weighted == dim_unweighted,
                });
            }
        } else {
            consecutive_positive = 0;
        }
    }
    Err(Error::InvalidParameter {
        name: "l_max",
        reason: format!("no two consecutive positive modes up to degree {MODE_CAP}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{catenoid_profile, delaunay_profile, sphere_profile};
    use crate::rng::SeededRng;
    use crate::weights::WeightKind;

    #[test]
    fn multiplicities_match_the_closed_forms() {
        assert_eq!(mode_multiplicity(3, 0), 1);
        assert_eq!(mode_multiplicity(3, 1), 3);
        assert_eq!(mode_multiplicity(3, 2), 5);
        assert_eq!(mode_multiplicity(3, 3), 7);
        assert_eq!(mode_multiplicity(4, 1), 4);
        assert_eq!(mode_multiplicity(4, 2), 9);
    }

    /// Exponent vectors of the degree-d monomials in n variables.
    fn monomials(n: usize, d: usize) -> Vec<Vec<usize>> {
        if n == 1 {
            return vec![vec![d]];
        }
        let mut out = Vec::new();
        for first in 0..=d {
            for mut rest in monomials(n - 1, d - first) {
                let mut v = vec![first];
                v.append(&mut rest);
                out.push(v);
            }
        }
        out
    }

    /// Rank of a small dense matrix by elimination with partial
    /// pivoting; entries are small integers so the threshold is safe.
    fn rank(mut m: Vec<Vec<f64>>) -> usize {
        let rows = m.len();
        if rows == 0 {
            return 0;
        }
        let cols = m[0].len();
        let mut r = 0;
        for c in 0..cols {
            let pivot =
                (r..rows).max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap());
            let Some(p) = pivot else { break };
            if m[p][c].abs() < 1e-9 {
                continue;
            }
            m.swap(r, p);
            for i in 0..rows {
                if i != r && m[i][c].abs() > 0.0 {
                    let f = m[i][c] / m[r][c];
                    for k in c..cols {
                        m[i][k] -= f * m[r][k];
                    }
                }
            }
            r += 1;
            if r == rows {
                break;
            }
        }
        r
    }

    #[test]
    fn multiplicity_matches_brute_force_harmonic_polynomial_dimension() {
        for &(n, l) in &[(3usize, 2usize), (3, 3), (4, 2), (4, 3)] {
            let source = monomials(n, l);
            let target = monomials(n, l - 2);
            let mut matrix = vec![vec![0.0; source.len()]; target.len()];
            for (col, alpha) in source.iter().enumerate() {
                for i in 0..n {
                    if alpha[i] >= 2 {
                        let mut beta = alpha.clone();
                        beta[i] -= 2;
                        let row = target.iter().position(|t| *t == beta).unwrap();
                        matrix[row][col] += (alpha[i] * (alpha[i] - 1)) as f64;
                    }
                }
            }
            let dim = source.len() - rank(matrix);
            assert_eq!(
                dim,
                mode_multiplicity(n, l),
                "dimension mismatch at n {n} l {l}"
            );
        }
    }

    #[test]
    fn sphere_lowest_eigenvalues_approach_the_closed_forms() {
        let p = sphere_profile(3, 1.0, 2000).unwrap();
        for l in 0..3usize {
            let prob = assemble_mode(&p, None, l, BoundaryCondition::Natural).unwrap();
            let want = (l * (l + 2)) as f64 - 3.0;
            let got = prob.smallest(1)[0];
            assert!(
                (got - want).abs() < 2e-4 * (1.0 + want.abs()),
                "l {l}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn nonnegative_potential_gives_no_nonpositive_eigenvalues() {
        let p = catenoid_profile(3, 1.0, 20.0, 600).unwrap();
        // l(l+n-2) >= n(n-1) holds from l = 2 in dimension 3
        for l in [2usize, 3] {
            let prob = assemble_mode(&p, None, l, BoundaryCondition::Dirichlet).unwrap();
            let (neg, zero) = count_nonpositive(&prob, 1e-9);
            assert_eq!((neg, zero), (0, 0), "degree {l}");
            assert!(prob.smallest(1)[0] > 0.0);
        }
    }

    #[test]
    fn inertia_count_is_monotone_in_the_shift() {
        let p = catenoid_profile(3, 1.0, 20.0, 400).unwrap();
        let prob = assemble_mode(&p, None, 0, BoundaryCondition::Dirichlet).unwrap();
        let mut prev = 0;
        for k in -8..=8 {
            let sigma = k as f64 * 0.5;
            let count = prob.stiffness.count_below(&prob.mass, sigma);
            assert!(count >= prev, "count dropped at shift {sigma}");
            prev = count;
        }
    }

    #[test]
    fn smallest_eigenvalue_increases_with_the_degree() {
        let p = catenoid_profile(3, 1.0, 20.0, 800).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for l in 0..4usize {
            let prob = assemble_mode(&p, None, l, BoundaryCondition::Dirichlet).unwrap();
            let lambda = prob.smallest(1)[0];
            assert!(lambda > prev, "degree {l}: {lambda} after {prev}");
            prev = lambda;
        }
    }

    #[test]
    fn weight_rescaling_moves_eigenvalues_but_not_counts() {
        let p = sphere_profile(3, 1.0, 1500).unwrap();
        let w1 = Weight::constant(&p, 1.0).unwrap();
        let w3 = Weight::constant(&p, 3.0).unwrap();
        let mut dims = Vec::new();
        for w in [&w1, &w3] {
            let mut index = 0;
            let mut nullity = 0;
            for l in 0..3usize {
                let prob = assemble_mode(&p, Some(w), l, BoundaryCondition::Natural).unwrap();
                let (neg, zero) = count_nonpositive(&prob, 1e-4);
                index += prob.multiplicity * neg;
                nullity += prob.multiplicity * zero;
            }
            dims.push((index, nullity));
        }
        assert_eq!(dims[0], (1, 4));
        assert_eq!(dims[1], (1, 4));
        let l0_w1 = assemble_mode(&p, Some(&w1), 0, BoundaryCondition::Natural)
            .unwrap()
            .smallest(1)[0];
        let l0_w3 = assemble_mode(&p, Some(&w3), 0, BoundaryCondition::Natural)
            .unwrap()
            .smallest(1)[0];
        assert!((l0_w3 - l0_w1 / 3.0).abs() < 1e-6 * l0_w1.abs());
    }

    #[test]
    fn lowest_catenoid_eigenvalue_converges_at_second_order() {
        let lambda = |mesh: usize| {
            let p = catenoid_profile(3, 1.0, 20.0, mesh).unwrap();
            let prob = assemble_mode(&p, None, 0, BoundaryCondition::Dirichlet).unwrap();
            prob.smallest(1)[0]
        };
        let a = lambda(500);
        let b = lambda(1000);
        let c = lambda(2000);
        let order = ((a - b).abs() / (b - c).abs()).log2();
        assert!(order >= 1.8, "observed order {order}");
    }

    #[test]
    fn negative_eigenvalue_carries_a_negative_rayleigh_certificate() {
        let p = catenoid_profile(3, 1.0, 30.0, 1200).unwrap();
        let prob = assemble_mode(&p, None, 0, BoundaryCondition::Dirichlet).unwrap();
        let lambda = prob.smallest(1)[0];
        assert!(lambda < 0.0);
        let v = prob.stiffness.eigenvector(&prob.mass, lambda);
        let quotient = prob.stiffness.rayleigh(&prob.mass, &v);
        assert!(quotient < 0.0);
        assert!((quotient - lambda).abs() < 1e-6 * lambda.abs());
    }

    #[test]
    fn periodic_assembly_identifies_the_grid_endpoints() {
        let p = delaunay_profile(3, 2.0, 0.6, 400).unwrap();
        let prob = assemble_mode(&p, None, 0, BoundaryCondition::Periodic).unwrap();
        assert_eq!(prob.dim(), p.len() - 1);
        let (neg, _) = count_nonpositive(&prob, 1e-6);
        assert!(neg >= 1, "a closed CMC surface is unstable for l = 0");
    }

    #[test]
    fn boundary_condition_admissibility_is_enforced() {
        let sphere = sphere_profile(3, 1.0, 200).unwrap();
        assert!(assemble_mode(&sphere, None, 0, BoundaryCondition::Dirichlet).is_err());
        let cat = catenoid_profile(3, 1.0, 10.0, 200).unwrap();
        assert!(assemble_mode(&cat, None, 0, BoundaryCondition::Periodic).is_err());
        let del = delaunay_profile(3, 2.0, 0.6, 300).unwrap();
        assert!(assemble_mode(&del, None, 0, BoundaryCondition::Dirichlet).is_err());
    }

    #[test]
    fn misaligned_weight_is_rejected() {
        let p = catenoid_profile(3, 1.0, 10.0, 300).unwrap();
        let other = catenoid_profile(3, 1.0, 10.0, 200).unwrap();
        let w = Weight::constant(&other, 1.0).unwrap();
        assert!(matches!(
            assemble_mode(&p, Some(&w), 0, BoundaryCondition::Dirichlet),
            Err(Error::Misaligned { .. })
        ));
    }

    #[test]
    fn index_nullity_catenoid_reports_one_and_converges() {
        let spec = SurfaceSpec {
            kind: ProfileKind::Catenoid,
            params: crate::profiles::ProfileParams::Catenoid { h0: 1.0 },
            truncation: 20.0,
            bc: BoundaryCondition::Dirichlet,
            ricci: 0.0,
        };
        let report = index_nullity(
            3,
            &spec,
            &WeightMode::Unit,
            None,
            &[(30.0, 500), (30.0, 1000)],
        )
        .unwrap();
        assert_eq!(report.total_index, 1);
        assert!(report.converged);
        assert_eq!(report.per_mode[0].neg_count, 1);
        assert!(report.zero_tolerance >= ZERO_TOL_FLOOR);
    }

    #[test]
    fn dirichlet_index_is_monotone_in_the_truncation() {
        let index_at = |s: f64| {
            let p = catenoid_profile(3, 1.0, s, 600).unwrap();
            let prob = assemble_mode(&p, None, 0, BoundaryCondition::Dirichlet).unwrap();
            let (neg, _) = count_nonpositive(&prob, 1e-8);
            neg
        };
        let small = index_at(1.2);
        let large = index_at(30.0);
        assert_eq!(small, 0, "short truncations of the neck are stable");
        assert_eq!(large, 1);
    }

    #[test]
    fn equivalence_holds_for_random_weights_on_the_sphere() {
        let p = sphere_profile(3, 1.0, 1500).unwrap();
        let mut rng = SeededRng::new(9);
        for _ in 0..3 {
            let samples: Vec<f64> = (0..p.len()).map(|_| rng.uniform_in(0.3, 3.0)).collect();
            let w = Weight::custom(&p, samples, 1.0, WeightKind::Custom).unwrap();
            let report =
                compare_weighted_unweighted(&p, &w, BoundaryCondition::Natural, 1e-4).unwrap();
            assert_eq!(report.dim_unweighted, 5);
            assert!(
                report.equal,
                "weighted {} unweighted {}",
                report.dim_weighted, 5
            );
        }
    }
}
