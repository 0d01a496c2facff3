//! Weight functions on profile grids and checks of their defining
//! bounds.
//!
//! A weight scales like an inverse squared length. The bubble weight is
//! R^{-2} inside the Euclidean ball of radius R and |x|^{-2} outside it.
//! The sequence weight takes, at every point, the largest of the
//! per-bubble values max(delta^{-2}, dist^{-2}), where dist is the
//! Euclidean distance to the bubble center, capped at (R scale)^{-2}
//! inside the bubble cap of radius R times scale. The base weight drops
//! the cap. All model surfaces live in flat ambient space, so Euclidean
//! distance stands in for ambient geodesic distance and the ambient
//! Ricci term in the curvature ratio vanishes.

use serde::Serialize;

use crate::lorentz::{lorentz_quasinorm, MeasuredSamples};
use crate::profiles::ProfileCurve;
use crate::{Error, Result};

/// Construction family of a weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    BubbleOmega,
    SequenceOmega,
    BaseOmega,
    Constant,
    Custom,
}

/// A positive weight sampled on a profile grid.
#[derive(Debug, Clone)]
pub struct Weight {
    samples: Vec<f64>,
    cap_radius: f64,
    kind: WeightKind,
    essinf: f64,
    decay: f64,
}

impl Weight {
    /// Weight values aligned with the profile grid.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Inner-cap Euclidean radius R.
    pub fn cap_radius(&self) -> f64 {
        self.cap_radius
    }

    /// Construction family.
    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    /// Positive lower bound attained over the sampled truncation.
    pub fn essinf(&self) -> f64 {
        self.essinf
    }

    /// Envelope constant L with L^{-1}|x|^{-2} <= w <= L|x|^{-2} at
    /// every sample outside the ball of radius R.
    pub fn decay(&self) -> f64 {
        self.decay
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// True when the weight holds no samples.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Constant weight c > 0 on the whole profile.
    pub fn constant(profile: &ProfileCurve, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "c",
                reason: format!("constant weight must be positive and finite, got {c}"),
            });
        }
        Self::custom(profile, vec![c; profile.len()], 1.0, WeightKind::Constant)
    }

    /// User-supplied positive samples aligned with the profile grid.
    ///
    /// The decay envelope is measured over samples outside the ball of
    /// radius `cap_radius` and equals 1 when no sample lies there.
    pub fn custom(
        profile: &ProfileCurve,
        samples: Vec<f64>,
        cap_radius: f64,
        kind: WeightKind,
    ) -> Result<Self> {
        if samples.len() != profile.len() {
            return Err(Error::Misaligned {
                expected: profile.len(),
                got: samples.len(),
            });
        }
        let mut essinf = f64::INFINITY;
        for (i, &w) in samples.iter().enumerate() {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "samples",
                    reason: format!("weight sample {w} at index {i} is not positive and finite"),
                });
            }
            essinf = essinf.min(w);
        }
        let mut decay = 1.0_f64;
        for i in 0..samples.len() {
            let x = profile.euclidean_radius(i);
            if x > cap_radius {
                let ratio = samples[i] * x * x;
                decay = decay.max(ratio).max(1.0 / ratio);
            }
        }
        Ok(Self {
            samples,
            cap_radius,
            kind,
            essinf,
            decay,
        })
    }
}

/// Bubble weight: R^{-2} inside the Euclidean ball of radius R, the
/// exact inverse square |x|^{-2} outside, continuous at the interface.
///
/// Requires R >= 1 and a profile whose truncation extends beyond R.
pub fn weight_bubble(profile: &ProfileCurve, r_cap: f64) -> Result<Weight> {
    if !(r_cap >= 1.0 && r_cap.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "R",
            reason: format!("inner-cap radius must be at least 1, got {r_cap}"),
        });
    }
    let reach = (0..profile.len())
        .map(|i| profile.euclidean_radius(i))
        .fold(0.0_f64, f64::max);
    if reach <= r_cap {
        return Err(Error::InvalidParameter {
            name: "R",
            reason: format!("inner-cap radius {r_cap} reaches past the truncation {reach}"),
        });
    }
    let samples: Vec<f64> = (0..profile.len())
        .map(|i| {
            let x = profile.euclidean_radius(i);
            if x <= r_cap {
                1.0 / (r_cap * r_cap)
            } else {
                1.0 / (x * x)
            }
        })
        .collect();
    Weight::custom(profile, samples, r_cap, WeightKind::BubbleOmega)
}

fn check_bubble_list(bubbles: &[(f64, f64)], delta: f64, r_cap: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "delta",
            reason: format!("separation scale must be positive, got {delta}"),
        });
    }
    if !(r_cap >= 1.0 && r_cap.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "R",
            reason: format!("inner-cap radius must be at least 1, got {r_cap}"),
        });
    }
    for (index, &(_, scale)) in bubbles.iter().enumerate() {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "bubble_points",
                reason: format!("bubble {index} has nonpositive scale {scale}"),
            });
        }
        let lhs = 4.0 * r_cap * scale;
        if !(lhs < delta) {
            return Err(Error::BubbleCapTooLarge { index, lhs, delta });
        }
    }
    Ok(())
}

/// Per-bubble weight at distance `dist` from the bubble center.
fn bubble_term(dist: f64, scale: f64, delta: f64, r_cap: f64) -> f64 {
    let cap = r_cap * scale;
    if dist <= cap {
        1.0 / (cap * cap)
    } else {
        (1.0 / (dist * dist)).max(1.0 / (delta * delta))
    }
}

/// Sequence weight over finitely many bubbles on the axis.
///
/// `bubble_points` holds (axial center, scale) pairs. Requires the
/// standing separation 4 R scale_j < delta for every bubble.
pub fn weight_sequence(
    base_profile: &ProfileCurve,
    bubble_points: &[(f64, f64)],
    delta: f64,
    r_cap: f64,
) -> Result<Weight> {
    check_bubble_list(bubble_points, delta, r_cap)?;
    if bubble_points.is_empty() {
        return Err(Error::InvalidParameter {
            name: "bubble_points",
            reason: "at least one bubble is required".into(),
        });
    }
    let samples: Vec<f64> = (0..base_profile.len())
        .map(|i| {
            let s = base_profile.grid[i];
            let h = base_profile.h[i];
            bubble_points
                .iter()
                .map(|&(center, scale)| {
                    let dist = (h * h + (s - center) * (s - center)).sqrt();
                    bubble_term(dist, scale, delta, r_cap)
                })
                .fold(0.0_f64, f64::max)
        })
        .collect();
    Weight::custom(base_profile, samples, r_cap, WeightKind::SequenceOmega)
}

/// Base weight max(delta^{-2}, dist^{-2}) over finitely many axial
/// points, with no inner cap.
pub fn weight_base(profile: &ProfileCurve, points: &[f64], delta: f64) -> Result<Weight> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "delta",
            reason: format!("separation scale must be positive, got {delta}"),
        });
    }
    let floor = 1.0 / (delta * delta);
    let samples: Vec<f64> = (0..profile.len())
        .map(|i| {
            let s = profile.grid[i];
            let h = profile.h[i];
            points
                .iter()
                .map(|&center| {
                    let d2 = h * h + (s - center) * (s - center);
                    (1.0 / d2).max(floor)
                })
                .fold(floor, f64::max)
        })
        .collect();
    Weight::custom(profile, samples, 1.0, WeightKind::BaseOmega)
}

/// Measured bounds a weight must satisfy: the curvature ratio
/// sup |A|^2 / w over the grid (the ambient Ricci term is zero in flat
/// space) and the Lorentz (n/2, infinity) quasinorm of the weight with
/// respect to the surface measure.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WeightBoundsReport {
    pub curvature_ratio: f64,
    pub lorentz_norm: f64,
}

/// Evaluate the defining bounds of a weight over a profile.
pub fn verify_weight_bounds(profile: &ProfileCurve, weight: &Weight) -> Result<WeightBoundsReport> {
    if weight.len() != profile.len() {
        return Err(Error::Misaligned {
            expected: profile.len(),
            got: weight.len(),
        });
    }
    let mut curvature_ratio = 0.0_f64;
    for i in 0..profile.len() {
        curvature_ratio = curvature_ratio.max(profile.a2[i] / weight.samples[i]);
    }
    let masses = profile.surface_masses();
    let positive: Vec<(f64, f64)> = weight
        .samples
        .iter()
        .zip(&masses)
        .filter(|(_, &m)| m > 0.0)
        .map(|(&v, &m)| (v, m))
        .collect();
    let f = MeasuredSamples::new(
        positive.iter().map(|x| x.0).collect(),
        positive.iter().map(|x| x.1).collect(),
    )?;
    let p = profile.n as f64 / 2.0;
    let lorentz_norm = lorentz_quasinorm(&f, p, f64::INFINITY);
    Ok(WeightBoundsReport {
        curvature_ratio,
        lorentz_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{catenoid_profile, sphere_profile, ProfileKind, ProfileParams};

    fn catenoid(mesh: usize) -> ProfileCurve {
        catenoid_profile(3, 1.0, 20.0, mesh).unwrap()
    }

    #[test]
    fn bubble_weight_matches_the_piecewise_definition() {
        let p = catenoid(400);
        let w = weight_bubble(&p, 4.0).unwrap();
        for i in 0..p.len() {
            let x = p.euclidean_radius(i);
            let want = if x <= 4.0 { 1.0 / 16.0 } else { 1.0 / (x * x) };
            assert_eq!(w.samples()[i], want);
        }
        let neck = (0..p.len()).find(|&i| p.grid[i] == 0.0).unwrap();
        assert_eq!(w.samples()[neck], 1.0 / 16.0);
        let far = (0..p.len())
            .min_by(|&i, &j| {
                let a = (p.euclidean_radius(i) - 8.0).abs();
                let b = (p.euclidean_radius(j) - 8.0).abs();
                a.partial_cmp(&b).unwrap()
            })
            .unwrap();
        assert!((w.samples()[far] - 1.0 / 64.0).abs() / (1.0 / 64.0) < 0.03);
        assert_eq!(w.kind(), WeightKind::BubbleOmega);
        assert!((w.decay() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bubble_essinf_sits_at_the_truncation_boundary() {
        let p = catenoid(400);
        let w = weight_bubble(&p, 4.0).unwrap();
        let reach = (0..p.len())
            .map(|i| p.euclidean_radius(i))
            .fold(0.0_f64, f64::max);
        assert!((w.essinf() - 1.0 / (reach * reach)).abs() < 1e-15);
        assert!(w.essinf() > 0.0);
    }

    #[test]
    fn bubble_weight_decreases_pointwise_in_the_cap_radius() {
        let p = catenoid(400);
        let w4 = weight_bubble(&p, 4.0).unwrap();
        let w6 = weight_bubble(&p, 6.0).unwrap();
        for i in 0..p.len() {
            assert!(w6.samples()[i] <= w4.samples()[i] + 1e-18);
        }
    }

    #[test]
    fn bubble_cap_beyond_truncation_is_rejected() {
        let p = catenoid(400);
        assert!(weight_bubble(&p, 25.0).is_err());
        assert!(weight_bubble(&p, 0.5).is_err());
    }

    #[test]
    fn sequence_weight_takes_the_advertised_branches() {
        let p = catenoid(800);
        // one bubble at the origin whose cap reaches past the neck
        let w = weight_sequence(&p, &[(0.0, 0.26)], 5.0, 4.0).unwrap();
        let cap = 4.0 * 0.26;
        for i in 0..p.len() {
            let dist = p.euclidean_radius(i);
            let want = if dist <= cap {
                1.0 / (cap * cap)
            } else {
                (1.0 / (dist * dist)).max(1.0 / 25.0)
            };
            assert_eq!(w.samples()[i], want);
        }
        let neck = (0..p.len()).find(|&i| p.grid[i] == 0.0).unwrap();
        assert_eq!(w.samples()[neck], 1.0 / (cap * cap));
        let far = p.len() - 1;
        assert_eq!(w.samples()[far], 1.0 / 25.0);
    }

    #[test]
    fn sequence_weight_is_the_pointwise_max_over_bubbles() {
        let p = catenoid(400);
        let delta = 5.0;
        let a = (2.0, 0.2);
        let b = (-3.0, 0.1);
        let both = weight_sequence(&p, &[a, b], delta, 4.0).unwrap();
        let only_a = weight_sequence(&p, &[a], delta, 4.0).unwrap();
        let only_b = weight_sequence(&p, &[b], delta, 4.0).unwrap();
        for i in 0..p.len() {
            assert_eq!(
                both.samples()[i],
                only_a.samples()[i].max(only_b.samples()[i])
            );
        }
    }

    #[test]
    fn oversized_bubble_cap_is_rejected_by_index() {
        let p = catenoid(400);
        let err = weight_sequence(&p, &[(0.0, 0.1), (1.0, 0.5)], 5.0, 4.0).unwrap_err();
        match err {
            Error::BubbleCapTooLarge { index, lhs, delta } => {
                assert_eq!(index, 1);
                assert!((lhs - 8.0).abs() < 1e-12);
                assert_eq!(delta, 5.0);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn sequence_weight_pulls_back_to_the_bubble_weight_under_rescaling() {
        // synthetic chart: samples placed along a ray so that rescaling
        // by the bubble scale is exact algebra
        let rho: Vec<f64> = (1..40).map(|k| 0.25 * k as f64).collect();
        let scale = 0.01;
        let delta = 0.5;
        let r_cap = 4.0;
        let chart = ProfileCurve {
            n: 3,
            grid: rho.iter().map(|&r| scale * 0.6 * r).collect(),
            h: rho.iter().map(|&r| scale * 0.8 * r).collect(),
            dh: vec![0.0; rho.len()],
            a2: vec![0.0; rho.len()],
            sqrt_g: vec![1.0; rho.len()],
            kind: ProfileKind::Catenoid,
            params: ProfileParams::Catenoid { h0: 1.0 },
            s_inf: 1.0,
        };
        let seq = weight_sequence(&chart, &[(0.0, scale)], delta, r_cap).unwrap();
        for (i, &r) in rho.iter().enumerate() {
            if scale * r > delta {
                continue;
            }
            let bubble_value = if r <= r_cap {
                1.0 / (r_cap * r_cap)
            } else {
                1.0 / (r * r)
            };
            let pulled = scale * scale * seq.samples()[i];
            assert!(
                (pulled - bubble_value).abs() <= 1e-12 * bubble_value,
                "rho {r}: pulled {pulled}, bubble {bubble_value}"
            );
        }
    }

    #[test]
    fn base_weight_floors_at_delta_and_peaks_at_the_points() {
        let p = catenoid(400);
        let w = weight_base(&p, &[0.0], 2.0).unwrap();
        for i in 0..p.len() {
            let d2 = p.h[i] * p.h[i] + p.grid[i] * p.grid[i];
            assert_eq!(w.samples()[i], (1.0 / d2).max(0.25));
        }
    }

    #[test]
    fn constant_weight_ratio_is_the_curvature_maximum() {
        let p = sphere_profile(3, 2.0, 500).unwrap();
        let w = Weight::constant(&p, 2.0).unwrap();
        let report = verify_weight_bounds(&p, &w).unwrap();
        let a2_max = p.a2.iter().fold(0.0_f64, |a, &b| a.max(b));
        assert!((report.curvature_ratio - a2_max / 2.0).abs() < 1e-12);
        assert!((a2_max - 3.0 / 4.0).abs() < 1e-12);
    }

    #[test]
    fn custom_weight_rejects_bad_samples() {
        let p = catenoid(100);
        let mut bad = vec![1.0; p.len()];
        bad[3] = 0.0;
        assert!(Weight::custom(&p, bad, 1.0, WeightKind::Custom).is_err());
        assert!(Weight::custom(&p, vec![1.0; 5], 1.0, WeightKind::Custom).is_err());
    }
}
