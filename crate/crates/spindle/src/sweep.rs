//! Delaunay degeneration sweeps.
//!
//! A family of unduloids with fixed mean curvature and shrinking neck
//! radius degenerates to a chain of round spheres joined by small
//! catenoidal bubbles. The sweep counts index and nullity of each family
//! member with periodic boundary conditions, tallies the limit pieces,
//! and checks two semicontinuity inequalities on the smallest converged
//! necks: index plus nullity is bounded above by the summed index and
//! weighted nullity of the pieces, and index is bounded below by their
//! summed index.

use serde::Serialize;

use crate::profiles::{BoundaryCondition, ProfileKind, ProfileParams, SurfaceSpec};
use crate::spectral::{index_nullity, IndexReport, WeightMode};
use crate::tolerances::WEIGHTED_NULLITY_ZERO_TOL;
use crate::{Error, Result};

/// Fraction of the limit sphere radius below which a neck is rejected;
/// thinner necks drive the stiffness condition number past what the
/// eigenvalue counts can resolve in double precision.
pub const NECK_FLOOR_FRACTION: f64 = 1e-3;

/// Verdicts cover at most this many of the smallest converged necks.
pub const VERDICT_TAIL: usize = 3;

/// Parameters of one degeneration sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub n: usize,
    /// Mean curvature, sum convention, shared by the whole family.
    pub mean_curvature: f64,
    /// Neck radii, strictly decreasing, each above the conditioning floor.
    pub necks: Vec<f64>,
    /// Mesh ladder used for every neck; strictly increasing, at least two
    /// entries, with the finest pair driving the convergence flag.
    pub meshes: Vec<usize>,
    /// Zero band for eigenvalue classification; `None` selects the
    /// Richardson-calibrated automatic band per neck.
    pub zero_tol: Option<f64>,
    /// Spheres per period in the limit chain.
    pub spheres: usize,
    /// Catenoidal bubbles per period in the limit chain.
    pub bubbles: usize,
    /// Truncation radius for the limit catenoid solves; at least 40 so
    /// the weighted zero band applies.
    pub bubble_truncation: f64,
    /// Coarse and fine mesh for the limit catenoid solves.
    pub bubble_meshes: (usize, usize),
    /// Cap radius of the bubble weight.
    pub r_cap: f64,
    /// Separation scale of the bubble arrangement, recorded with the
    /// report; per-bubble counts use the single-bubble cap weight.
    pub delta: f64,
}

impl SweepConfig {
    /// Standard settings for a degeneration run: automatic zero band,
    /// meshes 2000 and 4000, one sphere and one bubble per period, cap
    /// weight at radius 4.
    pub fn baseline(n: usize, mean_curvature: f64, necks: Vec<f64>) -> Self {
        SweepConfig {
            n,
            mean_curvature,
            necks,
            meshes: vec![2000, 4000],
            zero_tol: None,
            spheres: 1,
            bubbles: 1,
            bubble_truncation: 40.0,
            bubble_meshes: (1000, 2000),
            r_cap: 4.0,
            delta: 0.1,
        }
    }

    /// Radius of the limit spheres for the family's mean curvature.
    pub fn sphere_radius(&self) -> f64 {
        self.n as f64 / self.mean_curvature
    }

    fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("dimension {} given, at least 3 required", self.n),
            });
        }
        if !(self.mean_curvature > 0.0) || !self.mean_curvature.is_finite() {
            return Err(Error::InvalidParameter {
                name: "mean_curvature",
                reason: format!(
                    "{} given, a positive finite value required",
                    self.mean_curvature
                ),
            });
        }
        if self.necks.is_empty() {
            return Err(Error::InvalidParameter {
                name: "necks",
                reason: "at least one neck radius required".into(),
            });
        }
        let floor = NECK_FLOOR_FRACTION * self.sphere_radius();
        for &neck in &self.necks {
            if !(neck >= floor) {
                return Err(Error::InvalidParameter {
                    name: "necks",
                    reason: format!("neck {neck} is below the conditioning floor {floor}"),
                });
            }
        }
        if self.necks.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::InvalidParameter {
                name: "necks",
                reason: "neck radii must be strictly decreasing".into(),
            });
        }
        if self.meshes.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "meshes",
                reason: format!("{} entries given, at least 2 required", self.meshes.len()),
            });
        }
        if self.meshes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter {
                name: "meshes",
                reason: "meshes must be strictly increasing".into(),
            });
        }
        if self.spheres == 0 {
            return Err(Error::InvalidParameter {
                name: "spheres",
                reason: "the limit chain contains at least one sphere".into(),
            });
        }
        if self.bubbles > 0 {
            if self.bubble_truncation < 40.0 {
                return Err(Error::InvalidParameter {
                    name: "bubble_truncation",
                    reason: format!(
                        "{} given, at least 40 required for the weighted zero band",
                        self.bubble_truncation
                    ),
                });
            }
            if self.bubble_meshes.0 >= self.bubble_meshes.1 {
                return Err(Error::InvalidParameter {
                    name: "bubble_meshes",
                    reason: "the coarse mesh must be strictly below the fine mesh".into(),
                });
            }
        }
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: format!("{} given, a positive finite value required", self.delta),
            });
        }
        Ok(())
    }
}

/// Index and nullity contributions of one limit piece of each kind.
///
/// Pieces absent from the chain contribute zero.
#[derive(Debug, Clone, Serialize)]
pub struct LimitModels {
    /// Index of one round CMC sphere.
    pub sphere_index: usize,
    /// Nullity of one round CMC sphere, carried by the translations.
    pub sphere_nullity: usize,
    /// Index of one catenoid bubble, computed on a truncated profile.
    pub catenoid_index: usize,
    /// Weighted nullity of one catenoid bubble under the cap weight.
    pub catenoid_weighted_nullity: usize,
}

/// Limit-piece counts for a sweep configuration.
///
/// The sphere counts are closed form: the stability operator of a round
/// sphere of radius r has eigenvalues (k(k + n - 1) - n) / r² over the
/// degree-k harmonics, so the constant is the one negative direction and
/// the degree-one harmonics span an (n + 1)-dimensional kernel. The
/// catenoid counts are solver runs on a truncated profile; counts are
/// scale invariant, so the unit-waist catenoid stands in for every
/// bubble regardless of its blow-up scale.
pub fn limit_models(config: &SweepConfig) -> Result<LimitModels> {
    let (catenoid_index, catenoid_weighted_nullity) = if config.bubbles == 0 {
        (0, 0)
    } else {
        let spec = SurfaceSpec {
            kind: ProfileKind::Catenoid,
            params: ProfileParams::Catenoid { h0: 1.0 },
            truncation: config.bubble_truncation,
            bc: BoundaryCondition::Dirichlet,
            ricci: 0.0,
        };
        let s = config.bubble_truncation;
        let ladder = [(s, config.bubble_meshes.0), (s, config.bubble_meshes.1)];
        let plain = index_nullity(config.n, &spec, &WeightMode::Unit, None, &ladder)?;
        let weighted = index_nullity(
            config.n,
            &spec,
            &WeightMode::Bubble {
                r_cap: config.r_cap,
            },
            Some(WEIGHTED_NULLITY_ZERO_TOL),
            &ladder,
        )?;
        if !plain.converged || !weighted.converged {
            return Err(Error::InvalidParameter {
                name: "bubble_meshes",
                reason: "limit catenoid counts did not converge across the mesh pair".into(),
            });
        }
        (plain.total_index, weighted.total_nullity)
    };
    Ok(LimitModels {
        sphere_index: 1,
        sphere_nullity: config.n + 1,
        catenoid_index,
        catenoid_weighted_nullity,
    })
}

/// Upper and lower tallies of a limit chain.
///
/// The upper tally sums index plus nullity over the pieces, with the
/// weighted nullity standing in for each bubble; the lower tally sums
/// the indices alone.
pub fn tallies(models: &LimitModels, spheres: usize, bubbles: usize) -> (usize, usize) {
    let upper = spheres * (models.sphere_index + models.sphere_nullity)
        + bubbles * (models.catenoid_index + models.catenoid_weighted_nullity);
    let lower = spheres * models.sphere_index + bubbles * models.catenoid_index;
    (upper, lower)
}

/// Counts for one member of the degenerating family.
#[derive(Debug, Clone, Serialize)]
pub struct NeckEntry {
    pub neck: f64,
    pub index: usize,
    pub nullity: usize,
    pub zero_tolerance: f64,
    /// Totals agreed across the two finest meshes.
    pub converged: bool,
}

/// Outcome of a degeneration sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub models: LimitModels,
    pub upper_tally: usize,
    pub lower_tally: usize,
    pub entries: Vec<NeckEntry>,
    /// Number of converged entries the verdicts cover, at most
    /// [`VERDICT_TAIL`], taken from the smallest necks.
    pub tail_size: usize,
    /// `Some(true)` when index + nullity <= upper tally across the tail;
    /// `None` when no entry converged.
    pub upper_verdict: Option<bool>,
    /// `Some(true)` when lower tally <= index across the tail; `None`
    /// when no entry converged.
    pub lower_verdict: Option<bool>,
}

/// Tail size and semicontinuity verdicts over a list of entries ordered
/// by decreasing neck.
///
/// The tail collects at most [`VERDICT_TAIL`] converged entries with the
/// smallest necks; non-converged entries never enter it. Both verdicts
/// are `None` exactly when the tail is empty.
pub fn verdicts(
    entries: &[NeckEntry],
    upper_tally: usize,
    lower_tally: usize,
) -> (usize, Option<bool>, Option<bool>) {
    let converged: Vec<&NeckEntry> = entries.iter().filter(|e| e.converged).collect();
    let tail = &converged[converged.len().saturating_sub(VERDICT_TAIL)..];
    if tail.is_empty() {
        return (0, None, None);
    }
    (
        tail.len(),
        Some(tail.iter().all(|e| e.index + e.nullity <= upper_tally)),
        Some(tail.iter().all(|e| lower_tally <= e.index)),
    )
}

/// Index and nullity of one family member with periodic boundary
/// conditions over the configured mesh ladder.
pub fn solve_neck(config: &SweepConfig, neck: f64) -> Result<IndexReport> {
    let spec = SurfaceSpec {
        kind: ProfileKind::Delaunay,
        params: ProfileParams::Delaunay {
            mean_curvature: config.mean_curvature,
            neck,
        },
        // The Delaunay builder spans one period and ignores the
        // truncation radius, which only has to be positive.
        truncation: 1.0,
        bc: BoundaryCondition::Periodic,
        ricci: 0.0,
    };
    let ladder: Vec<(f64, usize)> = config.meshes.iter().map(|&m| (1.0, m)).collect();
    index_nullity(config.n, &spec, &WeightMode::Unit, config.zero_tol, &ladder)
}

/// Run the full sweep: per-neck counts, limit tallies, and verdicts.
///
/// Necks are solved in parallel; the report lists them in the caller's
/// order. Verdicts cover the tail of at most [`VERDICT_TAIL`] smallest
/// converged necks and are withheld when nothing converged.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let models = limit_models(config)?;
    let (upper_tally, lower_tally) = tallies(&models, config.spheres, config.bubbles);

    let mut solved: Vec<Option<Result<IndexReport>>> = Vec::new();
    solved.resize_with(config.necks.len(), || None);
    std::thread::scope(|scope| {
        for (slot, &neck) in solved.iter_mut().zip(&config.necks) {
            scope.spawn(move || *slot = Some(solve_neck(config, neck)));
        }
    });

    let mut entries = Vec::with_capacity(config.necks.len());
    for (slot, &neck) in solved.into_iter().zip(&config.necks) {
        let report = slot.expect("scope joins every solver thread")?;
        entries.push(NeckEntry {
            neck,
            index: report.total_index,
            nullity: report.total_nullity,
            zero_tolerance: report.zero_tolerance,
            converged: report.converged,
        });
    }

    let (tail_size, upper_verdict, lower_verdict) = verdicts(&entries, upper_tally, lower_tally);

    Ok(SweepReport {
        config: config.clone(),
        models,
        upper_tally,
        lower_tally,
        entries,
        tail_size,
        upper_verdict,
        lower_verdict,
    })
}
