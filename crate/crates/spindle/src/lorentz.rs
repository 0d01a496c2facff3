//! Decreasing rearrangements and Lorentz quasinorms on finite measure
//! spaces.
//!
//! A function is held as finitely many `(value, mass)` samples. Its
//! decreasing rearrangement is then a step function with finitely many
//! levels, and every quasinorm below evaluates in closed form, so checks
//! against these routines compare at roundoff tolerance rather than
//! quadrature tolerance.
//!
//! Supported exponent range: `p` in (1, inf) and `q` in (0, inf]. The
//! secondary exponent is normally at least 1; values below 1 arise only
//! through [`power_identity_check`], which divides `q` by the power.
//! The quasinorm is not renormalized to a Banach norm. Callers that need
//! sum or maximum bounds apply the comparison factor p/(p-1) from
//! [`quasinorm_triangle_factor`] instead.

use crate::rng::SeededRng;
use crate::{Error, Result};

/// A nonnegative function on a finite measure space, stored as samples.
///
/// Sample `i` takes value `values[i]` on a set of measure `masses[i]`.
/// Values are finite and nonnegative, masses are finite and strictly
/// positive, and the two arrays have equal nonzero length.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredSamples {
    values: Vec<f64>,
    masses: Vec<f64>,
}

impl MeasuredSamples {
    /// Validates and wraps a sample decomposition.
    pub fn new(values: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if values.len() != masses.len() {
            return Err(Error::Misaligned {
                expected: values.len(),
                got: masses.len(),
            });
        }
        if values.is_empty() {
            return Err(Error::InvalidParameter {
                name: "values",
                reason: "at least one sample is required".into(),
            });
        }
        for &v in &values {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter {
                    name: "values",
                    reason: format!("sample value {v} is not finite and nonnegative"),
                });
            }
        }
        for &m in &masses {
            if !m.is_finite() || m <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: "masses",
                    reason: format!("sample mass {m} is not finite and positive"),
                });
            }
        }
        Ok(Self { values, masses })
    }

    /// Indicator of a set with the given measure.
    pub fn indicator(mass: f64) -> Result<Self> {
        Self::new(vec![1.0], vec![mass])
    }

    /// Sample values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sample masses.
    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when the decomposition has no samples. Construction rejects
    /// this, so the answer is always false for validated data.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Total measure of the underlying space.
    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Same decomposition with every value scaled by `c >= 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.values.iter().map(|v| c * v).collect(),
            self.masses.clone(),
        )
    }

    /// Same decomposition with every value raised to the power `gamma > 0`.
    pub fn powered(&self, gamma: f64) -> Result<Self> {
        Self::new(
            self.values.iter().map(|v| v.powf(gamma)).collect(),
            self.masses.clone(),
        )
    }
}

/// A right-continuous decreasing step function on `[0, span)`.
///
/// Level `levels[i]` holds on `[breakpoints[i-1], breakpoints[i])` with an
/// implicit leading breakpoint at 0. Breakpoints are strictly increasing,
/// levels are strictly decreasing, and the final breakpoint equals the
/// total mass of the samples the step was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct DecreasingStep {
    breakpoints: Vec<f64>,
    levels: Vec<f64>,
}

impl DecreasingStep {
    /// Right endpoints of the constant pieces.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Values of the constant pieces, strictly decreasing.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Total length of the support interval, including any zero level.
    pub fn span(&self) -> f64 {
        *self
            .breakpoints
            .last()
            .expect("a step has at least one piece")
    }

    /// Measure of the superlevel set where the step exceeds `s`.
    pub fn distribution_at(&self, s: f64) -> f64 {
        let mut mass = 0.0;
        for i in 0..self.levels.len() {
            if self.levels[i] > s {
                mass = self.breakpoints[i];
            }
        }
        mass
    }

    /// The step viewed as one sample per constant piece.
    pub fn as_samples(&self) -> MeasuredSamples {
        let mut prev = 0.0;
        let mut masses = Vec::with_capacity(self.levels.len());
        for &t in &self.breakpoints {
            masses.push(t - prev);
            prev = t;
        }
        MeasuredSamples::new(self.levels.clone(), masses).expect("step pieces form valid samples")
    }
}

/// Indices of `f` sorted by strictly decreasing value, stable under ties.
fn descending_order(f: &MeasuredSamples) -> Vec<usize> {
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by(|&i, &j| {
        f.values[j]
            .partial_cmp(&f.values[i])
            .expect("sample values are finite")
    });
    order
}

/// Distribution function: the measure of the set where `f > s`.
///
/// The comparison is strict, so at a value taken by `f` the answer jumps
/// to the mass strictly above it. Masses are accumulated in descending
/// value order, matching the breakpoints of [`rearrange`] bit for bit.
pub fn distribution(f: &MeasuredSamples, s: f64) -> f64 {
    let mut mass = 0.0;
    for &i in &descending_order(f) {
        if f.values[i] > s {
            mass += f.masses[i];
        } else {
            break;
        }
    }
    mass
}

/// Decreasing rearrangement of `f` as a step function.
///
/// Samples are sorted by descending value and pieces with exactly equal
/// values are merged. Zero values are kept as a final zero level so that
/// the span always equals the total mass.
pub fn rearrange(f: &MeasuredSamples) -> DecreasingStep {
    let mut breakpoints = Vec::new();
    let mut levels: Vec<f64> = Vec::new();
    let mut cum = 0.0;
    for &i in &descending_order(f) {
        let v = f.values[i];
        cum += f.masses[i];
        if levels.last() == Some(&v) {
            *breakpoints
                .last_mut()
                .expect("levels and breakpoints align") = cum;
        } else {
            levels.push(v);
            breakpoints.push(cum);
        }
    }
    DecreasingStep {
        breakpoints,
        levels,
    }
}

fn validate_exponents(p: f64, q: f64) {
    assert!(
        p.is_finite() && p > 1.0,
        "primary exponent p must lie in (1, inf), got {p}"
    );
    assert!(q > 0.0, "secondary exponent q must be positive, got {q}");
}

/// Lorentz quasinorm of a decreasing step, evaluated in closed form.
///
/// For finite `q` each piece of height v on (a, b) contributes
/// v^q (p/q) (b^{q/p} - a^{q/p}) to the q-th power of the result. For
/// `q = inf` the result is the maximum of t^{1/p} v over right endpoints.
pub fn step_quasinorm(step: &DecreasingStep, p: f64, q: f64) -> f64 {
    validate_exponents(p, q);
    if q.is_infinite() {
        let mut best = 0.0_f64;
        for i in 0..step.levels.len() {
            best = best.max(step.breakpoints[i].powf(1.0 / p) * step.levels[i]);
        }
        return best;
    }
    let mut sum = 0.0;
    let mut prev = 0.0_f64;
    for i in 0..step.levels.len() {
        let t = step.breakpoints[i];
        let v = step.levels[i];
        if v > 0.0 {
            sum += v.powf(q) * (p / q) * (t.powf(q / p) - prev.powf(q / p));
        }
        prev = t;
    }
    sum.powf(1.0 / q)
}

/// Lorentz quasinorm of `f` in L^{p,q}.
pub fn lorentz_quasinorm(f: &MeasuredSamples, p: f64, q: f64) -> f64 {
    step_quasinorm(&rearrange(f), p, q)
}

/// Comparison factor p/(p-1) that turns the quasinorm into a sum bound.
pub fn quasinorm_triangle_factor(p: f64) -> f64 {
    assert!(
        p.is_finite() && p > 1.0,
        "factor requires p in (1, inf), got {p}"
    );
    p / (p - 1.0)
}

/// Relative discrepancy in the power identity
/// `|| |f|^gamma ||_{(p/gamma, q/gamma)} = ||f||_{(p,q)}^gamma`.
///
/// Requires `gamma > 0` and `p/gamma > 1`. Returns 0 when both sides
/// vanish.
pub fn power_identity_check(f: &MeasuredSamples, p: f64, q: f64, gamma: f64) -> f64 {
    assert!(gamma > 0.0, "power must be positive, got {gamma}");
    assert!(
        p / gamma > 1.0,
        "reduced exponent p/gamma must exceed 1, got {}",
        p / gamma
    );
    let powered = f
        .powered(gamma)
        .expect("powers of valid samples stay valid");
    let lhs = lorentz_quasinorm(&powered, p / gamma, q / gamma);
    let rhs = lorentz_quasinorm(f, p, q).powf(gamma);
    if rhs == 0.0 {
        return lhs;
    }
    (lhs - rhs).abs() / rhs
}

fn require_shared_masses(f: &MeasuredSamples, h: &MeasuredSamples) -> Result<()> {
    if f.len() != h.len() {
        return Err(Error::Misaligned {
            expected: f.len(),
            got: h.len(),
        });
    }
    for i in 0..f.len() {
        if f.masses[i] != h.masses[i] {
            return Err(Error::InvalidParameter {
                name: "masses",
                reason: format!(
                    "sample {i} has mass {} on one side and {} on the other",
                    f.masses[i], h.masses[i]
                ),
            });
        }
    }
    Ok(())
}

/// Conjugate exponent x/(x-1), mapping 1 to infinity and infinity to 1.
pub fn conjugate_exponent(x: f64) -> f64 {
    assert!(
        x >= 1.0,
        "conjugation requires an exponent in [1, inf], got {x}"
    );
    if x == 1.0 {
        f64::INFINITY
    } else if x.is_infinite() {
        1.0
    } else {
        x / (x - 1.0)
    }
}

/// Both sides of the Lorentz Hoelder inequality for a sample pair.
///
/// `f` and `h` must decompose the same measure space with identical
/// masses. Returns `(lhs, rhs)` where `lhs` is the integral of `f h`
/// and `rhs` is `||f||_{(p1,q1)} ||h||_{(p2,q2)}` with `1/p1 + 1/p2 = 1`
/// and `1/q1 + 1/q2 = 1`. Requires `p1 > 1` and `q1 >= 1`.
pub fn holder_lorentz_check(
    f: &MeasuredSamples,
    h: &MeasuredSamples,
    p1: f64,
    q1: f64,
) -> Result<(f64, f64)> {
    require_shared_masses(f, h)?;
    if !(p1.is_finite() && p1 > 1.0) {
        return Err(Error::InvalidParameter {
            name: "p1",
            reason: format!("primary exponent must lie in (1, inf), got {p1}"),
        });
    }
    if !(q1 >= 1.0) {
        return Err(Error::InvalidParameter {
            name: "q1",
            reason: format!("secondary exponent must lie in [1, inf], got {q1}"),
        });
    }
    let p2 = conjugate_exponent(p1);
    let q2 = conjugate_exponent(q1);
    let mut lhs = 0.0;
    for i in 0..f.len() {
        lhs += f.values[i] * h.values[i] * f.masses[i];
    }
    let rhs = lorentz_quasinorm(f, p1, q1) * lorentz_quasinorm(h, p2, q2);
    Ok((lhs, rhs))
}

/// Pointwise maximum of two functions sampled on the same decomposition.
pub fn pointwise_max(f: &MeasuredSamples, h: &MeasuredSamples) -> Result<MeasuredSamples> {
    require_shared_masses(f, h)?;
    let values = f
        .values
        .iter()
        .zip(&h.values)
        .map(|(&a, &b)| a.max(b))
        .collect();
    MeasuredSamples::new(values, f.masses.clone())
}

/// Random step function with the given number of pieces.
///
/// Values are uniform in `[0, max_value)` and masses lie in
/// `(0, max_mass]`, so the result always passes validation.
pub fn random_samples(
    rng: &mut SeededRng,
    pieces: usize,
    max_value: f64,
    max_mass: f64,
) -> MeasuredSamples {
    assert!(pieces > 0, "a sample needs at least one piece");
    let mut values = Vec::with_capacity(pieces);
    let mut masses = Vec::with_capacity(pieces);
    for _ in 0..pieces {
        values.push(rng.uniform_in(0.0, max_value));
        masses.push(max_mass * (1.0 - rng.uniform()));
    }
    MeasuredSamples::new(values, masses).expect("random samples satisfy the invariants")
}

/// One Hoelder battery case: a pair on a shared decomposition plus the
/// primary exponents of the left factor.
#[derive(Debug, Clone)]
pub struct HolderCase {
    pub f: MeasuredSamples,
    pub h: MeasuredSamples,
    pub p1: f64,
    pub q1: f64,
}

/// Deterministic corpus for the Hoelder battery.
///
/// Exponent pairs cycle through five primary and five secondary choices
/// so that 100 cases cover every combination four times.
pub fn holder_corpus(seed: u64, cases: usize) -> Vec<HolderCase> {
    let p1_cycle = [1.25, 1.5, 2.0, 3.0, 4.0];
    let q1_cycle = [1.0, 1.5, 2.0, 4.0, f64::INFINITY];
    let mut rng = SeededRng::new(seed);
    let mut out = Vec::with_capacity(cases);
    for k in 0..cases {
        let pieces = 1 + rng.below(8);
        let mut masses = Vec::with_capacity(pieces);
        for _ in 0..pieces {
            masses.push(2.0 * (1.0 - rng.uniform()));
        }
        let mut fv = Vec::with_capacity(pieces);
        let mut hv = Vec::with_capacity(pieces);
        for _ in 0..pieces {
            fv.push(rng.uniform_in(0.0, 10.0));
            hv.push(rng.uniform_in(0.0, 10.0));
        }
        out.push(HolderCase {
            f: MeasuredSamples::new(fv, masses.clone()).expect("valid corpus samples"),
            h: MeasuredSamples::new(hv, masses).expect("valid corpus samples"),
            p1: p1_cycle[k % p1_cycle.len()],
            q1: q1_cycle[(k / p1_cycle.len()) % q1_cycle.len()],
        });
    }
    out
}

/// One power identity battery case.
#[derive(Debug, Clone)]
pub struct PowerCase {
    pub f: MeasuredSamples,
    pub p: f64,
    pub q: f64,
    pub gamma: f64,
}

/// Deterministic corpus for the power identity battery.
///
/// Every combination keeps `p/gamma > 1`, so each case satisfies the
/// preconditions of [`power_identity_check`].
pub fn power_corpus(seed: u64, cases: usize) -> Vec<PowerCase> {
    let p_cycle = [2.5, 3.0, 4.0];
    let q_cycle = [1.0, 2.0, f64::INFINITY];
    let gamma_cycle = [0.5, 1.0, 2.0];
    let mut rng = SeededRng::new(seed);
    let mut out = Vec::with_capacity(cases);
    for k in 0..cases {
        let pieces = 1 + rng.below(8);
        out.push(PowerCase {
            f: random_samples(&mut rng, pieces, 10.0, 2.0),
            p: p_cycle[k % p_cycle.len()],
            q: q_cycle[(k / p_cycle.len()) % q_cycle.len()],
            gamma: gamma_cycle[(k / (p_cycle.len() * q_cycle.len())) % gamma_cycle.len()],
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::LORENTZ_EXACT_TOL;

    fn samples(values: &[f64], masses: &[f64]) -> MeasuredSamples {
        MeasuredSamples::new(values.to_vec(), masses.to_vec()).unwrap()
    }

    #[test]
    fn construction_rejects_bad_data() {
        assert!(matches!(
            MeasuredSamples::new(vec![1.0], vec![1.0, 2.0]),
            Err(Error::Misaligned {
                expected: 1,
                got: 2
            })
        ));
        assert!(MeasuredSamples::new(vec![], vec![]).is_err());
        assert!(MeasuredSamples::new(vec![-0.5], vec![1.0]).is_err());
        assert!(MeasuredSamples::new(vec![1.0], vec![0.0]).is_err());
        assert!(MeasuredSamples::new(vec![f64::NAN], vec![1.0]).is_err());
    }

    #[test]
    fn indicator_distribution_jumps_at_the_level() {
        let f = MeasuredSamples::indicator(2.0).unwrap();
        assert_eq!(distribution(&f, 0.5), 2.0);
        assert_eq!(distribution(&f, 1.0), 0.0);
        assert_eq!(distribution(&f, 1.5), 0.0);
    }

    #[test]
    fn constant_function_has_empty_superlevel_set_at_its_value() {
        let f = samples(&[3.0, 3.0], &[1.25, 0.75]);
        assert_eq!(distribution(&f, 3.0), 0.0);
        assert_eq!(distribution(&f, 2.999), 2.0);
    }

    #[test]
    fn distribution_matches_brute_force_scan() {
        let mut rng = SeededRng::new(41);
        for _ in 0..20 {
            let pieces = 1 + rng.below(10);
            let f = random_samples(&mut rng, pieces, 5.0, 2.0);
            let mut thresholds: Vec<f64> = f.values().to_vec();
            for _ in 0..10 {
                thresholds.push(rng.uniform_in(0.0, 5.0));
            }
            for s in thresholds {
                let direct: f64 = f
                    .values()
                    .iter()
                    .zip(f.masses())
                    .filter(|(&v, _)| v > s)
                    .map(|(_, &m)| m)
                    .sum();
                let got = distribution(&f, s);
                assert!((got - direct).abs() <= LORENTZ_EXACT_TOL * (1.0 + direct));
            }
        }
    }

    #[test]
    fn rearrange_sorts_merges_and_spans_the_total_mass() {
        let f = samples(&[1.0, 3.0], &[2.0, 1.0]);
        let step = rearrange(&f);
        assert_eq!(step.levels(), &[3.0, 1.0]);
        assert_eq!(step.breakpoints(), &[1.0, 3.0]);

        let chi = MeasuredSamples::indicator(2.0).unwrap();
        let step = rearrange(&chi);
        assert_eq!(step.levels(), &[1.0]);
        assert_eq!(step.breakpoints(), &[2.0]);

        let tied = samples(&[2.0, 0.0, 2.0], &[1.0, 3.0, 0.5]);
        let step = rearrange(&tied);
        assert_eq!(step.levels(), &[2.0, 0.0]);
        assert_eq!(step.breakpoints(), &[1.5, 4.5]);
        assert_eq!(step.span(), tied.total_mass());
    }

    #[test]
    fn rearrangement_is_equimeasurable_with_the_input() {
        let mut rng = SeededRng::new(42);
        for _ in 0..20 {
            let pieces = 1 + rng.below(10);
            let f = random_samples(&mut rng, pieces, 5.0, 2.0);
            let step = rearrange(&f);
            let mut thresholds: Vec<f64> = f.values().to_vec();
            for _ in 0..10 {
                thresholds.push(rng.uniform_in(0.0, 5.0));
            }
            for s in thresholds {
                assert_eq!(distribution(&f, s), step.distribution_at(s));
            }
        }
    }

    #[test]
    fn rearrangement_is_idempotent_on_its_own_pieces() {
        let mut rng = SeededRng::new(43);
        for _ in 0..20 {
            let pieces = 1 + rng.below(10);
            let f = random_samples(&mut rng, pieces, 5.0, 2.0);
            let step = rearrange(&f);
            let again = rearrange(&step.as_samples());
            assert_eq!(again.levels(), step.levels());
            for (a, b) in again.breakpoints().iter().zip(step.breakpoints()) {
                assert!((a - b).abs() <= LORENTZ_EXACT_TOL * (1.0 + b.abs()));
            }
        }
    }

    #[test]
    fn indicator_quasinorm_matches_the_closed_form() {
        for &mass in &[0.25, 1.0, 7.5] {
            let chi = MeasuredSamples::indicator(mass).unwrap();
            for &(p, q) in &[(1.5, 1.0), (2.0, 2.0), (3.0, 7.0), (2.5, f64::INFINITY)] {
                let got = lorentz_quasinorm(&chi, p, q);
                let want = if q.is_infinite() {
                    mass.powf(1.0 / p)
                } else {
                    (p / q).powf(1.0 / q) * mass.powf(1.0 / p)
                };
                assert!((got - want).abs() <= LORENTZ_EXACT_TOL * want);
            }
        }
    }

    #[test]
    fn weak_norm_of_a_two_level_step_takes_the_better_corner() {
        let f = samples(&[3.0, 1.0], &[1.0, 2.0]);
        let got = lorentz_quasinorm(&f, 2.0, f64::INFINITY);
        let corner1 = 1.0_f64.powf(0.5) * 3.0;
        let corner2 = 3.0_f64.powf(0.5) * 1.0;
        assert_eq!(got, corner1.max(corner2));
    }

    #[test]
    fn quasinorm_is_positively_homogeneous() {
        let mut rng = SeededRng::new(44);
        for _ in 0..20 {
            let pieces = 1 + rng.below(10);
            let f = random_samples(&mut rng, pieces, 5.0, 2.0);
            let c = rng.uniform_in(0.1, 9.0);
            for &(p, q) in &[(1.5, 1.0), (2.0, 3.0), (3.0, f64::INFINITY)] {
                let lhs = lorentz_quasinorm(&f.scaled(c).unwrap(), p, q);
                let rhs = c * lorentz_quasinorm(&f, p, q);
                assert!((lhs - rhs).abs() <= LORENTZ_EXACT_TOL * (1.0 + rhs));
            }
        }
    }

    #[test]
    fn power_identity_examples() {
        let mut rng = SeededRng::new(45);
        let f = random_samples(&mut rng, 6, 5.0, 2.0);
        assert!(power_identity_check(&f, 2.0, 3.0, 1.0) <= LORENTZ_EXACT_TOL);

        let chi = MeasuredSamples::indicator(3.0).unwrap();
        assert!(power_identity_check(&chi, 4.0, 2.0, 2.0) <= LORENTZ_EXACT_TOL);

        let two = samples(&[4.0, 1.0], &[0.5, 1.5]);
        assert!(power_identity_check(&two, 3.0, 2.0, 0.5) <= LORENTZ_EXACT_TOL);
    }

    #[test]
    fn power_corpus_cases_satisfy_the_identity() {
        for case in power_corpus(7, 50) {
            let err = power_identity_check(&case.f, case.p, case.q, case.gamma);
            assert!(err <= LORENTZ_EXACT_TOL, "relative error {err}");
        }
    }

    #[test]
    fn holder_indicator_case_is_an_equality() {
        let chi = MeasuredSamples::indicator(2.5).unwrap();
        let (lhs, rhs) = holder_lorentz_check(&chi, &chi, 2.0, 2.0).unwrap();
        assert!((lhs - 2.5).abs() <= LORENTZ_EXACT_TOL);
        assert!((lhs - rhs).abs() <= LORENTZ_EXACT_TOL * rhs);
    }

    #[test]
    fn holder_disjoint_supports_give_zero_left_side() {
        let f = samples(&[1.0, 0.0], &[1.0, 1.0]);
        let h = samples(&[0.0, 1.0], &[1.0, 1.0]);
        let (lhs, rhs) = holder_lorentz_check(&f, &h, 2.0, 2.0).unwrap();
        assert_eq!(lhs, 0.0);
        assert!(rhs > 0.0);
    }

    #[test]
    fn holder_rejects_mismatched_decompositions() {
        let f = samples(&[1.0, 2.0], &[1.0, 1.0]);
        let short = samples(&[1.0], &[1.0]);
        assert!(matches!(
            holder_lorentz_check(&f, &short, 2.0, 2.0),
            Err(Error::Misaligned {
                expected: 2,
                got: 1
            })
        ));
        let other = samples(&[1.0, 2.0], &[1.0, 1.5]);
        assert!(holder_lorentz_check(&f, &other, 2.0, 2.0).is_err());
    }

    #[test]
    fn conjugate_exponent_covers_the_endpoints() {
        assert_eq!(conjugate_exponent(1.0), f64::INFINITY);
        assert_eq!(conjugate_exponent(f64::INFINITY), 1.0);
        assert!((conjugate_exponent(1.5) - 3.0).abs() <= LORENTZ_EXACT_TOL);
        assert_eq!(conjugate_exponent(2.0), 2.0);
    }

    #[test]
    fn triangle_factor_matches_the_dimension_constant() {
        assert!((quasinorm_triangle_factor(1.5) - 3.0).abs() <= LORENTZ_EXACT_TOL);
        assert!((quasinorm_triangle_factor(2.0) - 2.0).abs() <= LORENTZ_EXACT_TOL);
    }

    #[test]
    fn corpus_generators_are_deterministic() {
        let a = holder_corpus(5, 10);
        let b = holder_corpus(5, 10);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.f, y.f);
            assert_eq!(x.h, y.h);
            assert_eq!(x.p1, y.p1);
            assert!(x.q1 == y.q1 || (x.q1.is_infinite() && y.q1.is_infinite()));
        }
        let c = power_corpus(5, 10);
        let d = power_corpus(5, 10);
        for (x, y) in c.iter().zip(&d) {
            assert_eq!(x.f, y.f);
            assert_eq!(x.gamma, y.gamma);
        }
    }
}
