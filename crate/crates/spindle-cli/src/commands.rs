//! Subcommand bodies: resolve parameters, drive the library, write
//! reports, and map results onto CLI outcomes.

use std::path::Path;

use serde::Serialize;

use spindle::jacobi::{
    classify_membership, residual, FieldKind, JacobiField, Membership, MembershipReport,
};
use spindle::lorentz::{holder_corpus, holder_lorentz_check, power_corpus, power_identity_check};
use spindle::neck::{
    battery_infima, calibrate_threshold, capacity_estimate, standard_battery, CapacityDomain,
};
use spindle::profiles::{
    catenoid_profile, sphere_profile, BoundaryCondition, ProfileCurve, ProfileKind, ProfileParams,
    SurfaceSpec,
};
use spindle::rng::SeededRng;
use spindle::spectral::{compare_weighted_unweighted, index_nullity, IndexReport, WeightMode};
use spindle::sweep::{run_sweep, SweepConfig};
use spindle::tables;
use spindle::tolerances::{LORENTZ_EXACT_TOL, WEIGHTED_NULLITY_ZERO_TOL};
use spindle::weights::{weight_bubble, Weight, WeightKind};

use crate::config::FileDefaults;
use crate::{
    CatenoidIndexArgs, EquivalenceArgs, Failure, JacobiArgs, LorentzArgs, NeckArgs, Outcome,
    SweepArgs,
};

fn write_text(dir: &Path, name: &str, text: &str) -> Result<(), Failure> {
    std::fs::write(dir.join(name), text).map_err(|e| Failure::Module(spindle::Error::Io(e)))?;
    Ok(())
}

fn write_manifest<T: Serialize>(dir: &Path, command: &str, params: &T) -> Result<(), Failure> {
    #[derive(Serialize)]
    struct Manifest<'a, T> {
        command: &'a str,
        out: String,
        params: &'a T,
    }
    let manifest = Manifest {
        command,
        out: dir.display().to_string(),
        params,
    };
    write_text(dir, "manifest.json", &tables::to_json(&manifest)?)
}

/// Small CSV assembler for command-specific tables. Cells must not
/// contain commas, quotes, or newlines.
fn csv_from_rows(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    text
}

fn parse_bc(text: &str) -> Result<BoundaryCondition, Failure> {
    match text {
        "dirichlet" => Ok(BoundaryCondition::Dirichlet),
        "natural" => Ok(BoundaryCondition::Natural),
        other => Err(Failure::Usage(format!(
            "boundary condition must be dirichlet or natural, got {other}"
        ))),
    }
}

pub fn catenoid_index(
    args: &CatenoidIndexArgs,
    mut defaults: FileDefaults,
    out: &Path,
) -> Result<Outcome, Failure> {
    #[derive(Serialize)]
    struct Params {
        n: usize,
        h0: f64,
        truncations: Vec<f64>,
        meshes: Vec<usize>,
        r_cap: f64,
        zero_tol: Option<f64>,
        bc: String,
    }
    let params = Params {
        n: defaults.required(args.n, "n")?,
        h0: defaults.scalar(args.h0, "h0", 1.0)?,
        truncations: defaults.list(args.s.clone(), "S", "30,60")?,
        meshes: defaults.list(args.mesh.clone(), "mesh", "2000,4000")?,
        r_cap: defaults.scalar(args.r, "R", 4.0)?,
        zero_tol: defaults.optional(args.zero_tol, "zero-tol")?,
        bc: defaults.text(args.bc.clone(), "bc", "dirichlet")?,
    };
    defaults.finish()?;
    let bc = parse_bc(&params.bc)?;
    write_manifest(out, "catenoid-index", &params)?;

    let spec_at = |s: f64| SurfaceSpec {
        kind: ProfileKind::Catenoid,
        params: ProfileParams::Catenoid { h0: params.h0 },
        truncation: s,
        bc,
        ricci: 0.0,
    };
    let ladder_at =
        |s: f64| -> Vec<(f64, usize)> { params.meshes.iter().map(|&m| (s, m)).collect() };

    let mut unweighted: Vec<IndexReport> = Vec::with_capacity(params.truncations.len());
    for &s in &params.truncations {
        unweighted.push(index_nullity(
            params.n,
            &spec_at(s),
            &WeightMode::Unit,
            params.zero_tol,
            &ladder_at(s),
        )?);
    }
    let s_last = *params
        .truncations
        .last()
        .expect("list resolution is nonempty");
    let weighted = index_nullity(
        params.n,
        &spec_at(s_last),
        &WeightMode::Bubble {
            r_cap: params.r_cap,
        },
        Some(params.zero_tol.unwrap_or(WEIGHTED_NULLITY_ZERO_TOL)),
        &ladder_at(s_last),
    )?;

    let finest = unweighted.last().expect("one report per truncation");
    let index = finest.total_index;
    let index_agrees = unweighted.iter().all(|r| r.total_index == index);
    let converged = unweighted.iter().all(|r| r.converged)
        && weighted.converged
        && index_agrees
        && params.truncations.len() >= 2;

    let profile = spec_at(s_last).build(params.n, *params.meshes.last().unwrap())?;
    let weight = weight_bubble(&profile, params.r_cap)?;
    write_text(
        out,
        "profile.csv",
        &tables::profile_csv(&profile, Some(&weight))?,
    )?;
    write_text(
        out,
        "profile.json",
        &tables::profile_header(&profile, Some(&weight))?,
    )?;
    write_text(out, "modes.csv", &tables::mode_table_csv(finest)?)?;
    write_text(
        out,
        "weighted_modes.csv",
        &tables::mode_table_csv(&weighted)?,
    )?;

    #[derive(Serialize)]
    struct Report<'a> {
        index: usize,
        weighted_nullity: usize,
        converged: bool,
        index_agrees_across_truncations: bool,
        unweighted: &'a [IndexReport],
        weighted: &'a IndexReport,
    }
    let report = Report {
        index,
        weighted_nullity: weighted.total_nullity,
        converged,
        index_agrees_across_truncations: index_agrees,
        unweighted: &unweighted,
        weighted: &weighted,
    };
    write_text(out, "index.json", &tables::to_json(&report)?)?;

    Ok(if converged {
        Outcome::Converged
    } else {
        Outcome::NotConverged
    })
}

fn rotation_field(n: usize, plane: usize) -> Result<JacobiField, Failure> {
    if !(1..=n).contains(&plane) {
        return Err(Failure::Usage(format!(
            "rotation plane must lie in 1..={n}, got {plane}"
        )));
    }
    let mut generator = vec![vec![0.0; n + 1]; n + 1];
    generator[plane - 1][n] = 1.0;
    generator[n][plane - 1] = -1.0;
    Ok(JacobiField::rotation(n, generator)?)
}

pub fn jacobi(
    args: &JacobiArgs,
    mut defaults: FileDefaults,
    out: &Path,
) -> Result<Outcome, Failure> {
    #[derive(Serialize)]
    struct Params {
        n: usize,
        h0: f64,
        r_cap: f64,
        mesh: usize,
        truncations: Vec<f64>,
        field: String,
        axis: usize,
        generator: usize,
    }
    let params = Params {
        n: defaults.scalar(args.n, "n", 3)?,
        h0: defaults.scalar(args.h0, "h0", 1.0)?,
        r_cap: defaults.scalar(args.r, "R", 4.0)?,
        mesh: defaults.scalar(args.mesh, "mesh", 1200)?,
        truncations: defaults.list(
            args.truncations.clone(),
            "truncations",
            "15,22.5,33.75,50.625,75.9375",
        )?,
        field: defaults.text(args.field.clone(), "field", "all")?,
        axis: defaults.scalar(args.axis, "axis", 1)?,
        generator: defaults.scalar(args.generator, "generator", 1)?,
    };
    defaults.finish()?;
    write_manifest(out, "jacobi", &params)?;

    let n = params.n;
    let mut fields: Vec<JacobiField> = Vec::new();
    match params.field.as_str() {
        "all" => {
            for axis in 1..=n + 1 {
                fields.push(JacobiField::translation(n, axis)?);
            }
            fields.push(JacobiField::dilation(n)?);
            fields.push(rotation_field(n, params.generator)?);
        }
        "translation" => fields.push(JacobiField::translation(n, params.axis)?),
        "dilation" => fields.push(JacobiField::dilation(n)?),
        "rotation" => fields.push(rotation_field(n, params.generator)?),
        other => {
            return Err(Failure::Usage(format!(
                "field must be all, translation, dilation, or rotation, got {other}"
            )))
        }
    }

    let s_last = *params
        .truncations
        .last()
        .expect("list resolution is nonempty");
    let profile = catenoid_profile(n, params.h0, s_last, params.mesh)?;

    let mut rows: Vec<(MembershipReport, f64)> = Vec::with_capacity(fields.len());
    let mut as_expected = true;
    for field in &fields {
        let report = classify_membership(
            field,
            params.h0,
            params.r_cap,
            &params.truncations,
            params.mesh,
        )?;
        let res = residual(field, &profile)?;
        let horizontal = matches!(field.kind(), FieldKind::Translation { axis } if *axis <= n);
        let expected = if horizontal {
            Membership::InL2Omega
        } else {
            Membership::Diverges
        };
        as_expected = as_expected && report.membership == expected;
        rows.push((report, res));
    }

    write_text(
        out,
        "classification.csv",
        &tables::classification_csv(&rows)?,
    )?;
    #[derive(Serialize)]
    struct ClassifiedField<'a> {
        #[serde(flatten)]
        report: &'a MembershipReport,
        residual: f64,
    }
    let json_rows: Vec<ClassifiedField> = rows
        .iter()
        .map(|(report, res)| ClassifiedField {
            report,
            residual: *res,
        })
        .collect();
    write_text(out, "classification.json", &tables::to_json(&json_rows)?)?;

    Ok(if as_expected {
        Outcome::Converged
    } else {
        Outcome::NotConverged
    })
}

pub fn lorentz(
    args: &LorentzArgs,
    mut defaults: FileDefaults,
    out: &Path,
) -> Result<Outcome, Failure> {
    #[derive(Serialize)]
    struct Params {
        battery: String,
        count: usize,
        seed: u64,
    }
    let params = Params {
        battery: defaults.text(args.battery.clone(), "battery", "holder")?,
        count: defaults.scalar(args.count, "count", 100)?,
        seed: defaults.scalar(args.seed, "seed", 1)?,
    };
    defaults.finish()?;
    write_manifest(out, "lorentz", &params)?;

    let mut rows: Vec<Vec<String>> = Vec::with_capacity(params.count);
    let mut passed = 0usize;
    let header: Vec<&str>;
    match params.battery.as_str() {
        "holder" => {
            header = vec!["case", "p1", "q1", "lhs", "rhs", "pass"];
            for (k, case) in holder_corpus(params.seed, params.count).iter().enumerate() {
                let (lhs, rhs) = holder_lorentz_check(&case.f, &case.h, case.p1, case.q1)?;
                let pass = lhs <= rhs * (1.0 + 1e-12);
                passed += usize::from(pass);
                rows.push(vec![
                    k.to_string(),
                    format!("{}", case.p1),
                    format!("{}", case.q1),
                    format!("{lhs}"),
                    format!("{rhs}"),
                    pass.to_string(),
                ]);
            }
        }
        "power" => {
            header = vec!["case", "p", "q", "gamma", "discrepancy", "pass"];
            for (k, case) in power_corpus(params.seed, params.count).iter().enumerate() {
                let discrepancy = power_identity_check(&case.f, case.p, case.q, case.gamma);
                let pass = discrepancy <= LORENTZ_EXACT_TOL;
                passed += usize::from(pass);
                rows.push(vec![
                    k.to_string(),
                    format!("{}", case.p),
                    format!("{}", case.q),
                    format!("{}", case.gamma),
                    format!("{discrepancy}"),
                    pass.to_string(),
                ]);
            }
        }
        other => {
            return Err(Failure::Usage(format!(
                "battery must be holder or power, got {other}"
            )))
        }
    }

    write_text(out, "battery.csv", &csv_from_rows(&header, &rows))?;
    #[derive(Serialize)]
    struct Report<'a> {
        battery: &'a str,
        count: usize,
        seed: u64,
        passed: usize,
        failed: usize,
    }
    let report = Report {
        battery: &params.battery,
        count: params.count,
        seed: params.seed,
        passed,
        failed: params.count - passed,
    };
    write_text(out, "battery.json", &tables::to_json(&report)?)?;

    Ok(if passed == params.count {
        Outcome::Converged
    } else {
        Outcome::NotConverged
    })
}

pub fn equivalence(
    args: &EquivalenceArgs,
    mut defaults: FileDefaults,
    out: &Path,
) -> Result<Outcome, Failure> {
    #[derive(Serialize)]
    struct Params {
        surface: String,
        n: usize,
        weights: String,
        seed: u64,
        mesh: usize,
        radius: f64,
        h0: f64,
        truncation: f64,
        zero_tol: f64,
    }
    let surface = defaults.text(args.surface.clone(), "surface", "sphere")?;
    let surface_zero_tol = match surface.as_str() {
        "sphere" => 1e-4,
        _ => 1e-9,
    };
    let params = Params {
        n: defaults.scalar(args.n, "n", 3)?,
        weights: defaults.text(args.weights.clone(), "weights", "random:10")?,
        seed: defaults.scalar(args.seed, "seed", 7)?,
        mesh: defaults.scalar(args.mesh, "mesh", 1500)?,
        radius: defaults.scalar(args.radius, "radius", 1.0)?,
        h0: defaults.scalar(args.h0, "h0", 1.0)?,
        truncation: defaults.scalar(args.s, "S", 40.0)?,
        zero_tol: defaults
            .optional(args.zero_tol, "zero-tol")?
            .unwrap_or(surface_zero_tol),
        surface,
    };
    defaults.finish()?;
    write_manifest(out, "equivalence", &params)?;

    let count: usize = match params.weights.strip_prefix("random:") {
        Some(rest) => rest.parse().map_err(|e| {
            Failure::Usage(format!(
                "invalid weight battery count in {}: {e}",
                params.weights
            ))
        })?,
        None => {
            return Err(Failure::Usage(format!(
                "weights must be random:<count>, got {}",
                params.weights
            )))
        }
    };
    if count == 0 {
        return Err(Failure::Usage(
            "weight battery needs at least one case".into(),
        ));
    }

    let (profile, bc): (ProfileCurve, BoundaryCondition) = match params.surface.as_str() {
        "sphere" => (
            sphere_profile(params.n, params.radius, params.mesh)?,
            BoundaryCondition::Natural,
        ),
        "catenoid" => (
            catenoid_profile(params.n, params.h0, params.truncation, params.mesh)?,
            BoundaryCondition::Dirichlet,
        ),
        other => {
            return Err(Failure::Usage(format!(
                "surface must be sphere or catenoid, got {other}"
            )))
        }
    };

    let mut rng = SeededRng::new(params.seed);
    let mut rows: Vec<Vec<String>> = Vec::with_capacity(count);
    let mut reports = Vec::with_capacity(count);
    let mut agreements = 0usize;
    for k in 0..count {
        let samples: Vec<f64> = (0..profile.len())
            .map(|_| rng.uniform_in(0.3, 3.0))
            .collect();
        let weight = Weight::custom(&profile, samples, 1.0, WeightKind::Custom)?;
        let report = compare_weighted_unweighted(&profile, &weight, bc, params.zero_tol)?;
        agreements += usize::from(report.equal);
        rows.push(vec![
            k.to_string(),
            report.dim_weighted.to_string(),
            report.dim_unweighted.to_string(),
            report.equal.to_string(),
        ]);
        reports.push(report);
    }

    write_text(
        out,
        "equivalence.csv",
        &csv_from_rows(&["case", "dim_weighted", "dim_unweighted", "equal"], &rows),
    )?;
    #[derive(Serialize)]
    struct Report<'a> {
        surface: &'a str,
        n: usize,
        count: usize,
        seed: u64,
        agreements: usize,
        cases: &'a [spindle::spectral::EquivalenceReport],
    }
    let report = Report {
        surface: &params.surface,
        n: params.n,
        count,
        seed: params.seed,
        agreements,
        cases: &reports,
    };
    write_text(out, "equivalence.json", &tables::to_json(&report)?)?;

    Ok(if agreements == count {
        Outcome::Converged
    } else {
        Outcome::NotConverged
    })
}

pub fn neck(args: &NeckArgs, mut defaults: FileDefaults, out: &Path) -> Result<Outcome, Failure> {
    #[derive(Serialize)]
    struct Params {
        mesh: usize,
        modes: usize,
        rel_tol: f64,
        n: usize,
        epsilons: Vec<f64>,
        sphere_radius: f64,
    }
    let params = Params {
        mesh: defaults.scalar(args.mesh, "mesh", 400)?,
        modes: defaults.scalar(args.modes, "modes", 2)?,
        rel_tol: defaults.scalar(args.rel_tol, "rel-tol", 1e-3)?,
        n: defaults.scalar(args.n, "n", 3)?,
        epsilons: defaults.list(args.epsilons.clone(), "epsilons", "0.02,0.04,0.08")?,
        sphere_radius: defaults.scalar(args.sphere_radius, "sphere-radius", 1.5)?,
    };
    defaults.finish()?;
    write_manifest(out, "neck", &params)?;

    let battery = standard_battery(params.mesh)?;
    let threshold = calibrate_threshold(&battery, params.modes, params.rel_tol)?;

    let mut ladder: Vec<(f64, f64)> = Vec::new();
    for factor in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let eps = factor * threshold.threshold;
        let floor = battery_infima(&battery, eps, params.modes)?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        ladder.push((eps, floor));
    }

    let flat = capacity_estimate(&CapacityDomain::Flat { n: params.n }, &params.epsilons)?;
    let sphere = capacity_estimate(
        &CapacityDomain::Sphere {
            n: params.n,
            radius: params.sphere_radius,
        },
        &params.epsilons,
    )?;

    write_text(out, "threshold.json", &tables::to_json(&threshold)?)?;
    write_text(out, "infimum.csv", &tables::infimum_csv(&ladder)?)?;
    write_text(out, "capacity_flat.csv", &tables::capacity_csv(&flat)?)?;
    write_text(out, "capacity_sphere.csv", &tables::capacity_csv(&sphere)?)?;
    #[derive(Serialize)]
    struct Capacities<'a> {
        flat: &'a spindle::neck::CapacityReport,
        sphere: &'a spindle::neck::CapacityReport,
    }
    write_text(
        out,
        "capacity.json",
        &tables::to_json(&Capacities {
            flat: &flat,
            sphere: &sphere,
        })?,
    )?;

    Ok(if threshold.floor > 0.0 {
        Outcome::Converged
    } else {
        Outcome::NotConverged
    })
}

pub fn sweep(args: &SweepArgs, mut defaults: FileDefaults, out: &Path) -> Result<Outcome, Failure> {
    let bubble_meshes: Vec<usize> =
        defaults.list(args.bubble_mesh.clone(), "bubble-mesh", "1000,2000")?;
    if bubble_meshes.len() != 2 {
        return Err(Failure::Usage(format!(
            "bubble-mesh must be a coarse,fine pair, got {} values",
            bubble_meshes.len()
        )));
    }
    let config = SweepConfig {
        n: defaults.scalar(args.n, "n", 3)?,
        mean_curvature: defaults.scalar(args.mean_curvature, "H", 3.0)?,
        necks: defaults.required_list(args.necks.clone(), "necks")?,
        meshes: defaults.list(args.mesh.clone(), "mesh", "2000,4000")?,
        zero_tol: defaults.optional(args.zero_tol, "zero-tol")?,
        spheres: defaults.scalar(args.spheres, "spheres", 1)?,
        bubbles: defaults.scalar(args.bubbles, "bubbles", 1)?,
        bubble_truncation: defaults.scalar(args.bubble_truncation, "bubble-truncation", 40.0)?,
        bubble_meshes: (bubble_meshes[0], bubble_meshes[1]),
        r_cap: defaults.scalar(args.r, "R", 4.0)?,
        delta: defaults.scalar(args.delta, "delta", 0.1)?,
    };
    defaults.finish()?;
    write_manifest(out, "sweep", &config)?;

    let report = run_sweep(&config)?;
    write_text(out, "sweep.csv", &tables::sweep_csv(&report)?)?;
    write_text(out, "sweep.json", &tables::to_json(&report)?)?;

    let pass = report.upper_verdict == Some(true) && report.lower_verdict == Some(true);
    Ok(if pass {
        Outcome::Converged
    } else {
        Outcome::NotConverged
    })
}
