//! Deterministic CSV and JSON serialization of reports.
//!
//! Writers return complete file contents as strings. Field order is
//! fixed, floats print in shortest round-trip decimal form, and rows
//! follow input order, so identical inputs give identical bytes.

use serde::Serialize;

use crate::jacobi::{Membership, MembershipReport};
use crate::neck::CapacityReport;
use crate::profiles::{ProfileCurve, ProfileKind, ProfileParams};
use crate::spectral::IndexReport;
use crate::sweep::SweepReport;
use crate::weights::{Weight, WeightKind};
use crate::{Error, Result};

/// Shortest round-trip decimal form of a float.
fn dec(v: f64) -> String {
    format!("{v}")
}

fn into_string(wtr: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = wtr.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv writers only receive UTF-8 fields"))
}

/// Profile samples as CSV, with the weight as an optional last column.
pub fn profile_csv(profile: &ProfileCurve, weight: Option<&Weight>) -> Result<String> {
    if let Some(w) = weight {
        if w.len() != profile.len() {
            return Err(Error::Misaligned {
                expected: profile.len(),
                got: w.len(),
            });
        }
    }
    let mut wtr = csv::Writer::from_writer(Vec::new());
    match weight {
        Some(_) => wtr.write_record(["s", "h", "dh", "a2", "sqrt_g", "weight"])?,
        None => wtr.write_record(["s", "h", "dh", "a2", "sqrt_g"])?,
    }
    for i in 0..profile.len() {
        let mut record = vec![
            dec(profile.grid[i]),
            dec(profile.h[i]),
            dec(profile.dh[i]),
            dec(profile.a2[i]),
            dec(profile.sqrt_g[i]),
        ];
        if let Some(w) = weight {
            record.push(dec(w.samples()[i]));
        }
        wtr.write_record(&record)?;
    }
    into_string(wtr)
}

/// Weight metadata carried in the profile header.
#[derive(Debug, Clone, Serialize)]
pub struct WeightMeta {
    pub kind: WeightKind,
    pub cap_radius: f64,
    pub essinf: f64,
    pub decay: f64,
}

impl From<&Weight> for WeightMeta {
    fn from(w: &Weight) -> Self {
        WeightMeta {
            kind: w.kind(),
            cap_radius: w.cap_radius(),
            essinf: w.essinf(),
            decay: w.decay(),
        }
    }
}

#[derive(Serialize)]
struct ProfileHeader {
    kind: ProfileKind,
    params: ProfileParams,
    n: usize,
    s_inf: f64,
    samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<WeightMeta>,
}

/// JSON header describing a profile CSV and its optional weight column.
pub fn profile_header(profile: &ProfileCurve, weight: Option<&Weight>) -> Result<String> {
    let header = ProfileHeader {
        kind: profile.kind,
        params: profile.params,
        n: profile.n,
        s_inf: profile.s_inf,
        samples: profile.len(),
        weight: weight.map(WeightMeta::from),
    };
    to_json(&header)
}

/// Per-mode eigenvalue counts of an index report as CSV.
pub fn mode_table_csv(report: &IndexReport) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["l", "multiplicity", "neg", "zero", "lambda_min"])?;
    for mode in &report.per_mode {
        wtr.write_record([
            mode.l.to_string(),
            mode.multiplicity.to_string(),
            mode.neg_count.to_string(),
            mode.zero_count.to_string(),
            dec(mode.smallest.first().copied().unwrap_or(f64::NAN)),
        ])?;
    }
    into_string(wtr)
}

fn membership_cell(m: Membership) -> &'static str {
    match m {
        Membership::InL2Omega => "in_L2_omega",
        Membership::Diverges => "diverges",
        Membership::Inconclusive => "inconclusive",
    }
}

/// Jacobi field classifications with their equation residuals as CSV.
pub fn classification_csv(rows: &[(MembershipReport, f64)]) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record([
        "field",
        "mode",
        "membership",
        "fitted_rate",
        "predicted_rate",
        "residual",
    ])?;
    for (report, residual) in rows {
        wtr.write_record([
            report.field.clone(),
            report.mode.to_string(),
            membership_cell(report.membership).to_string(),
            dec(report.fitted_rate),
            dec(report.predicted_rate),
            dec(*residual),
        ])?;
    }
    into_string(wtr)
}

/// Cutoff energies against the hole radius as CSV; the fitted exponent
/// repeats on every row.
pub fn capacity_csv(report: &CapacityReport) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["epsilon", "energy", "fitted_exponent"])?;
    for &(eps, energy) in &report.rows {
        wtr.write_record([dec(eps), dec(energy), dec(report.fitted_exponent)])?;
    }
    into_string(wtr)
}

/// Battery stability floors against the potential scale as CSV.
pub fn infimum_csv(rows: &[(f64, f64)]) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["epsilon", "infimum"])?;
    for &(eps, inf) in rows {
        wtr.write_record([dec(eps), dec(inf)])?;
    }
    into_string(wtr)
}

fn verdict_cell(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "withheld",
    }
}

/// Degeneration sweep entries as CSV; the global verdicts repeat on
/// every row.
pub fn sweep_csv(report: &SweepReport) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record([
        "neck",
        "index",
        "nullity",
        "converged",
        "upper_verdict",
        "lower_verdict",
    ])?;
    for entry in &report.entries {
        wtr.write_record([
            dec(entry.neck),
            entry.index.to_string(),
            entry.nullity.to_string(),
            entry.converged.to_string(),
            verdict_cell(report.upper_verdict).to_string(),
            verdict_cell(report.lower_verdict).to_string(),
        ])?;
    }
    into_string(wtr)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::catenoid_profile;
    use crate::spectral::ModeCount;
    use crate::weights::weight_bubble;

    #[test]
    fn profile_csv_round_trips_and_rebuilds_byte_identically() {
        let build = || {
            let profile = catenoid_profile(3, 1.0, 12.0, 64).unwrap();
            let weight = weight_bubble(&profile, 4.0).unwrap();
            (
                profile_csv(&profile, Some(&weight)).unwrap(),
                profile_header(&profile, Some(&weight)).unwrap(),
            )
        };
        let (csv_a, json_a) = build();
        let (csv_b, json_b) = build();
        assert_eq!(csv_a, csv_b);
        assert_eq!(json_a, json_b);

        let mut lines = csv_a.lines();
        assert_eq!(lines.next(), Some("s,h,dh,a2,sqrt_g,weight"));
        assert_eq!(csv_a.lines().count(), 66);
        let first_row: Vec<&str> = lines.next().unwrap().split(',').collect();
        let h0: f64 = first_row[1].parse().unwrap();
        assert!(h0 > 1.0, "left endpoint radius {h0} is at the truncation");

        let header: serde_json::Value = serde_json::from_str(&json_a).unwrap();
        assert_eq!(header["kind"], "catenoid");
        assert_eq!(header["n"], 3);
        assert_eq!(header["samples"], 65);
        assert_eq!(header["weight"]["cap_radius"], 4.0);
    }

    #[test]
    fn profile_csv_rejects_a_misaligned_weight() {
        let profile = catenoid_profile(3, 1.0, 12.0, 64).unwrap();
        let other = catenoid_profile(3, 1.0, 12.0, 32).unwrap();
        let weight = weight_bubble(&other, 4.0).unwrap();
        assert!(profile_csv(&profile, Some(&weight)).is_err());
    }

    #[test]
    fn mode_table_matches_a_golden_snapshot() {
        let report = IndexReport {
            per_mode: vec![
                ModeCount {
                    l: 0,
                    multiplicity: 1,
                    neg_count: 1,
                    zero_count: 0,
                    smallest: vec![-1.25, 0.5],
                },
                ModeCount {
                    l: 1,
                    multiplicity: 3,
                    neg_count: 0,
                    zero_count: 1,
                    smallest: vec![0.0, 2.0],
                },
            ],
            total_index: 1,
            total_nullity: 3,
            zero_tolerance: 1e-6,
            truncation: 30.0,
            mesh: 1000,
            boundary_condition: crate::profiles::BoundaryCondition::Dirichlet,
            converged: true,
            zero_tol_warning: false,
        };
        let csv = mode_table_csv(&report).unwrap();
        assert_eq!(
            csv,
            "l,multiplicity,neg,zero,lambda_min\n0,1,1,0,-1.25\n1,3,0,1,0\n"
        );
    }

    #[test]
    fn classification_rows_print_fixed_membership_labels() {
        let report = MembershipReport {
            field: "translation 1".into(),
            mode: 1,
            membership: Membership::InL2Omega,
            integrals: vec![(10.0, 1.0), (20.0, 1.5), (40.0, 1.75)],
            fitted_rate: -0.5,
            predicted_rate: -0.5,
            amplitude_growth: -0.75,
        };
        let csv = classification_csv(&[(report, 2.5e-6)]).unwrap();
        assert_eq!(
            csv,
            "field,mode,membership,fitted_rate,predicted_rate,residual\n\
             translation 1,1,in_L2_omega,-0.5,-0.5,0.0000025\n"
        );
    }

    #[test]
    fn sweep_and_infimum_tables_encode_verdicts_and_pairs() {
        let rows = infimum_csv(&[(0.0, 1.5), (0.25, 0.75)]).unwrap();
        assert_eq!(rows, "epsilon,infimum\n0,1.5\n0.25,0.75\n");
        assert_eq!(verdict_cell(Some(true)), "pass");
        assert_eq!(verdict_cell(Some(false)), "fail");
        assert_eq!(verdict_cell(None), "withheld");
    }
}
