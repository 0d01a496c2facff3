//! Command line runner for the spectral stability toolkit.
//!
//! Every run resolves flags against an optional key=value config file,
//! writes a manifest echoing the effective parameters, and exits with
//! 0 on success, 1 when a check or convergence gate fails, 2 on usage
//! errors, and 3 on solver errors, which also print a JSON error object.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::FileDefaults;

#[derive(Parser)]
#[command(
    name = "spindle",
    version,
    about = "Spectral stability toolkit for rotationally symmetric hypersurfaces"
)]
struct Cli {
    /// Output directory for reports and the manifest.
    #[arg(long, global = true, default_value = "spindle-out")]
    out: PathBuf,

    /// Flat key=value file supplying defaults for flags not given.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Morse index and weighted nullity of a truncated catenoid.
    CatenoidIndex(CatenoidIndexArgs),
    /// Classify rigid-motion Jacobi fields against the weighted space.
    Jacobi(JacobiArgs),
    /// Randomized Lorentz quasinorm identity and inequality batteries.
    Lorentz(LorentzArgs),
    /// Weighted against unweighted eigenvalue counts on one surface.
    Equivalence(EquivalenceArgs),
    /// Graphical annulus stability threshold and capacity scaling.
    Neck(NeckArgs),
    /// Delaunay degeneration sweep with semicontinuity verdicts.
    Sweep(SweepArgs),
}

#[derive(Args)]
pub struct CatenoidIndexArgs {
    /// Hypersurface dimension n; required here or in the config file.
    #[arg(long)]
    pub n: Option<usize>,

    /// Waist radius of the catenoid.
    #[arg(long)]
    pub h0: Option<f64>,

    /// Comma list of truncation radii, for example 30,60.
    #[arg(long = "S")]
    pub s: Option<String>,

    /// Comma list of mesh sizes, coarse to fine.
    #[arg(long)]
    pub mesh: Option<String>,

    /// Cap radius of the bubble weight.
    #[arg(long = "R")]
    pub r: Option<f64>,

    /// Zero classification band for both solves; when absent the plain
    /// solve calibrates automatically and the weighted solve uses the
    /// standing band.
    #[arg(long)]
    pub zero_tol: Option<f64>,

    /// Boundary condition at the truncation: dirichlet or natural.
    #[arg(long)]
    pub bc: Option<String>,
}

#[derive(Args)]
pub struct JacobiArgs {
    /// Hypersurface dimension n.
    #[arg(long)]
    pub n: Option<usize>,

    /// Waist radius of the catenoid.
    #[arg(long)]
    pub h0: Option<f64>,

    /// Cap radius of the bubble weight.
    #[arg(long = "R")]
    pub r: Option<f64>,

    /// Mesh size per truncation.
    #[arg(long)]
    pub mesh: Option<usize>,

    /// Comma list of strictly increasing truncation radii, at least three.
    #[arg(long)]
    pub truncations: Option<String>,

    /// Field selection: all, translation, dilation, or rotation.
    #[arg(long)]
    pub field: Option<String>,

    /// Translation axis, 1 through n+1, for --field translation.
    #[arg(long)]
    pub axis: Option<usize>,

    /// Rotation plane index, 1 through n, mixing that axis with the
    /// rotation axis, for --field rotation.
    #[arg(long)]
    pub generator: Option<usize>,
}

#[derive(Args)]
pub struct LorentzArgs {
    /// Battery to run: holder or power.
    #[arg(long)]
    pub battery: Option<String>,

    /// Number of randomized cases.
    #[arg(long)]
    pub count: Option<usize>,

    /// RNG seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args)]
pub struct EquivalenceArgs {
    /// Surface to discretize: sphere or catenoid.
    #[arg(long)]
    pub surface: Option<String>,

    /// Hypersurface dimension n.
    #[arg(long)]
    pub n: Option<usize>,

    /// Weight battery, random:<count>.
    #[arg(long)]
    pub weights: Option<String>,

    /// RNG seed.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Mesh size.
    #[arg(long)]
    pub mesh: Option<usize>,

    /// Sphere radius.
    #[arg(long)]
    pub radius: Option<f64>,

    /// Catenoid waist radius.
    #[arg(long)]
    pub h0: Option<f64>,

    /// Catenoid truncation radius.
    #[arg(long = "S")]
    pub s: Option<f64>,

    /// Zero band for the nonpositive counts; defaults per surface.
    #[arg(long)]
    pub zero_tol: Option<f64>,
}

#[derive(Args)]
pub struct NeckArgs {
    /// Mesh size per annulus.
    #[arg(long)]
    pub mesh: Option<usize>,

    /// Highest angular degree swept per case.
    #[arg(long)]
    pub modes: Option<usize>,

    /// Relative bisection tolerance for the threshold.
    #[arg(long)]
    pub rel_tol: Option<f64>,

    /// Dimension for the capacity experiment.
    #[arg(long)]
    pub n: Option<usize>,

    /// Comma list of hole radii for the capacity experiment.
    #[arg(long)]
    pub epsilons: Option<String>,

    /// Sphere radius for the curved capacity variant.
    #[arg(long)]
    pub sphere_radius: Option<f64>,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Hypersurface dimension n.
    #[arg(long)]
    pub n: Option<usize>,

    /// Mean curvature of the family, sum convention.
    #[arg(long = "H")]
    pub mean_curvature: Option<f64>,

    /// Comma list of strictly decreasing neck radii; required here or
    /// in the config file.
    #[arg(long)]
    pub necks: Option<String>,

    /// Comma list of mesh sizes per neck, coarse to fine.
    #[arg(long)]
    pub mesh: Option<String>,

    /// Zero classification band; automatic when absent.
    #[arg(long)]
    pub zero_tol: Option<f64>,

    /// Spheres per period in the limit chain.
    #[arg(long)]
    pub spheres: Option<usize>,

    /// Catenoid bubbles per period in the limit chain.
    #[arg(long)]
    pub bubbles: Option<usize>,

    /// Cap radius of the bubble weight.
    #[arg(long = "R")]
    pub r: Option<f64>,

    /// Separation scale recorded with the report.
    #[arg(long)]
    pub delta: Option<f64>,

    /// Truncation radius for the limit catenoid solves.
    #[arg(long)]
    pub bubble_truncation: Option<f64>,

    /// Comma pair coarse,fine of limit catenoid meshes.
    #[arg(long)]
    pub bubble_mesh: Option<String>,
}

/// Failed run: usage errors exit 2, solver errors exit 3.
pub enum Failure {
    Usage(String),
    Module(spindle::Error),
}

impl From<spindle::Error> for Failure {
    fn from(e: spindle::Error) -> Self {
        Failure::Module(e)
    }
}

/// Terminal state of a run that produced its reports.
pub enum Outcome {
    Converged,
    NotConverged,
}

fn error_kind(e: &spindle::Error) -> &'static str {
    use spindle::Error;
    match e {
        Error::InvalidParameter { .. } => "invalid_parameter",
        Error::BeyondHalfLength { .. } => "beyond_half_length",
        Error::ShootingDiverged { .. } => "shooting_diverged",
        Error::Misaligned { .. } => "misaligned",
        Error::BubbleCapTooLarge { .. } => "bubble_cap_too_large",
        Error::Io(_) => "io",
        Error::Serialization(_) => "serialization",
        Error::Csv(_) => "csv",
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let defaults = match &cli.config {
        Some(path) => FileDefaults::load(path)?,
        None => FileDefaults::empty(),
    };
    std::fs::create_dir_all(&cli.out).map_err(spindle::Error::Io)?;
    match &cli.command {
        Command::CatenoidIndex(args) => commands::catenoid_index(args, defaults, &cli.out),
        Command::Jacobi(args) => commands::jacobi(args, defaults, &cli.out),
        Command::Lorentz(args) => commands::lorentz(args, defaults, &cli.out),
        Command::Equivalence(args) => commands::equivalence(args, defaults, &cli.out),
        Command::Neck(args) => commands::neck(args, defaults, &cli.out),
        Command::Sweep(args) => commands::sweep(args, defaults, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Converged) => ExitCode::from(0),
        Ok(Outcome::NotConverged) => ExitCode::from(1),
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Module(e)) => {
            let payload = serde_json::json!({
                "error": { "kind": error_kind(&e), "message": e.to_string() }
            });
            println!("{payload}");
            ExitCode::from(3)
        }
    }
}
