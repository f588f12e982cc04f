//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use wradius_core::{
    evaluate_sample, numerical_radius, run_suite, sector_angle, weighted_norm, weighted_radius,
    CheckId, EnsembleSpec, Family, SuiteReport, Weight, DEFAULT_LAMBDA_GRID, DEFAULT_T_GRID,
};

use crate::error::{CliError, Result};
use crate::matrix_io::read_matrix;
use crate::report::{summary_text, write_report, Format};

#[derive(Debug, Parser)]
#[command(
    name = "wradius",
    version,
    about = "Weighted numerical radii with certified enclosures, and a verifier for the inequalities they satisfy"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certified enclosure of the numerical radius of a matrix.
    Radius {
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Weighted numerical radius and weighted norm at weight `t`.
    Weighted {
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Sector half-angle of an accretive matrix, in radians.
    Sector {
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
    },
    /// Run catalog checks over a matrix file or a generated ensemble.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Check a single matrix file instead of an ensemble.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["family", "dim", "count", "seed", "alpha", "floor"])]
    pub matrix: Option<PathBuf>,
    /// general, selfadjoint, positive, accretive_dissipative or sectorial.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sector half-angle in radians; sectorial family only.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Conditioning floor added to positive parts.
    #[arg(long)]
    pub floor: Option<f64>,
    /// `all` or a comma-separated list of check ids.
    #[arg(long, default_value = "all")]
    pub checks: String,
    /// Evaluate t-parameterised checks at this weight only.
    #[arg(long)]
    pub t: Option<f64>,
    /// Evaluate lambda-parameterised checks at this value only.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value = "json")]
    pub format: String,
    /// Where to write the machine-readable report.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

pub fn parse_checks(list: &str) -> Result<Vec<CheckId>> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(CheckId::ALL.to_vec());
    }
    let mut ids = Vec::new();
    for part in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let id: CheckId = part
            .parse()
            .map_err(|_| CliError::Usage(format!("unknown check id `{part}`")))?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    if ids.is_empty() {
        return Err(CliError::Usage("no checks selected".into()));
    }
    Ok(ids)
}

fn ensemble_spec(args: &VerifyArgs) -> Result<EnsembleSpec> {
    let missing = |flag: &str| CliError::Usage(format!("verify needs --matrix or --family with --{flag}"));
    let family_name = args.family.as_deref().ok_or_else(|| missing("family"))?;
    let family: Family = family_name
        .parse()
        .map_err(|_| CliError::Usage(format!("unknown family `{family_name}`")))?;
    let dim = args.dim.ok_or_else(|| missing("dim"))?;
    let count = args.count.ok_or_else(|| missing("count"))?;
    let seed = args.seed.unwrap_or(0);
    let spec = match (family, args.alpha) {
        (Family::Sectorial, Some(alpha)) => EnsembleSpec::sectorial(alpha, dim, count, seed)?,
        (Family::Sectorial, None) => {
            return Err(CliError::Usage("the sectorial family needs --alpha".into()))
        }
        (_, Some(_)) => return Err(CliError::Usage("--alpha applies to the sectorial family only".into())),
        (f, None) => EnsembleSpec::new(f, dim, count, seed)?,
    };
    match args.floor {
        Some(floor) => Ok(spec.with_floor(floor)?),
        None => Ok(spec),
    }
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let format: Format = args.format.parse().map_err(CliError::Usage)?;
    let checks = parse_checks(&args.checks)?;
    let t_grid: Vec<f64> = args.t.map_or(DEFAULT_T_GRID.to_vec(), |t| vec![t]);
    let lambda_grid: Vec<f64> = args.lambda.map_or(DEFAULT_LAMBDA_GRID.to_vec(), |l| vec![l]);
    let report = match &args.matrix {
        Some(path) => {
            let a = read_matrix(path)?;
            let records = evaluate_sample(&a, 0, &checks, &t_grid, &lambda_grid, args.tol)?;
            SuiteReport::from_records(None, a.dim(), 1, args.tol, records)
        }
        None => run_suite(&ensemble_spec(args)?, &checks, &t_grid, &lambda_grid, args.tol)?,
    };
    if let Some(path) = &args.out {
        write_report(&report, format, path)?;
    }
    emit(out, &summary_text(&report))?;
    Ok(report_exit_code(&report))
}

/// 0 when no record failed, 1 otherwise.
pub fn report_exit_code(report: &SuiteReport) -> i32 {
    if report.failures() == 0 {
        CliError::EXIT_OK
    } else {
        CliError::EXIT_CHECK_FAILED
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Radius { matrix, tol } => {
            let a = read_matrix(matrix)?;
            let est = numerical_radius(&a, *tol)?;
            emit(
                out,
                &format!(
                    "omega(A) = {:?}\nenclosure [{:?}, {:?}] width {:e}\nevaluations {}\n",
                    est.midpoint(),
                    est.lower,
                    est.upper,
                    est.width(),
                    est.evaluations
                ),
            )?;
        }
        Command::Weighted { matrix, t, tol } => {
            let a = read_matrix(matrix)?;
            let w = Weight::new(*t)?;
            let est = weighted_radius(&a, w, *tol)?;
            emit(
                out,
                &format!(
                    "omega_t(A) = {:?}  (t = {t})\nenclosure [{:?}, {:?}] width {:e}\n||A||_t = {:?}\n",
                    est.midpoint(),
                    est.lower,
                    est.upper,
                    est.width(),
                    weighted_norm(&a, w)
                ),
            )?;
        }
        Command::Sector { matrix } => {
            let a = read_matrix(matrix)?;
            let theta = sector_angle(&a)?;
            emit(out, &format!("sector angle = {theta:?} rad ({:.6} deg)\n", theta.to_degrees()))?;
        }
        Command::Verify(args) => return verify(args, out),
    }
    Ok(CliError::EXIT_OK)
}

/// Runs the tool on `argv` (including the program name) and returns the exit
/// code. Diagnostics go to `err`, results to `out`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { CliError::EXIT_USAGE } else { CliError::EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
