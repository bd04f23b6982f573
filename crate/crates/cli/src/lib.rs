//! Command-line front end for the `qrde` model crate.
//!
//! Every subcommand produces a list of [`report::ReportRow`]s that is written
//! as CSV or JSON. Exit codes: 0 on success, 1 on invalid input, 2 when a
//! self-check (`tables`, `oracle-check`) fails.

pub mod commands;
pub mod report;
pub mod sweep;
pub mod tables;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use qrde::{DilemmaParams, EntanglementAngle};
use report::{write_rows, Format, ReportRow};
use sweep::{Quantity, Range, SweepConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] qrde::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_CHECK_FAILED: u8 = 2;

/// Rows plus whether the command's own checks passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub rows: Vec<ReportRow>,
    pub passed: bool,
}

impl Outcome {
    pub fn rows(rows: Vec<ReportRow>) -> Self {
        Self { rows, passed: true }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qrde",
    version,
    about = "Equilibria and risk-dominant selection in classical and EWL quantum 2x2 dilemmas"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output encoding
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to FILE instead of stdout
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Point {
    /// Gamble-intending dilemma strength, in [-1, 1]
    #[arg(long = "dg", allow_negative_numbers = true)]
    pub d_g: f64,
    /// Risk-averting dilemma strength, in [-1, 1]
    #[arg(long = "dr", allow_negative_numbers = true)]
    pub d_r: f64,
}

#[derive(Debug, Args)]
pub struct Angle {
    /// Entanglement angle (radians unless --degrees)
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Read angles in degrees
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dilemma class with its pure equilibria and payoffs
    Classify {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        output: Output,
    },
    /// Equilibria, classical or (with --gamma) of the pure quantum game
    Ne {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        angle: Angle,
        #[command(flatten)]
        output: Output,
    },
    /// Risk-dominant selection, classical or (with --gamma) quantum
    Rde {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        angle: Angle,
        #[command(flatten)]
        output: Output,
    },
    /// Sensitivity of the transitional selection p*
    Sensitivity {
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        angle: Angle,
        #[command(flatten)]
        output: Output,
    },
    /// Grid sweep; ranges are VALUE or START:STOP:STEPS
    Sweep {
        /// Range of d_g within [-1, 1]
        #[arg(long = "dg", allow_hyphen_values = true)]
        d_g: Range,
        /// Range of d_r within [-1, 1]
        #[arg(long = "dr", allow_hyphen_values = true)]
        d_r: Range,
        /// Range of entanglement angles; omit for classical rows
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<Range>,
        /// Read angles in degrees
        #[arg(long)]
        degrees: bool,
        /// Comma-separated subset of class,ne,rde,payoffs,sensitivity,thresholds
        #[arg(long, value_delimiter = ',', default_values_t = Quantity::ALL)]
        quantities: Vec<Quantity>,
        /// Accepted for interface uniformity; sweeps draw no random numbers
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Recompute the reference tables and compare with the printed values
    Tables {
        #[command(flatten)]
        output: Output,
    },
    /// State-vector simulation against the closed-form distribution
    OracleCheck {
        /// Points per axis of the (p, q, gamma) grid, at least 2
        #[arg(long, default_value_t = 11)]
        grid: usize,
        /// Seed for the additional random points
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Swap in the sigma_x entangling gate; the check is expected to fail
        #[arg(long)]
        tampered_gate: bool,
        #[command(flatten)]
        output: Output,
    },
}

fn params(point: &Point) -> Result<DilemmaParams, CliError> {
    Ok(DilemmaParams::new(point.d_g, point.d_r)?)
}

pub fn angle_from(value: f64, degrees: bool) -> Result<EntanglementAngle, CliError> {
    Ok(if degrees {
        EntanglementAngle::from_degrees(value)?
    } else {
        EntanglementAngle::new(value)?
    })
}

fn optional_angle(angle: &Angle) -> Result<Option<EntanglementAngle>, CliError> {
    angle
        .gamma
        .map(|g| angle_from(g, angle.degrees))
        .transpose()
}

fn required_angle(angle: &Angle) -> Result<EntanglementAngle, CliError> {
    optional_angle(angle)?.ok_or_else(|| CliError::Usage("--gamma is required".into()))
}

fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Classify { point, .. } => Ok(Outcome::rows(commands::classify(params(point)?))),
        Command::Ne { point, angle, .. } => Ok(Outcome::rows(commands::ne(
            params(point)?,
            optional_angle(angle)?,
        )?)),
        Command::Rde { point, angle, .. } => Ok(Outcome::rows(vec![commands::rde(
            params(point)?,
            optional_angle(angle)?,
        )?])),
        Command::Sensitivity { point, angle, .. } => {
            Ok(Outcome::rows(vec![commands::sensitivity(
                params(point)?,
                required_angle(angle)?,
            )?]))
        }
        Command::Sweep {
            d_g,
            d_r,
            gamma,
            degrees,
            quantities,
            ..
        } => {
            let config = SweepConfig::new(*d_g, *d_r, *gamma, *degrees, quantities.clone())?;
            Ok(Outcome::rows(sweep::run(&config)))
        }
        Command::Tables { .. } => Ok(tables::run()),
        Command::OracleCheck {
            grid,
            seed,
            tampered_gate,
            ..
        } => commands::oracle_check(*grid, *seed, *tampered_gate),
    }
}

fn output_of(command: &Command) -> &Output {
    match command {
        Command::Classify { output, .. }
        | Command::Ne { output, .. }
        | Command::Rde { output, .. }
        | Command::Sensitivity { output, .. }
        | Command::Sweep { output, .. }
        | Command::Tables { output }
        | Command::OracleCheck { output, .. } => output,
    }
}

fn emit(rows: &[ReportRow], output: &Output, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &output.out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            write_rows(rows, output.format, &mut file)?;
            file.flush()?;
        }
        None => write_rows(rows, output.format, stdout)?,
    }
    Ok(())
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let result = execute(&cli.command).and_then(|outcome| {
        emit(&outcome.rows, output_of(&cli.command), stdout)?;
        Ok(outcome.passed)
    });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            let _ = writeln!(stderr, "error: check failed");
            EXIT_CHECK_FAILED
        }
        // a closed downstream pipe is not an error of ours
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INVALID
        }
    }
}
