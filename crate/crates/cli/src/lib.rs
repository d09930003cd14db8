//! Command-line front end: argument parsing, dispatch and output.
//!
//! Physical inputs are SI; everything past the `design` command is
//! dimensionless (couplings `ω = ΔT/ħ`, times in units of `T`).

pub mod commands;
pub mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use gravent_core::fluctuations::DEFAULT_SEED;
use gravent_core::{FluctuationSpec, SimPoint};

use crate::commands::{Axis, CliError, CliResult, DesignRequest, Quantity, Range, SweepRequest};
use crate::table::{Format, Table};

/// Environment variable that overrides the default output format.
pub const FORMAT_ENV: &str = "GRAVENT_FORMAT";

#[derive(Debug, Parser)]
#[command(
    name = "gravent",
    version,
    about = "Entanglement of two gravitationally coupled particles under dephasing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, env = FORMAT_ENV, default_value = "csv")]
    pub format: Format,
    /// Write data to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct JitterArgs {
    /// Standard deviation of the dimensionless interaction time.
    #[arg(long = "s-t", default_value_t = 0.0, allow_negative_numbers = true)]
    pub s_t: f64,
    /// Standard deviation of the dimensionless coupling.
    #[arg(long = "s-omega", default_value_t = 0.0, allow_negative_numbers = true)]
    pub s_omega: f64,
}

impl JitterArgs {
    fn spec(&self) -> CliResult<FluctuationSpec> {
        Ok(FluctuationSpec::new(self.s_t, self.s_omega)?)
    }
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Dimensionless coupling ω = ΔT/ħ.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: f64,
    /// Dimensionless time (physical time / decoherence time).
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
}

impl PointArgs {
    fn point(&self) -> CliResult<SimPoint> {
        Ok(SimPoint::new(self.omega, self.t)?)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive the dimensionless model from SI experiment parameters.
    Design {
        /// Mass of the first particle (kg).
        #[arg(long, allow_negative_numbers = true)]
        m1: f64,
        /// Mass of the second particle (kg).
        #[arg(long, allow_negative_numbers = true)]
        m2: f64,
        /// Minimal distance between the particles (m).
        #[arg(long, allow_negative_numbers = true)]
        d: f64,
        /// Separation of the superposed positions (m).
        #[arg(long = "L", allow_negative_numbers = true)]
        l: f64,
        /// Decoherence time (s).
        #[arg(long = "T", allow_negative_numbers = true)]
        t_decoherence: Option<f64>,
        /// Report the decoherence time needed to reach this ω.
        #[arg(long, allow_negative_numbers = true)]
        target_omega: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the state at one point (jitter-averaged if --s-t/--s-omega are set).
    Evolve {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        jitter: JitterArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tabulate a quantity over a grid in t or ω.
    Sweep {
        #[arg(long, value_enum)]
        quantity: Quantity,
        /// START STOP STEPS; the grid includes both ends.
        #[arg(long, num_args = 3, value_names = ["START", "STOP", "STEPS"], allow_negative_numbers = true, required = true)]
        range: Vec<f64>,
        /// Axis swept by --range (default: t, or omega for optimal_time and jitter_bound).
        #[arg(long, value_enum)]
        over: Option<Axis>,
        #[arg(long, allow_negative_numbers = true)]
        omega: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
        #[command(flatten)]
        jitter: JitterArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// First minimum of the PT eigenvalue for a coupling ω > 1.
    OptimalTime {
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Largest tolerable variance of the interaction time.
    JitterBound {
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Coupling above which the state can violate CHSH.
    ChshThreshold {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample the jitter-averaged state and compare with the first-order formula.
    MonteCarlo {
        #[command(flatten)]
        point: PointArgs,
        #[command(flatten)]
        jitter: JitterArgs,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Result of one invocation: the data table, where it goes, and diagnostics
/// meant for the error stream.
pub struct Outcome {
    pub table: Table,
    pub output: OutputTarget,
    pub notes: Vec<String>,
}

pub struct OutputTarget {
    pub format: Format,
    pub path: Option<PathBuf>,
}

impl From<&OutputArgs> for OutputTarget {
    fn from(a: &OutputArgs) -> Self {
        Self {
            format: a.format,
            path: a.output.clone(),
        }
    }
}

pub fn execute(command: &Command) -> CliResult<Outcome> {
    let done = |table: Table, output: &OutputArgs, notes: Vec<String>| Outcome {
        table,
        output: output.into(),
        notes,
    };
    Ok(match command {
        Command::Design {
            m1,
            m2,
            d,
            l,
            t_decoherence,
            target_omega,
            output,
        } => {
            let req = DesignRequest {
                m1: *m1,
                m2: *m2,
                d: *d,
                l: *l,
                t_decoherence: *t_decoherence,
                target_omega: *target_omega,
            };
            done(commands::run_design(&req)?, output, Vec::new())
        }
        Command::Evolve {
            point,
            jitter,
            output,
        } => {
            let (table, warnings) = commands::run_evolve(point.point()?, jitter.spec()?)?;
            done(
                table,
                output,
                warnings
                    .into_iter()
                    .map(|w| format!("warning: {w}"))
                    .collect(),
            )
        }
        Command::Sweep {
            quantity,
            range,
            over,
            omega,
            t,
            jitter,
            output,
        } => {
            let default_axis = match quantity {
                Quantity::OptimalTime | Quantity::JitterBound => Axis::Omega,
                _ => Axis::T,
            };
            let req = SweepRequest {
                quantity: *quantity,
                over: over.unwrap_or(default_axis),
                range: Range::from_args(range)?,
                omega: *omega,
                t: *t,
                jitter: jitter.spec()?,
            };
            done(commands::run_sweep(&req)?, output, Vec::new())
        }
        Command::OptimalTime { omega, output } => {
            done(commands::run_optimal_time(*omega)?, output, Vec::new())
        }
        Command::JitterBound { omega, output } => {
            done(commands::run_jitter_bound(*omega)?, output, Vec::new())
        }
        Command::ChshThreshold { output } => {
            done(commands::run_chsh_threshold(), output, Vec::new())
        }
        Command::MonteCarlo {
            point,
            jitter,
            samples,
            seed,
            output,
        } => {
            let (table, clamped) =
                commands::run_monte_carlo(point.point()?, jitter.spec()?, *samples, *seed)?;
            let notes = vec![format!(
                "note: seed={seed} samples={samples} clamped_negative_times={clamped}"
            )];
            done(table, output, notes)
        }
    })
}

/// Writes the table to its destination.
pub fn emit(outcome: &Outcome) -> CliResult<()> {
    let io_err = |e: io::Error| CliError::input(format!("cannot write output: {e}"));
    match &outcome.output.path {
        Some(path) => {
            let file = File::create(path).map_err(io_err)?;
            let mut w = BufWriter::new(file);
            outcome
                .table
                .write(outcome.output.format, &mut w)
                .map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            outcome
                .table
                .write(outcome.output.format, stdout.lock())
                .map_err(io_err)
        }
    }
}
