use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use envelope_witness::dephasing::DecoherenceFunction;
use envelope_witness::linalg::{BlochVector, Mat3};
use envelope_witness::states::{ExampleSpec, Family};
use envelope_witness::DEFAULT_WITNESS_TOL;
use envelope_witness_cli::commands::{
    cmd_dephasing, cmd_envelope, cmd_example, cmd_oracle_check, cmd_trajectory, cmd_witness,
    load_gamma_table, report_table, summarize, CoherenceSource, DephasingConfig, EnvelopeConfig,
    ExampleConfig, OracleConfig, TrajectoryConfig, WitnessConfig,
};
use envelope_witness_cli::grid::{parse_bloch, parse_mat3, parse_scalar, Grid, TimeAxis};
use envelope_witness_cli::table::Format;
use envelope_witness_cli::{CliError, Result};

const THREADS_VAR: &str = "ENVELOPE_WITNESS_THREADS";

/// Single-observable witness of initial system-environment correlations.
#[derive(Debug, Parser)]
#[command(name = "envelope-witness", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Factorized envelope [z_min, z_max] over a time grid.
    Envelope {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_bloch)]
        s: BlochVector,
        #[command(flatten)]
        exchange: ExchangeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Correlated trajectory of a canonical example state against its envelope.
    Example {
        #[arg(long)]
        family: Family,
        /// Mixing weight; ignored for `bell`.
        #[arg(long, value_parser = parse_scalar)]
        p: Option<f64>,
        #[arg(long, value_parser = parse_scalar, default_value_t = DEFAULT_WITNESS_TOL)]
        tol: f64,
        #[command(flatten)]
        exchange: ExchangeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Like `example`, for an arbitrary state given by (s, e, C).
    Trajectory {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_bloch)]
        s: BlochVector,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_bloch)]
        e: BlochVector,
        /// Correlation tensor C_ij = <σ_i ⊗ σ_j>, nine values row by row.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_mat3)]
        corr: Mat3,
        #[arg(long, value_parser = parse_scalar, default_value_t = DEFAULT_WITNESS_TOL)]
        tol: f64,
        #[command(flatten)]
        exchange: ExchangeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Test a measured (t, z) trajectory against the factorized envelope.
    Witness {
        /// Two-column CSV file, or `-` for stdin.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_bloch)]
        s: BlochVector,
        #[arg(long = "J", value_parser = parse_scalar, default_value_t = 1.0)]
        coupling: f64,
        /// Noise allowance; required for external data.
        #[arg(long, value_parser = parse_scalar)]
        tol: f64,
        #[arg(long, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coherence envelope e^{-Γ(t)} under pure dephasing.
    Dephasing {
        /// `linear:κ` or `power:κ,η`.
        #[arg(
            long,
            conflicts_with = "gamma_table",
            required_unless_present = "gamma_table"
        )]
        gamma: Option<DecoherenceFunction>,
        /// Two-column (t, Γ) table, interpolated linearly.
        #[arg(long)]
        gamma_table: Option<PathBuf>,
        /// Initial coherence for a simulated factorized run.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_scalar, conflicts_with = "data")]
        x0: Option<f64>,
        #[arg(long, allow_hyphen_values = true, requires = "x0")]
        t_grid: Option<Grid>,
        /// Measured (t, x) trajectory instead of a simulation.
        #[arg(long, required_unless_present = "x0")]
        data: Option<PathBuf>,
        #[arg(long, value_parser = parse_scalar)]
        tol: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the closed-form envelope with a brute-force sweep.
    OracleCheck {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_bloch, default_value = "0,0,0")]
        s: BlochVector,
        #[arg(long, default_value_t = 2000)]
        resolution: usize,
        #[arg(long, hide = true, default_value_t = 0.0)]
        corrupt_bound: f64,
        #[command(flatten)]
        exchange: ExchangeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct ExchangeArgs {
    /// Exchange coupling J.
    #[arg(long = "J", value_parser = parse_scalar, default_value_t = 1.0)]
    coupling: f64,
    /// Grid in α = Jt as `start,end,n` [default: 0,pi,101].
    #[arg(long, allow_hyphen_values = true, conflicts_with = "t_grid")]
    alpha_grid: Option<Grid>,
    /// Grid in t as `start,end,n`.
    #[arg(long, allow_hyphen_values = true)]
    t_grid: Option<Grid>,
}

impl ExchangeArgs {
    fn axis(&self) -> Result<TimeAxis> {
        Ok(match (self.alpha_grid, self.t_grid) {
            (_, Some(g)) => TimeAxis::Time(g),
            (Some(g), None) => TimeAxis::Alpha(g),
            (None, None) => TimeAxis::Alpha(Grid::new(0.0, std::f64::consts::PI, 101)?),
        })
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value.trim().parse().map_err(|_| {
        CliError::Config(format!(
            "{THREADS_VAR} must be a positive integer, got {value:?}"
        ))
    })?;
    if n == 0 {
        return Err(CliError::Config(format!("{THREADS_VAR} must be positive")));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

/// Returns whether the run passed; only `oracle-check` can fail on data.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Envelope {
            s,
            exchange,
            output,
        } => {
            let table = cmd_envelope(&EnvelopeConfig {
                coupling: exchange.coupling,
                s,
                axis: exchange.axis()?,
            })?;
            emit(output.out.as_deref(), &table.render(output.format)?)?;
        }
        Command::Example {
            family,
            p,
            tol,
            exchange,
            output,
        } => {
            let spec = match (family, p) {
                (Family::Bell, _) => ExampleSpec::bell(),
                (_, Some(p)) => ExampleSpec::new(family, p)?,
                (_, None) => {
                    return Err(CliError::Config(format!(
                        "--p is required for family {family}"
                    )))
                }
            };
            let run = cmd_example(&ExampleConfig {
                coupling: exchange.coupling,
                spec,
                axis: exchange.axis()?,
                tol,
            })?;
            emit(output.out.as_deref(), &run.table.render(output.format)?)?;
            eprintln!("{}", summarize(&run.report));
        }
        Command::Trajectory {
            s,
            e,
            corr,
            tol,
            exchange,
            output,
        } => {
            let run = cmd_trajectory(&TrajectoryConfig {
                coupling: exchange.coupling,
                s,
                e,
                correlation: corr,
                axis: exchange.axis()?,
                tol,
            })?;
            emit(output.out.as_deref(), &run.table.render(output.format)?)?;
            eprintln!("{}", summarize(&run.report));
        }
        Command::Witness {
            data,
            s,
            coupling,
            tol,
            format,
            out,
        } => {
            let report = cmd_witness(&WitnessConfig {
                coupling,
                s,
                data,
                tol,
            })?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
                Format::Csv => report_table(&report).to_csv(),
            };
            emit(out.as_deref(), &text)?;
            eprintln!("{}", summarize(&report));
        }
        Command::Dephasing {
            gamma,
            gamma_table,
            x0,
            t_grid,
            data,
            tol,
            output,
        } => {
            let gamma = match (gamma, gamma_table) {
                (Some(g), _) => g,
                (None, Some(path)) => load_gamma_table(&path)?,
                (None, None) => {
                    return Err(CliError::Config(
                        "one of --gamma or --gamma-table is required".into(),
                    ))
                }
            };
            let (source, tol) = match (x0, data) {
                (Some(x0), _) => {
                    let grid = match t_grid {
                        Some(g) => g,
                        None => Grid::new(0.0, 5.0, 101)?,
                    };
                    (
                        CoherenceSource::Simulated { x0, grid },
                        tol.unwrap_or(DEFAULT_WITNESS_TOL),
                    )
                }
                (None, Some(path)) => {
                    let tol = tol
                        .ok_or_else(|| CliError::Config("--tol is required with --data".into()))?;
                    (CoherenceSource::Data(path), tol)
                }
                (None, None) => {
                    return Err(CliError::Config("one of --x0 or --data is required".into()))
                }
            };
            let run = cmd_dephasing(&DephasingConfig { gamma, source, tol })?;
            emit(output.out.as_deref(), &run.table.render(output.format)?)?;
            eprintln!("{}", summarize(&run.report));
        }
        Command::OracleCheck {
            s,
            resolution,
            corrupt_bound,
            exchange,
            output,
        } => {
            let outcome = cmd_oracle_check(&OracleConfig {
                coupling: exchange.coupling,
                s,
                axis: exchange.axis()?,
                resolution,
                analytic_shrink: corrupt_bound,
            })?;
            emit(output.out.as_deref(), &outcome.table.render(output.format)?)?;
            let verdict = if outcome.passed() { "PASS" } else { "FAIL" };
            eprintln!(
                "oracle-check {verdict}: {} inclusion failures over {} points, largest endpoint gap {:.3e}",
                outcome.failures,
                outcome.table.rows.len(),
                outcome.max_gap
            );
            return Ok(outcome.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
