//! `catlab`: threshold tables, parameter sweeps, Vogel contours, Klyshko
//! curves and Fock-space cross-checks for a decohering even cat state.
//!
//! Exit status: 0 success, 1 I/O failure, 2 usage error, 3 numerical
//! non-convergence, 4 oracle-check failure.

mod commands;
mod config;
mod output;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use catlab::criteria::CriterionId;
use clap::{Parser, Subcommand};

use commands::{OraclePlan, SweepPlan, SweepVariable};
use config::{CommonArgs, RunConfig};
use output::Artifact;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Oracle(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Oracle(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Oracle(m) => write!(f, "oracle check failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<catlab::Error> for CliError {
    fn from(e: catlab::Error) -> Self {
        match e {
            catlab::Error::Domain(_) | catlab::Error::SingularOrdering { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "catlab",
    version,
    about = "Times at which a decohering cat state stops looking nonclassical"
)]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Threshold time of each witness (klyshko, vogel1, wigner_neg, depth, fringe)
    #[command(allow_negative_numbers = true)]
    Table,
    /// Threshold of one criterion over a range of alpha or nbar
    #[command(allow_negative_numbers = true)]
    Sweep {
        /// fringe, depth, wigner_neg, vogel1, vogel2, klyshko, depth_exact, wigner_numeric
        #[arg(long, default_value = "vogel1")]
        criterion: CriterionId,
        #[arg(long, value_enum, default_value = "alpha")]
        variable: SweepVariable,
        /// Explicit values of the swept variable
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "to", "steps"])]
        values: Option<Vec<f64>>,
        #[arg(long, requires = "to")]
        from: Option<f64>,
        #[arg(long, requires = "from")]
        to: Option<f64>,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Values of the other parameter, one series each [default: its config value]
        #[arg(long, value_delimiter = ',')]
        series: Option<Vec<f64>>,
    },
    /// The Phi(u, 0) = 1 contour over [0, tau-max]
    #[command(allow_negative_numbers = true)]
    Contour,
    /// B(n) over [0, tau-max] and its zero crossings
    #[command(allow_negative_numbers = true)]
    Klyshko {
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Compare the analytic path with Fock-space integration of the master equation
    #[command(allow_negative_numbers = true)]
    OracleCheck {
        /// Times to compare at [default: 0 and tau-max]
        #[arg(long, value_delimiter = ',')]
        taus: Option<Vec<f64>>,
        /// Refuse cutoffs above this Fock dimension
        #[arg(long, default_value_t = 400)]
        max_cutoff: usize,
    },
}

fn emit(cfg: &RunConfig, art: &Artifact) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            art.write(cfg.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            art.write(cfg.format, &mut lock)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.common)?;
    if let Some(jobs) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size worker pool: {e}")))?;
    }
    match cli.command {
        Command::Table => emit(&cfg, &commands::table(&cfg)?),
        Command::Sweep {
            criterion,
            variable,
            values,
            from,
            to,
            steps,
            series,
        } => {
            let values = match (values, from, to) {
                (Some(v), _, _) => v,
                (None, Some(a), Some(b)) => commands::linspace(a, b, steps)?,
                _ => {
                    return Err(CliError::Usage(
                        "sweep needs --values or --from/--to".into(),
                    ))
                }
            };
            let series = series.unwrap_or_else(|| match variable {
                SweepVariable::Alpha => vec![cfg.nbar],
                SweepVariable::Nbar => vec![cfg.alpha],
            });
            let plan = SweepPlan {
                criterion,
                variable,
                values,
                series,
            };
            emit(&cfg, &commands::sweep(&cfg, &plan)?)
        }
        Command::Contour => emit(&cfg, &commands::contour(&cfg)?),
        Command::Klyshko { n } => emit(&cfg, &commands::klyshko(&cfg, n)?),
        Command::OracleCheck { taus, max_cutoff } => {
            let taus = taus.unwrap_or_else(|| vec![0.0, cfg.tau_max]);
            let outcome = commands::oracle_check(&cfg, &OraclePlan { taus, max_cutoff })?;
            emit(&cfg, &outcome.artifact)?;
            if outcome.passed {
                Ok(())
            } else {
                Err(CliError::Oracle(format!(
                    "deviation above {}",
                    commands::ORACLE_TOL
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("catlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_errors_map_to_exit_codes() {
        let usage: CliError = catlab::Error::Domain("x".into()).into();
        assert_eq!(usage.exit_code(), 2);
        let numeric: CliError = catlab::Error::NonConvergence {
            what: "quadrature",
            residual: 1.0,
        }
        .into();
        assert_eq!(numeric.exit_code(), 3);
        let bracket: CliError = catlab::Error::InvalidBracket { lo: 1.0, hi: 0.0 }.into();
        assert_eq!(bracket.exit_code(), 3);
        assert_eq!(CliError::Oracle("x".into()).exit_code(), 4);
        assert_eq!(CliError::Io("x".into()).exit_code(), 1);
    }

    #[test]
    fn parser_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
