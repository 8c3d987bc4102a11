//! Run configuration. Precedence, lowest first: built-in defaults, the JSON
//! file given by `--config`, then command-line flags (`CATLAB_JOBS` stands in
//! for `--jobs` when the flag is absent).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use catlab::criteria::{tau_nonclassical_depth, DEFAULT_TAU_TOL};
use catlab::ThermalChannel;
use clap::Args;
use serde::Deserialize;

use crate::output::format_num;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format '{s}' (expected csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Cat amplitude (real, >= 0) [default: 2]
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Mean thermal photon number of the bath [default: 100]
    #[arg(long, global = true)]
    pub nbar: Option<f64>,
    /// Damping rate; times are reported as tau = gamma t [default: 1]
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// End of the time window [default: 4 tau_P]
    #[arg(long = "tau-max", global = true)]
    pub tau_max: Option<f64>,
    /// Bisection tolerance on threshold times [default: 1e-7]
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Samples along the time axis for contour and klyshko [default: 201]
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format: csv or json [default: csv]
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Flat JSON file with any of the keys above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads [default: logical cores]
    #[arg(long, global = true, env = "CATLAB_JOBS")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    alpha: Option<f64>,
    nbar: Option<f64>,
    gamma: Option<f64>,
    tau_max: Option<f64>,
    tol: Option<f64>,
    points: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
    jobs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub alpha: f64,
    pub nbar: f64,
    pub gamma: f64,
    pub tau_max: f64,
    pub tol: f64,
    pub points: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => read_file(path)?,
            None => FileConfig::default(),
        };
        let alpha = args.alpha.or(file.alpha).unwrap_or(2.0);
        let nbar = args.nbar.or(file.nbar).unwrap_or(100.0);
        let gamma = args.gamma.or(file.gamma).unwrap_or(1.0);
        let tol = args.tol.or(file.tol).unwrap_or(DEFAULT_TAU_TOL);
        let points = args.points.or(file.points).unwrap_or(201);
        let channel =
            ThermalChannel::new(gamma, nbar).map_err(|e| CliError::Usage(e.to_string()))?;
        let tau_max = match args.tau_max.or(file.tau_max) {
            Some(t) => t,
            None => {
                let tau_p = tau_nonclassical_depth(&channel);
                // zero temperature: nothing decoheres in finite time, pick a unit window
                if tau_p.is_finite() {
                    4.0 * tau_p
                } else {
                    1.0
                }
            }
        };
        let cfg = RunConfig {
            alpha,
            nbar,
            gamma,
            tau_max,
            tol,
            points,
            out: args.out.clone().or(file.out),
            format: args.format.or(file.format).unwrap_or(Format::Csv),
            jobs: args.jobs.or(file.jobs),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |what: &str, v: String| Err(CliError::Usage(format!("invalid {what}: {v}")));
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad("alpha (must be finite and >= 0)", self.alpha.to_string());
        }
        if !(self.tau_max > 0.0 && self.tau_max.is_finite()) {
            return bad("tau-max (must be > 0)", self.tau_max.to_string());
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad("tol (must be > 0)", self.tol.to_string());
        }
        if self.points < 2 {
            return bad("points (need at least 2)", self.points.to_string());
        }
        if self.jobs == Some(0) {
            return bad("jobs (must be >= 1)", "0".into());
        }
        Ok(())
    }

    pub fn channel(&self) -> ThermalChannel {
        ThermalChannel::new(self.gamma, self.nbar).expect("validated on resolve")
    }

    /// `points` equally spaced times on `[0, tau_max]`.
    pub fn time_grid(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..=n)
            .map(|i| self.tau_max * i as f64 / n as f64)
            .collect()
    }

    /// Metadata recorded at the top of every artifact.
    pub fn metadata(&self) -> Vec<(String, String)> {
        vec![
            ("alpha".into(), format_num(self.alpha)),
            ("nbar".into(), format_num(self.nbar)),
            ("gamma".into(), format_num(self.gamma)),
            ("tau_max".into(), format_num(self.tau_max)),
            ("tol".into(), format_num(self.tol)),
            ("points".into(), self.points.to_string()),
        ]
    }
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}
