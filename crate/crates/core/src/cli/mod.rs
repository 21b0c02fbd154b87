//! Command implementations behind the `dirac-qrw` binary.
//!
//! Every command resolves a [`RunConfig`] (JSON file values overridden by
//! flags), runs deterministically and returns a [`ResultTable`] whose CSV
//! metadata echoes the resolved parameters.

mod commands;
pub mod svg;
mod table;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use thiserror::Error;

use crate::error::DiracError;
use crate::spinor::Helicity;

pub use commands::{
    cmd_asymptotic, cmd_compare, cmd_exact, cmd_figure1, cmd_walk, fitted_order, FIGURE1_NUS,
};
pub use table::{format_real, ResultTable};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Dirac(#[from] DiracError),

    #[error("cannot read config {path}: {source}")]
    ConfigRead { path: PathBuf, source: io::Error },

    #[error("invalid config {path}: {source}")]
    ConfigParse {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },

    #[error("result table: {0}")]
    Table(String),
}

impl CliError {
    /// 1 for bad input or I/O, 2 for numerical-health failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Dirac(e) if e.is_numerical() => 2,
            CliError::Table(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dirac-qrw",
    version,
    about = "Dirac evolution as a quantum random walk"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Walk a Gaussian positive-energy state and print the site distribution.
    Walk(CommonArgs),
    /// Evolve the same state with the exact propagator.
    Exact(CommonArgs),
    /// Walk-vs-exact distances over a list of lattice steps.
    Compare(CompareArgs),
    /// Histogram of X_n/(n dt) against the limit density.
    Asymptotic(CommonArgs),
    /// Limit densities for nu = 1.9, 2.5, 2.9 as SVG plus CSV.
    Figure1(Figure1Args),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Localization parameter of the momentum Gaussian.
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    /// Lattice step (equal to the time step, c = 1).
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    /// Total time; the step count is round(t/dt).
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Helicity branch.
    #[arg(long, value_parser = ["plus", "minus"])]
    pub branch: Option<String>,
    /// Output path (CSV); standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with the same keys as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Strictly decreasing lattice steps, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub dt_list: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Figure1Args {
    /// SVG path; the CSV is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Flat JSON configuration mirroring the command-line flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub nu: Option<f64>,
    pub dt: Option<f64>,
    pub t: Option<f64>,
    pub branch: Option<String>,
    pub out: Option<PathBuf>,
    #[serde(alias = "dt-list")]
    pub dt_list: Option<Vec<f64>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::ConfigParse {
            path: path.to_owned(),
            source,
        })
    }

    fn overridden_by(self, flags: FileConfig) -> FileConfig {
        FileConfig {
            nu: flags.nu.or(self.nu),
            dt: flags.dt.or(self.dt),
            t: flags.t.or(self.t),
            branch: flags.branch.or(self.branch),
            out: flags.out.or(self.out),
            dt_list: flags.dt_list.or(self.dt_list),
        }
    }
}

impl From<&CommonArgs> for FileConfig {
    fn from(a: &CommonArgs) -> Self {
        FileConfig {
            nu: a.nu,
            dt: a.dt,
            t: a.t,
            branch: a.branch.clone(),
            out: a.out.clone(),
            dt_list: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Walk,
    Exact,
    Compare,
    Asymptotic,
    Figure1,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Walk => "walk",
            CommandKind::Exact => "exact",
            CommandKind::Compare => "compare",
            CommandKind::Asymptotic => "asymptotic",
            CommandKind::Figure1 => "figure1",
        }
    }
}

/// Fully resolved parameters of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub nu: f64,
    pub dt: f64,
    pub t_requested: f64,
    pub n_steps: usize,
    /// `n_steps * dt`.
    pub t: f64,
    pub helicity: Helicity,
    pub out: Option<PathBuf>,
    pub dt_list: Vec<f64>,
}

pub const DEFAULT_NU: f64 = 2.5;
pub const DEFAULT_DT: f64 = 0.005;
pub const DEFAULT_T: f64 = 50.0;
pub const COMPARE_NU: f64 = 1.0;
pub const COMPARE_T: f64 = 2.0;
pub const COMPARE_DT_LIST: [f64; 3] = [0.02, 0.01, 0.005];

fn steps_for(t: f64, dt: f64) -> Result<usize, CliError> {
    let n = (t / dt).round();
    if n > 1e9 {
        return Err(CliError::Usage(format!("t/dt = {n} steps is too many")));
    }
    Ok(n as usize)
}

impl RunConfig {
    /// Resolves defaults, file values and flags (in increasing precedence).
    pub fn resolve(command: CommandKind, file: FileConfig, flags: FileConfig) -> Result<Self, CliError> {
        let merged = file.overridden_by(flags);
        let compare = command == CommandKind::Compare;
        let nu = merged.nu.unwrap_or(if compare { COMPARE_NU } else { DEFAULT_NU });
        let t_requested = merged.t.unwrap_or(if compare { COMPARE_T } else { DEFAULT_T });
        let dt_list = if compare {
            merged.dt_list.unwrap_or_else(|| COMPARE_DT_LIST.to_vec())
        } else {
            if merged.dt_list.is_some() {
                return Err(CliError::Usage("dt_list applies to compare only".into()));
            }
            Vec::new()
        };
        let dt = if compare {
            *dt_list
                .last()
                .ok_or_else(|| CliError::Usage("dt list is empty".into()))?
        } else {
            merged.dt.unwrap_or(DEFAULT_DT)
        };
        let helicity = match merged.branch.as_deref() {
            None => Helicity::Plus,
            Some(b) => b.parse()?,
        };

        if !(nu.is_finite() && nu > 0.0) {
            return Err(CliError::Usage(format!("nu must be positive, got {nu}")));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(CliError::Usage(format!("dt must be positive, got {dt}")));
        }
        if !(t_requested.is_finite() && t_requested >= 0.0) {
            return Err(CliError::Usage(format!(
                "t must be non-negative, got {t_requested}"
            )));
        }
        if compare {
            if merged.dt.is_some() {
                return Err(CliError::Usage("compare takes --dt-list, not --dt".into()));
            }
            if dt_list.len() < 2 {
                return Err(CliError::Usage("compare needs at least two dt values".into()));
            }
            if dt_list.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
                return Err(CliError::Usage("dt values must be positive".into()));
            }
            if dt_list.windows(2).any(|w| w[1] >= w[0]) {
                return Err(CliError::Usage("dt list must be strictly decreasing".into()));
            }
        }
        let n_steps = steps_for(t_requested, dt)?;
        Ok(RunConfig {
            command,
            nu,
            dt,
            t_requested,
            n_steps,
            t: n_steps as f64 * dt,
            helicity,
            out: merged.out,
            dt_list,
        })
    }

    pub fn from_command(command: &Command) -> Result<Self, CliError> {
        let (kind, common, dt_list) = match command {
            Command::Walk(a) => (CommandKind::Walk, a.clone(), None),
            Command::Exact(a) => (CommandKind::Exact, a.clone(), None),
            Command::Asymptotic(a) => (CommandKind::Asymptotic, a.clone(), None),
            Command::Compare(a) => (CommandKind::Compare, a.common.clone(), a.dt_list.clone()),
            Command::Figure1(a) => {
                let common = CommonArgs {
                    out: a.out.clone(),
                    ..Default::default()
                };
                (CommandKind::Figure1, common, None)
            }
        };
        let file = match &common.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let mut flags = FileConfig::from(&common);
        flags.dt_list = dt_list;
        RunConfig::resolve(kind, file, flags)
    }

    /// Adds the resolved parameters to a table's metadata.
    pub fn echo(&self, table: &mut ResultTable) {
        table.meta("program", concat!("dirac-qrw ", env!("CARGO_PKG_VERSION")));
        table.meta("command", self.command.name());
        if self.command == CommandKind::Figure1 {
            return;
        }
        table.meta("nu", format_real(self.nu));
        table.meta("branch", self.helicity);
        table.meta("t_requested", format_real(self.t_requested));
        if self.command == CommandKind::Compare {
            let list: Vec<String> = self.dt_list.iter().map(|d| format_real(*d)).collect();
            table.meta("dt_list", list.join(" "));
        } else {
            table.meta("dt", format_real(self.dt));
            table.meta("n_steps", self.n_steps);
            table.meta("t", format_real(self.t));
        }
    }
}

/// Result of a command: the table plus an optional figure and any warnings.
#[derive(Debug, Clone, Default)]
pub struct Output {
    pub table: ResultTable,
    pub svg: Option<String>,
    pub warnings: Vec<String>,
}

pub fn execute(config: &RunConfig) -> Result<Output, CliError> {
    match config.command {
        CommandKind::Walk => Ok(Output {
            table: cmd_walk(config)?,
            ..Default::default()
        }),
        CommandKind::Exact => Ok(Output {
            table: cmd_exact(config)?,
            ..Default::default()
        }),
        CommandKind::Compare => Ok(Output {
            table: cmd_compare(config)?,
            ..Default::default()
        }),
        CommandKind::Asymptotic => {
            let mut warnings = Vec::new();
            if config.n_steps < 1000 {
                warnings.push(format!(
                    "only {} steps; the histogram is far from the long-time limit",
                    config.n_steps
                ));
            }
            Ok(Output {
                table: cmd_asymptotic(config)?,
                svg: None,
                warnings,
            })
        }
        CommandKind::Figure1 => {
            let (table, svg) = cmd_figure1(config)?;
            Ok(Output {
                table,
                svg: Some(svg),
                warnings: Vec::new(),
            })
        }
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })
}

pub const FIGURE1_DEFAULT_OUT: &str = "figure1.svg";

/// Writes the outputs of a run, returning the paths written.
pub fn write_output(config: &RunConfig, output: &Output) -> Result<Vec<PathBuf>, CliError> {
    let csv = output.table.to_csv_string();
    match (&output.svg, &config.out) {
        (Some(svg), out) => {
            let svg_path = out.clone().unwrap_or_else(|| PathBuf::from(FIGURE1_DEFAULT_OUT));
            let csv_path = svg_path.with_extension("csv");
            write_file(&svg_path, svg.as_bytes())?;
            write_file(&csv_path, csv.as_bytes())?;
            Ok(vec![svg_path, csv_path])
        }
        (None, Some(path)) => {
            write_file(path, csv.as_bytes())?;
            Ok(vec![path.clone()])
        }
        (None, None) => {
            use std::io::Write;
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(csv.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|source| CliError::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
            Ok(Vec::new())
        }
    }
}

/// Resolves, executes and writes one parsed command.
pub fn run(cli: &Cli) -> Result<(Output, Vec<PathBuf>), CliError> {
    let config = RunConfig::from_command(&cli.command)?;
    let output = execute(&config)?;
    let written = write_output(&config, &output)?;
    Ok((output, written))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(nu: Option<f64>, dt: Option<f64>, t: Option<f64>) -> FileConfig {
        FileConfig {
            nu,
            dt,
            t,
            ..Default::default()
        }
    }

    #[test]
    fn defaults_and_rounding() {
        let c = RunConfig::resolve(CommandKind::Walk, FileConfig::default(), FileConfig::default()).unwrap();
        assert_eq!((c.nu, c.dt, c.n_steps), (2.5, 0.005, 10_000));
        let c = RunConfig::resolve(
            CommandKind::Walk,
            FileConfig::default(),
            flags(None, Some(0.3), Some(1.0)),
        )
        .unwrap();
        assert_eq!(c.n_steps, 3);
        assert!((c.t - 0.9).abs() < 1e-15);
    }

    #[test]
    fn flags_override_file() {
        let file = FileConfig {
            nu: Some(1.9),
            t: Some(3.0),
            ..Default::default()
        };
        let c = RunConfig::resolve(CommandKind::Exact, file, flags(Some(2.9), None, None)).unwrap();
        assert_eq!(c.nu, 2.9);
        assert_eq!(c.t_requested, 3.0);
    }

    #[test]
    fn rejects_bad_values() {
        for f in [
            flags(Some(-1.0), None, None),
            flags(None, Some(0.0), None),
            flags(None, None, Some(-2.0)),
        ] {
            let e = RunConfig::resolve(CommandKind::Walk, FileConfig::default(), f).unwrap_err();
            assert_eq!(e.exit_code(), 1);
        }
    }

    #[test]
    fn compare_list_rules() {
        let list = |v: Vec<f64>| FileConfig {
            dt_list: Some(v),
            ..Default::default()
        };
        let c =
            RunConfig::resolve(CommandKind::Compare, FileConfig::default(), FileConfig::default()).unwrap();
        assert_eq!(c.dt_list, COMPARE_DT_LIST.to_vec());
        assert_eq!(c.n_steps, 400);
        for bad in [vec![0.01], vec![0.01, 0.02], vec![0.01, 0.01], vec![0.02, -0.01]] {
            assert!(RunConfig::resolve(CommandKind::Compare, FileConfig::default(), list(bad)).is_err());
        }
        assert!(RunConfig::resolve(CommandKind::Walk, FileConfig::default(), list(vec![0.2, 0.1])).is_err());
    }

    #[test]
    fn file_config_is_strict() {
        let ok: FileConfig = serde_json::from_str(r#"{"nu": 1.9, "dt-list": [0.1, 0.05]}"#).unwrap();
        assert_eq!(ok.dt_list, Some(vec![0.1, 0.05]));
        assert!(serde_json::from_str::<FileConfig>(r#"{"mu": 1.0}"#).is_err());
    }
}
