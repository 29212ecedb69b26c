//! Argument parsing. Flags map onto an [`ExperimentConfig`], which is then
//! executed; `run` executes a config file directly.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use petrocheck_core::barriers::BarrierKind;

use crate::commands::{execute, write_file};
use crate::config::{BoundaryChoice, Command, ExperimentConfig, GridConfig, Outputs, ParamSet};
use crate::{exit, json, CliError};

#[derive(Debug, Parser)]
#[command(name = "petrocheck", version, about = "Barrier certificates and regularity experiments for the p-parabolic equation")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Closed-form p-Laplacian of C r^α against a finite-difference oracle.
    LemmaCheck {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Residual of the Barenblatt solution.
    BarenblattCheck {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build a barrier and certify its supersolution inequality.
    Verify {
        #[arg(long, value_parser = parse_kind)]
        kind: BarrierKind,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Regularity of the cusp vertex, optionally with the numeric probe.
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        probe: bool,
        /// Number of probe refinement levels (2 or 3).
        #[arg(long, default_value_t = 3)]
        ladder: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Solve the Dirichlet problem on the cusp and export the field.
    Solve {
        #[command(flatten)]
        params: ParamArgs,
        /// `probe`, `quadratic` or `constant:<value>`.
        #[arg(long, default_value = "quadratic", value_parser = parse_data)]
        data: BoundaryChoice,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Classify over a (p, q) grid in parallel.
    Sweep {
        #[arg(long, value_delimiter = ',', num_args = 0.., allow_negative_numbers = true)]
        p_list: Vec<f64>,
        #[arg(long, value_delimiter = ',', num_args = 0.., allow_negative_numbers = true)]
        q_list: Vec<f64>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        probe: bool,
        #[arg(long, default_value_t = 3)]
        ladder: usize,
        /// Directory for the per-cell reports.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare solutions on Θ and on the scaled domain aΘ.
    ScaleCheck {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 2.0)]
        a: f64,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value = "quadratic", value_parser = parse_data)]
        data: BoundaryChoice,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Execute an experiment config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long = "p", allow_negative_numbers = true)]
    p: Option<f64>,
    #[arg(long = "n", default_value_t = 1)]
    n: u32,
    #[arg(long = "q", allow_negative_numbers = true)]
    q: Option<f64>,
    #[arg(long = "K", default_value_t = 1.0, allow_negative_numbers = true)]
    k: f64,
    #[arg(long = "t0", default_value_t = -1.0, allow_negative_numbers = true)]
    t0: f64,
    #[arg(long = "C", allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long = "beta", allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Tabulated width profile (CSV with columns t,zeta) in place of the power cusp.
    #[arg(long)]
    profile: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long)]
    grid_y: Option<usize>,
    #[arg(long)]
    grid_t: Option<usize>,
    #[arg(long)]
    eps_reg: Option<f64>,
    #[arg(long)]
    eps_min: Option<f64>,
    #[arg(long)]
    c_step: Option<f64>,
    /// JSON grid/solver settings; explicit flags take precedence.
    #[arg(long)]
    solver_config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// JSON report path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV output path.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Print the experiment config instead of running it.
    #[arg(long)]
    print_config: bool,
}

fn parse_kind(s: &str) -> Result<BarrierKind, String> {
    s.parse().map_err(|e: petrocheck_core::Error| e.to_string())
}

fn parse_data(s: &str) -> Result<BoundaryChoice, String> {
    match s {
        "probe" => Ok(BoundaryChoice::Probe),
        "quadratic" => Ok(BoundaryChoice::Quadratic),
        _ => s
            .strip_prefix("constant:")
            .and_then(|v| v.parse().ok())
            .map(|value| BoundaryChoice::Constant { value })
            .ok_or_else(|| format!("unknown boundary data `{s}` (probe, quadratic, constant:<value>)")),
    }
}

impl ParamArgs {
    fn into_set(self) -> ParamSet {
        ParamSet { p: self.p, n: self.n, q: self.q, k: self.k, t0: self.t0, c: self.c, beta: self.beta, profile_csv: self.profile }
    }
}

impl GridArgs {
    fn resolve(self) -> Result<GridConfig, CliError> {
        let mut grid = match &self.solver_config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
            }
            None => GridConfig::default(),
        };
        if let Some(v) = self.grid_y {
            grid.grid_y = v;
        }
        if let Some(v) = self.grid_t {
            grid.grid_t = v;
        }
        if let Some(v) = self.eps_reg {
            grid.eps_reg = v;
        }
        if self.eps_min.is_some() {
            grid.eps_min = self.eps_min;
        }
        if let Some(v) = self.c_step {
            grid.c_step = v;
        }
        Ok(grid)
    }
}

fn outputs(out: &OutArgs, dir: Option<PathBuf>) -> Outputs {
    Outputs { json: out.out.clone(), csv: out.csv.clone(), dir }
}

/// Turn parsed arguments into a config; the flag reports whether to print
/// it instead of running.
fn build(cli: Cli) -> Result<(ExperimentConfig, bool), CliError> {
    let (command, params, grid, out, dir) = match cli.command {
        Sub::LemmaCheck { params, samples, out } => (Command::LemmaCheck { samples }, params, GridConfig::default(), out, None),
        Sub::BarenblattCheck { params, samples, out } => {
            (Command::BarenblattCheck { samples }, params, GridConfig::default(), out, None)
        }
        Sub::Verify { kind, params, grid, out } => (Command::Verify { kind }, params, grid.resolve()?, out, None),
        Sub::Classify { params, probe, ladder, grid, out } => {
            (Command::Classify { probe, ladder }, params, grid.resolve()?, out, None)
        }
        Sub::Solve { params, data, grid, out } => (Command::Solve { data }, params, grid.resolve()?, out, None),
        Sub::Sweep { p_list, q_list, params, probe, ladder, out_dir, grid, out } => {
            (Command::Sweep { p_list, q_list, probe, ladder }, params, grid.resolve()?, out, out_dir)
        }
        Sub::ScaleCheck { params, a, tol, data, grid, out } => {
            (Command::ScaleCheck { a, tol, data }, params, grid.resolve()?, out, None)
        }
        Sub::Run { config, out } => {
            let text = std::fs::read_to_string(&config).map_err(|source| CliError::Io { path: config.clone(), source })?;
            let mut cfg = ExperimentConfig::from_json(&text)?;
            if out.out.is_some() {
                cfg.outputs.json = out.out.clone();
            }
            if out.csv.is_some() {
                cfg.outputs.csv = out.csv.clone();
            }
            return Ok((cfg, out.print_config));
        }
    };
    let outputs = outputs(&out, dir);
    Ok((ExperimentConfig { command, params: params.into_set(), grid, outputs }, out.print_config))
}

fn emit(config: &ExperimentConfig) -> Result<i32, CliError> {
    let outcome = execute(config)?;
    let text = json::to_pretty(&outcome.report)? + "\n";
    match &config.outputs.json {
        Some(path) => write_file(path, &text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    if let (Some(path), Some(csv)) = (&config.outputs.csv, &outcome.csv) {
        write_file(path, csv)?;
    }
    eprintln!("{}", outcome.summary);
    Ok(outcome.code)
}

/// Parse, execute and write outputs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::PASS };
        }
    };
    let result = build(cli).and_then(|(config, print_only)| {
        if print_only {
            println!("{}", config.to_json()?);
            Ok(exit::PASS)
        } else {
            emit(&config)
        }
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn data_choices_parse() {
        assert_eq!(parse_data("probe").unwrap(), BoundaryChoice::Probe);
        assert_eq!(parse_data("constant:0.25").unwrap(), BoundaryChoice::Constant { value: 0.25 });
        assert!(parse_data("constant:x").is_err());
    }
}
