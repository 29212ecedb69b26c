//! Experiment descriptions. Every command is driven by an
//! [`ExperimentConfig`], and every report embeds the config it ran.

use std::path::PathBuf;

use petrocheck_core::barriers::BarrierKind;
use petrocheck_core::solver::SolverConfig;
use petrocheck_core::verify::SampleGrid;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default)]
    pub params: ParamSet,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub outputs: Outputs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    LemmaCheck { samples: usize },
    BarenblattCheck { samples: usize },
    Verify { kind: BarrierKind },
    Classify { probe: bool, ladder: usize },
    Solve { data: BoundaryChoice },
    Sweep { p_list: Vec<f64>, q_list: Vec<f64>, probe: bool, ladder: usize },
    ScaleCheck { a: f64, tol: f64, data: BoundaryChoice },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::LemmaCheck { .. } => "lemma-check",
            Command::BarenblattCheck { .. } => "barenblatt-check",
            Command::Verify { .. } => "verify",
            Command::Classify { .. } => "classify",
            Command::Solve { .. } => "solve",
            Command::Sweep { .. } => "sweep",
            Command::ScaleCheck { .. } => "scale-check",
        }
    }
}

/// Lateral boundary and initial data for the solver commands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundaryChoice {
    /// The default probe datum of the regularity probe.
    Probe,
    Constant { value: f64 },
    /// `1 + r^2 + t/2`.
    Quadratic,
}

/// Parameters by their symbols; which ones a command needs depends on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamSet {
    pub p: Option<f64>,
    pub n: u32,
    pub q: Option<f64>,
    #[serde(rename = "K")]
    pub k: f64,
    pub t0: f64,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub beta: Option<f64>,
    /// Tabulated width profile `t,zeta`; replaces the power cusp when set.
    pub profile_csv: Option<PathBuf>,
}

impl Default for ParamSet {
    fn default() -> Self {
        ParamSet { p: None, n: 1, q: None, k: 1.0, t0: -1.0, c: None, beta: None, profile_csv: None }
    }
}

impl ParamSet {
    pub fn p(&self) -> Result<f64, CliError> {
        self.p.ok_or_else(|| CliError::Usage("--p is required".into()))
    }

    pub fn q(&self) -> Result<f64, CliError> {
        self.q.ok_or_else(|| CliError::Usage("--q is required".into()))
    }
}

/// Verification grid and solver settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Cells in `y` for the solver and samples in `y` for certificates.
    pub grid_y: usize,
    /// Samples in `t` for certificates.
    pub grid_t: usize,
    pub eps_reg: f64,
    pub eps_min: Option<f64>,
    pub c_step: f64,
    pub rho_geo: f64,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub picard_max_iter: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        let s = SolverConfig::default();
        GridConfig {
            grid_y: s.n_y,
            grid_t: SampleGrid::default().n_t,
            eps_reg: s.eps_reg,
            eps_min: s.eps_min,
            c_step: s.c_step,
            rho_geo: s.rho_geo,
            newton_tol: s.newton_tol,
            newton_max_iter: s.newton_max_iter,
            picard_max_iter: s.picard_max_iter,
        }
    }
}

impl GridConfig {
    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            n_y: self.grid_y,
            c_step: self.c_step,
            rho_geo: self.rho_geo,
            eps_reg: self.eps_reg,
            eps_min: self.eps_min,
            newton_tol: self.newton_tol,
            newton_max_iter: self.newton_max_iter,
            picard_max_iter: self.picard_max_iter,
            ..SolverConfig::default()
        }
    }

    pub fn sample_grid(&self) -> SampleGrid {
        SampleGrid::new(self.grid_t, self.grid_y)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    /// JSON report; stdout when unset.
    pub json: Option<PathBuf>,
    /// CSV table (field, certificate summary, lemma table or sweep matrix).
    pub csv: Option<PathBuf>,
    /// Sweeps: directory for the per-cell reports.
    pub dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid experiment config: {e}")))
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        crate::json::to_pretty(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_grid_config_fills_defaults() {
        let g: GridConfig = serde_json::from_str(r#"{"grid_y": 16, "eps_min": 0.01}"#).unwrap();
        assert_eq!(g.grid_y, 16);
        assert_eq!(g.eps_min, Some(0.01));
        assert_eq!(g.c_step, GridConfig::default().c_step);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"command": {"name": "classify", "probe": false, "ladder": 3}, "params": {"P": 3}}"#;
        assert!(ExperimentConfig::from_json(text).is_err());
    }

    #[test]
    fn symbol_names_in_json() {
        let cfg = ExperimentConfig {
            command: Command::Verify { kind: BarrierKind::DegenerateIrregularity },
            params: ParamSet { p: Some(3.0), c: Some(0.02), ..ParamSet::default() },
            grid: GridConfig::default(),
            outputs: Outputs::default(),
        };
        let text = cfg.to_json().unwrap();
        assert!(text.contains("\"K\"") && text.contains("\"C\"") && text.contains("degenerate_irregularity"));
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
    }
}
