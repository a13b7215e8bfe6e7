//! Scenario configuration: defaults, flat JSON file, command-line overrides.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Fully resolved scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub alpha: f64,
    pub g: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub tol: f64,
    pub n_max: usize,
    pub grid: usize,
    pub format: Format,
    pub n_levels: usize,
    pub delta_sq: Vec<f64>,
    pub seed: u64,
    pub points: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            alpha: 1.0,
            g: 0.0,
            t_start: -40.0,
            t_end: 40.0,
            tol: 1e-10,
            n_max: 20,
            grid: 201,
            format: Format::Csv,
            n_levels: 5,
            delta_sq: vec![0.0, 0.5, 1.0, 2.0, 3.0],
            seed: 0,
            points: 50,
        }
    }
}

/// Keys accepted in a `--config` file; every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub alpha: Option<f64>,
    pub g: Option<f64>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub tol: Option<f64>,
    pub n_max: Option<usize>,
    pub grid: Option<usize>,
    pub format: Option<Format>,
    pub n_levels: Option<usize>,
    pub delta_sq: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub points: Option<usize>,
}

/// Flags shared by all subcommands. Unset flags fall back to the config
/// file, then to the built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Sweep rate α of ω_t = sqrt((αt)² + g²) [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Gap g [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    /// Initial time [default: -40]
    #[arg(long, allow_hyphen_values = true)]
    pub t_start: Option<f64>,
    /// Final time [default: 40]
    #[arg(long, allow_hyphen_values = true)]
    pub t_end: Option<f64>,
    /// Integrator tolerance, in (0, 1e-3] [default: 1e-10]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Largest excitation number reported [default: 20]
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Number of time samples [default: 201]
    #[arg(long)]
    pub grid: Option<usize>,
    /// Output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format [default: csv]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Flat JSON file with any of the keys above (snake_case)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads for sweeps (0: all cores)
    #[arg(long, env = "SQUEEZEFLOW_JOBS", default_value_t = 0)]
    pub jobs: usize,
}

pub fn load_file(path: &Path) -> Result<ConfigFile> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

impl ScenarioConfig {
    /// Defaults, overridden by the file, overridden by flags.
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => load_file(p)?,
            None => ConfigFile::default(),
        };
        let d = ScenarioConfig::default();
        let cfg = ScenarioConfig {
            alpha: args.alpha.or(file.alpha).unwrap_or(d.alpha),
            g: args.g.or(file.g).unwrap_or(d.g),
            t_start: args.t_start.or(file.t_start).unwrap_or(d.t_start),
            t_end: args.t_end.or(file.t_end).unwrap_or(d.t_end),
            tol: args.tol.or(file.tol).unwrap_or(d.tol),
            n_max: args.n_max.or(file.n_max).unwrap_or(d.n_max),
            grid: args.grid.or(file.grid).unwrap_or(d.grid),
            format: args.format.or(file.format).unwrap_or(d.format),
            n_levels: file.n_levels.unwrap_or(d.n_levels),
            delta_sq: file.delta_sq.unwrap_or(d.delta_sq),
            seed: file.seed.unwrap_or(d.seed),
            points: file.points.unwrap_or(d.points),
        };
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be positive and finite, got {}", self.alpha));
        }
        if !(self.g >= 0.0 && self.g.is_finite()) {
            return bad(format!("g must be >= 0 and finite, got {}", self.g));
        }
        if !(self.t_start.is_finite() && self.t_end.is_finite() && self.t_start < self.t_end) {
            return bad(format!("need t_start < t_end, got [{}, {}]", self.t_start, self.t_end));
        }
        if !(self.tol > 0.0 && self.tol <= 1e-3) {
            return bad(format!("tol must lie in (0, 1e-3], got {}", self.tol));
        }
        if self.grid < 2 {
            return bad(format!("grid must be >= 2, got {}", self.grid));
        }
        if self.n_levels < 1 {
            return bad("n_levels must be >= 1".into());
        }
        if self.delta_sq.is_empty() {
            return bad("delta_sq grid must be nonempty".into());
        }
        if let Some(d) = self.delta_sq.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
            return bad(format!("delta_sq entries must be >= 0, got {d}"));
        }
        Ok(())
    }

    /// `grid` equally spaced times on `[t_start, t_end]`, both ends included.
    pub fn time_grid(&self) -> Vec<f64> {
        let n = self.grid;
        let h = (self.t_end - self.t_start) / (n - 1) as f64;
        (0..n)
            .map(|k| if k + 1 == n { self.t_end } else { self.t_start + k as f64 * h })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        assert!(ScenarioConfig::default().validate().is_ok());
    }

    #[test]
    fn flags_override() {
        let args = CommonArgs { alpha: Some(2.0), ..Default::default() };
        let cfg = ScenarioConfig::resolve(&args).unwrap();
        assert_eq!(cfg.alpha, 2.0);
        assert_eq!(cfg.g, 0.0);
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = ScenarioConfig { t_start: 5.0, t_end: 1.0, ..Default::default() };
        assert!(c.validate().is_err());
        c = ScenarioConfig { tol: 1e-2, ..Default::default() };
        assert!(c.validate().is_err());
        c = ScenarioConfig { alpha: 0.0, ..Default::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn grid_hits_endpoints() {
        let c = ScenarioConfig { t_start: -1.0, t_end: 2.0, grid: 4, ..Default::default() };
        assert_eq!(c.time_grid(), vec![-1.0, 0.0, 1.0, 2.0]);
    }
}
