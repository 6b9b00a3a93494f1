//! Scenario configuration from command-line flags and TOML files.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::cache::ENV_VAR;

pub const DEFAULT_GAMMA: f64 = 0.01;
/// Absolute tolerance when selecting an eigenvalue by target.
pub const SELECTION_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    CtoaArrival,
    CtoEvolution,
    CtoTransitions,
    CtoaTransitions,
    Spectrum,
    Roots,
    CcrCheck,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::CtoaArrival,
        Scenario::CtoEvolution,
        Scenario::CtoTransitions,
        Scenario::CtoaTransitions,
        Scenario::Spectrum,
        Scenario::Roots,
        Scenario::CcrCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::CtoaArrival => "ctoa-arrival",
            Scenario::CtoEvolution => "cto-evolution",
            Scenario::CtoTransitions => "cto-transitions",
            Scenario::CtoaTransitions => "ctoa-transitions",
            Scenario::Spectrum => "spectrum",
            Scenario::Roots => "roots",
            Scenario::CcrCheck => "ccr-check",
        }
    }

    pub fn default_half_width(self) -> usize {
        match self {
            Scenario::CtoaArrival | Scenario::CtoaTransitions | Scenario::Roots => 256,
            Scenario::CtoEvolution | Scenario::Spectrum => 512,
            Scenario::CtoTransitions => 1024,
            Scenario::CcrCheck => 64,
        }
    }

    pub fn default_selection(self) -> Selection {
        match self {
            Scenario::CtoaArrival => Selection::Target { tau: 0.02765 },
            Scenario::CtoEvolution => Selection::Target { tau: 0.03521 },
            Scenario::CtoTransitions => Selection::Range { n_lo: 300, n_hi: 320 },
            Scenario::CtoaTransitions | Scenario::Spectrum => Selection::Range { n_lo: 1, n_hi: 10 },
            Scenario::Roots => Selection::Range { n_lo: 1, n_hi: 20 },
            Scenario::CcrCheck => Selection::Range { n_lo: 1, n_hi: 100 },
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Scenario::ALL.iter().map(|s| s.name()).collect();
                Error::config("scenario", format!("unknown scenario {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Which eigenstates a scenario works on. Indices count positive
/// eigenvalues from the largest down, starting at 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "by", rename_all = "kebab-case")]
pub enum Selection {
    Range { n_lo: usize, n_hi: usize },
    Target { tau: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "csv+svg")]
    CsvSvg,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "csv+svg" => Ok(OutputFormat::CsvSvg),
            _ => Err(Error::config("format", format!("{s:?} is not csv or csv+svg"))),
        }
    }
}

/// A fully resolved run description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub gamma: f64,
    #[serde(rename = "K")]
    pub half_width: usize,
    pub selection: Selection,
    /// Length of the time window; `None` picks a scenario-specific multiple
    /// of the selected eigenvalue.
    pub t_max: Option<f64>,
    pub t_samples: usize,
    pub grid: usize,
    pub density_slices: usize,
    pub out: PathBuf,
    pub cache: PathBuf,
    pub format: OutputFormat,
    pub seed: u64,
    /// Repeat the CTO eigenvalue computation at `2K` to confirm convergence.
    pub convergence_check: bool,
}

impl ScenarioConfig {
    /// Defaults for one scenario, with γ and the cache directory as given.
    pub fn defaults(scenario: Scenario, gamma: f64, cache: PathBuf) -> Self {
        Self {
            scenario,
            gamma,
            half_width: scenario.default_half_width(),
            selection: scenario.default_selection(),
            t_max: None,
            t_samples: 401,
            grid: 401,
            density_slices: 101,
            out: PathBuf::from("chronos-out").join(scenario.name()),
            cache,
            format: OutputFormat::Csv,
            seed: 0,
            convergence_check: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma < std::f64::consts::FRAC_PI_2) {
            return Err(Error::config("gamma", format!("{} outside (0, π/2)", self.gamma)));
        }
        if self.half_width == 0 {
            return Err(Error::config("K", "must be ≥ 1"));
        }
        match self.selection {
            Selection::Range { n_lo, n_hi } => {
                if n_lo == 0 {
                    return Err(Error::config("n-lo", "indices start at 1"));
                }
                if n_hi < n_lo {
                    return Err(Error::config("n-hi", format!("{n_hi} < n-lo = {n_lo}")));
                }
                if n_hi > self.half_width && self.scenario != Scenario::Roots && self.scenario != Scenario::CcrCheck {
                    return Err(Error::config(
                        "n-hi",
                        format!("{n_hi} exceeds the {} positive eigenvalues at K = {}", self.half_width, self.half_width),
                    ));
                }
            }
            Selection::Target { tau } => {
                if !tau.is_finite() || tau == 0.0 {
                    return Err(Error::config("target-tau", format!("{tau} is not a usable eigenvalue")));
                }
            }
        }
        if let Some(t) = self.t_max {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::config("t-max", format!("{t} must be positive")));
            }
        }
        for (name, v) in [
            ("t-samples", self.t_samples),
            ("grid", self.grid),
            ("density-slices", self.density_slices),
        ] {
            if v < 3 {
                return Err(Error::config(name, format!("{v} must be ≥ 3")));
            }
        }
        Ok(())
    }
}

/// Command line of the `chronos` binary.
#[derive(Debug, Parser)]
#[command(name = "chronos", about = "Time-operator experiments for a confined free particle", version)]
pub struct Cli {
    /// ctoa-arrival | cto-evolution | cto-transitions | ctoa-transitions | spectrum | roots | ccr-check
    pub scenario: Option<String>,
    /// Same as the positional argument.
    #[arg(long = "scenario", value_name = "NAME")]
    pub scenario_flag: Option<String>,
    /// Boundary phase γ in (0, π/2); default 0.01.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Basis half-width K (dimension 2K+1).
    #[arg(long = "K", value_name = "N")]
    pub half_width: Option<usize>,
    /// First positive-eigenvalue index, counted from the largest.
    #[arg(long)]
    pub n_lo: Option<usize>,
    /// Last positive-eigenvalue index.
    #[arg(long)]
    pub n_hi: Option<usize>,
    /// Select the eigenvalue nearest this value (tolerance 1e-3).
    #[arg(long)]
    pub target_tau: Option<f64>,
    /// Length of the time window; default 2τ.
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Samples in the trajectory window.
    #[arg(long)]
    pub t_samples: Option<usize>,
    /// Spatial grid points on [-l, l].
    #[arg(long)]
    pub grid: Option<usize>,
    /// Time slices in the density output.
    #[arg(long)]
    pub density_slices: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Eigendecomposition cache directory (also CHRONOS_CACHE).
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// csv or csv+svg.
    #[arg(long, value_name = "csv|csv+svg")]
    pub format: Option<String>,
    /// Offset for the random canonical-domain samples.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Skip the K → 2K eigenvalue check.
    #[arg(long)]
    pub skip_convergence_check: bool,
    /// TOML file with the same keys (snake_case); flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Keys accepted in a configuration file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub scenario: Option<String>,
    pub gamma: Option<f64>,
    #[serde(rename = "K")]
    pub half_width: Option<usize>,
    pub n_lo: Option<usize>,
    pub n_hi: Option<usize>,
    pub target_tau: Option<f64>,
    pub t_max: Option<f64>,
    pub t_samples: Option<usize>,
    pub grid: Option<usize>,
    pub density_slices: Option<usize>,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub format: Option<String>,
    pub seed: Option<u64>,
    pub convergence_check: Option<bool>,
}

impl FileConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config("config", e.message().to_owned()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

/// A resolved configuration and the defaults that had to be filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub config: ScenarioConfig,
    pub notices: Vec<String>,
}

/// Parses `argv` (including the program name) into a configuration.
pub fn parse_config<I, T>(args: I) -> Result<Resolved>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::config("arguments", e.to_string()))?;
    resolve(cli)
}

/// Merges flags over an optional file over defaults, then validates.
pub fn resolve(cli: Cli) -> Result<Resolved> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    merge(cli, file, std::env::var_os(ENV_VAR).map(PathBuf::from))
}

fn merge(cli: Cli, file: FileConfig, env_cache: Option<PathBuf>) -> Result<Resolved> {
    let mut notices = Vec::new();
    let scenario_name = match (&cli.scenario, &cli.scenario_flag) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::config("scenario", format!("given twice: {a:?} and {b:?}")));
        }
        (Some(a), _) | (None, Some(a)) => a.clone(),
        (None, None) => file
            .scenario
            .clone()
            .ok_or_else(|| Error::config("scenario", "missing"))?,
    };
    let scenario: Scenario = scenario_name.parse()?;

    let gamma = match cli.gamma.or(file.gamma) {
        Some(g) => g,
        None => {
            notices.push(format!("gamma not given; defaulting to {DEFAULT_GAMMA}"));
            DEFAULT_GAMMA
        }
    };
    let cache = cli
        .cache
        .clone()
        .or_else(|| env_cache.filter(|p| !p.as_os_str().is_empty()))
        .or(file.cache.clone())
        .unwrap_or_else(|| PathBuf::from(".chronos-cache"));
    let mut cfg = ScenarioConfig::defaults(scenario, gamma, cache);

    if let Some(k) = cli.half_width.or(file.half_width) {
        cfg.half_width = k;
    }

    let flag_range = cli.n_lo.is_some() || cli.n_hi.is_some();
    if flag_range && cli.target_tau.is_some() {
        return Err(Error::config("selection", "--n-lo/--n-hi and --target-tau are mutually exclusive"));
    }
    let file_range = file.n_lo.is_some() || file.n_hi.is_some();
    if !flag_range && cli.target_tau.is_none() && file_range && file.target_tau.is_some() {
        return Err(Error::config("selection", "n_lo/n_hi and target_tau are mutually exclusive"));
    }
    let (lo, hi, tau) = if flag_range || cli.target_tau.is_some() {
        (cli.n_lo, cli.n_hi, cli.target_tau)
    } else {
        (file.n_lo, file.n_hi, file.target_tau)
    };
    if let Some(tau) = tau {
        cfg.selection = Selection::Target { tau };
    } else if lo.is_some() || hi.is_some() {
        let (d_lo, d_hi) = match cfg.selection {
            Selection::Range { n_lo, n_hi } => (n_lo, n_hi),
            Selection::Target { .. } => (1, 1),
        };
        let n_lo = lo.unwrap_or(d_lo);
        let n_hi = hi.unwrap_or(n_lo.max(d_hi));
        cfg.selection = Selection::Range { n_lo, n_hi };
    }

    if let Some(v) = cli.t_max.or(file.t_max) {
        cfg.t_max = Some(v);
    }
    if let Some(v) = cli.t_samples.or(file.t_samples) {
        cfg.t_samples = v;
    }
    if let Some(v) = cli.grid.or(file.grid) {
        cfg.grid = v;
    }
    if let Some(v) = cli.density_slices.or(file.density_slices) {
        cfg.density_slices = v;
    }
    if let Some(v) = cli.out.clone().or(file.out.clone()) {
        cfg.out = v;
    }
    if let Some(v) = cli.format.as_deref().or(file.format.as_deref()) {
        cfg.format = v.parse()?;
    }
    if let Some(v) = cli.seed.or(file.seed) {
        cfg.seed = v;
    }
    if cli.skip_convergence_check {
        cfg.convergence_check = false;
    } else if let Some(v) = file.convergence_check {
        cfg.convergence_check = v;
    }
    cfg.validate()?;
    Ok(Resolved { config: cfg, notices })
}
