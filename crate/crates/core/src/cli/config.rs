use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::cross::CrossSpec;
use crate::geometry::{CPoint, Condenser};

/// Batch checks and data export for (N,k)-crosses.
#[derive(Debug, Parser)]
#[command(name = "nkcross", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Solve the extremal function of the first factor on a grid.
    Extremal,
    /// Envelope and cross membership on a one-variable slice.
    Cross,
    /// Check the sublevel rescaling identity on the first factor.
    VerifyLemma1,
    /// Value, weight witness and upper bound of the envelope formula.
    VerifyLemma2,
    /// Extend an oracle function from the cross to its envelope.
    Extend,
    /// Run quick versions of every invariant suite.
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Extremal => "extremal",
            Command::Cross => "cross",
            Command::VerifyLemma1 => "verify-lemma1",
            Command::VerifyLemma2 => "verify-lemma2",
            Command::Extend => "extend",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Number of factors (uniform 0.2-in-1 discs unless the config lists them).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Comma-separated extremal values for verify-lemma2.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub h: Option<Vec<f64>>,
    #[arg(long, global = true)]
    pub r: Option<f64>,
    #[arg(long, global = true)]
    pub s: Option<f64>,
    /// `closed` or `grid` for verify-lemma1.
    #[arg(long, global = true)]
    pub mode: Option<String>,
    #[arg(long, global = true)]
    pub nx: Option<usize>,
    #[arg(long, global = true)]
    pub ny: Option<usize>,
    /// Series truncation M.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Oracle for extend: inverse-sum, constant, conjugate or pole.
    #[arg(long, global = true)]
    pub oracle: Option<String>,
    /// JSON report path (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// CSV data path.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub factors: Option<Vec<FactorConfig>>,
    pub k: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub grid: Option<GridConfig>,
    pub series: Option<SeriesConfig>,
    pub lemma: Option<LemmaConfig>,
    pub slice: Option<SliceConfig>,
    pub extend: Option<ExtendConfig>,
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FactorConfig {
    pub a_radius: f64,
    pub d_radius: f64,
    #[serde(default)]
    pub center: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub nx: Option<usize>,
    pub ny: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaConfig {
    pub r: Option<f64>,
    pub s: Option<f64>,
    pub h: Option<Vec<f64>>,
    pub mode: Option<String>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceConfig {
    pub free: Option<usize>,
    pub fixed: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtendConfig {
    pub oracle: Option<String>,
    pub samples: Option<usize>,
    pub shift: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Oracle {
    /// `1/(shift - Σ z_j)`.
    InverseSum,
    Constant,
    /// `conj(z_1) + Σ_{j>1} z_j`, not holomorphic.
    Conjugate,
    /// `1/(z_N - 0.5)`, with a pole inside `D_N`.
    Pole,
}

impl Oracle {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "inverse-sum" => Ok(Oracle::InverseSum),
            "constant" => Ok(Oracle::Constant),
            "conjugate" => Ok(Oracle::Conjugate),
            "pole" => Ok(Oracle::Pole),
            other => Err(CliError::Config(format!("unknown oracle `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaMode {
    Closed,
    Grid,
}

/// Fully resolved, validated run request.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub factors: Vec<FactorConfig>,
    pub k: usize,
    pub nx: usize,
    pub ny: usize,
    pub m: usize,
    pub tol: Option<f64>,
    pub seed: u64,
    pub samples: Option<usize>,
    pub r: f64,
    pub s: f64,
    pub h: Option<Vec<f64>>,
    pub mode: LemmaMode,
    pub free: usize,
    pub fixed: Option<Vec<[f64; 2]>>,
    pub oracle: Oracle,
    pub shift: Option<f64>,
    #[serde(skip)]
    pub json_out: Option<PathBuf>,
    #[serde(skip)]
    pub csv_out: Option<PathBuf>,
    #[serde(skip)]
    pub timestamp: bool,
}

impl RunConfig {
    /// Merge a parsed command line with its optional config file.
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let file = match &cli.flags.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        Self::resolve(cli.command, &cli.flags, &file)
    }

    pub fn resolve(command: Command, flags: &Flags, file: &FileConfig) -> Result<Self, CliError> {
        let lemma = file.lemma.clone().unwrap_or_default();
        let h = flags.h.clone().or(lemma.h);
        let factors = match (&file.factors, flags.n) {
            (Some(f), Some(n)) if f.len() != n => {
                return Err(CliError::Config(format!(
                    "--n {n} disagrees with {} configured factors",
                    f.len()
                )))
            }
            (Some(f), _) => f.clone(),
            (None, n) => {
                let n = n.or(h.as_ref().map(Vec::len)).unwrap_or(2);
                vec![
                    FactorConfig {
                        a_radius: 0.2,
                        d_radius: 1.0,
                        center: None,
                    };
                    n
                ]
            }
        };
        let n = factors.len();
        let k = flags.k.or(file.k).unwrap_or(n.saturating_sub(1).max(1));
        let grid = file.grid.clone().unwrap_or_default();
        let nx = flags.nx.or(grid.nx).unwrap_or(257);
        let ny = flags.ny.or(grid.ny).unwrap_or(nx);
        let mode = match flags.mode.as_deref().or(lemma.mode.as_deref()).unwrap_or("closed") {
            "closed" => LemmaMode::Closed,
            "grid" => LemmaMode::Grid,
            other => return Err(CliError::Config(format!("unknown lemma mode `{other}`"))),
        };
        let ext = file.extend.clone().unwrap_or_default();
        let oracle = Oracle::parse(flags.oracle.as_deref().or(ext.oracle.as_deref()).unwrap_or("inverse-sum"))?;
        let slice = file.slice.clone().unwrap_or_default();
        let output = file.output.clone().unwrap_or_default();
        let cfg = RunConfig {
            command,
            factors,
            k,
            nx,
            ny,
            m: flags.m.or(file.series.as_ref().and_then(|s| s.m)).unwrap_or(64),
            tol: flags.tol.or(file.tol),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            samples: flags.samples.or(lemma.samples).or(ext.samples),
            r: flags.r.or(lemma.r).unwrap_or(0.25),
            s: flags.s.or(lemma.s).unwrap_or(0.75),
            h,
            mode,
            free: slice.free.unwrap_or(0),
            fixed: slice.fixed,
            oracle,
            shift: ext.shift,
            json_out: flags.out.clone().or(output.json),
            csv_out: flags.csv.clone().or(output.csv),
            timestamp: !flags.no_timestamp,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let n = if matches!(self.command, Command::Extremal | Command::VerifyLemma1) {
            self.condensers()?.len()
        } else {
            self.spec()?.n()
        };
        if self.nx < 9 || self.ny < 9 {
            return Err(CliError::Config(format!("grid {}x{} is too small", self.nx, self.ny)));
        }
        if self.m < 2 || !self.m.is_power_of_two() {
            return Err(CliError::Config(format!("series.m = {} must be a power of two", self.m)));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(CliError::Config(format!("tol = {t} must be positive")));
            }
        }
        if self.free >= n {
            return Err(CliError::Config(format!("slice.free = {} >= N = {n}", self.free)));
        }
        if let Some(fixed) = &self.fixed {
            if fixed.len() + 1 != n {
                return Err(CliError::Config(format!(
                    "slice.fixed needs {} points, got {}",
                    n - 1,
                    fixed.len()
                )));
            }
        }
        if self.command == Command::VerifyLemma2 {
            let h = self
                .h
                .as_ref()
                .ok_or_else(|| CliError::Config("verify-lemma2 needs --h".into()))?;
            if h.len() != n {
                return Err(CliError::Config(format!("--h has {} values, N = {n}", h.len())));
            }
            if self.k < 2 {
                return Err(CliError::Config(format!("verify-lemma2 needs k >= 2, got {}", self.k)));
            }
        }
        Ok(())
    }

    /// The configured factor condensers; single-factor commands need only these.
    pub fn condensers(&self) -> Result<Vec<Condenser>, CliError> {
        if self.factors.is_empty() {
            return Err(CliError::Config("no factors configured".into()));
        }
        self.factors
            .iter()
            .map(|f| {
                let [re, im] = f.center.unwrap_or([0.0, 0.0]);
                Condenser::concentric_discs(CPoint::new(re, im), f.a_radius, f.d_radius)
            })
            .collect::<crate::Result<Vec<_>>>()
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn spec(&self) -> Result<CrossSpec, CliError> {
        CrossSpec::new(self.condensers()?, self.k).map_err(|e| CliError::Config(e.to_string()))
    }
}
