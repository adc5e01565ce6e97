use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use upplane::bounds::DivergenceKind;

use crate::GlobalArgs;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or configuration; exit code 2.
    Usage(String),
    /// Data or runtime failure; exit code 1.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<upplane::Error> for CliError {
    fn from(e: upplane::Error) -> Self {
        match e {
            upplane::Error::Config(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Per-command sections of the JSON config file. Every field is optional;
/// unknown keys are rejected so typos surface as usage errors.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub divergence: Option<String>,
    pub no_timestamp: Option<bool>,
    pub bounds: BoundsSection,
    pub verify_gaussian: VerifyGaussianSection,
    pub verify_example1: VerifyExample1Section,
    pub entropy: EntropySection,
    pub kde: KdeSection,
    pub evaluate: EvaluateSection,
    pub fixture: FixtureSection,
}

#[derive(Debug, Default, Clone, Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsSection {
    pub dims: Option<Vec<usize>>,
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
    pub steps: Option<usize>,
    pub n_xy: Option<f64>,
    pub n_xgy: Option<f64>,
}

#[derive(Debug, Default, Clone, Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyGaussianSection {
    pub dims: Option<Vec<usize>>,
    pub p_grid: Option<Vec<f64>>,
    pub tolerance: Option<f64>,
    pub max_iters: Option<usize>,
}

#[derive(Debug, Default, Clone, Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyExample1Section {
    pub sigma2: Option<Vec<f64>>,
    pub p_grid: Option<Vec<f64>>,
    pub grid: Option<usize>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Default, Clone, Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct EntropySection {
    pub k: Option<usize>,
    pub dim: Option<usize>,
    pub n: Option<usize>,
}

#[derive(Debug, Default, Clone, Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct KdeSection {
    pub bandwidth: Option<String>,
    pub density_floor: Option<f64>,
}

#[derive(Debug, Default, Clone, Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvaluateSection {
    pub patch_size: Option<usize>,
    pub patch_stride: Option<usize>,
    pub ridge: Option<f64>,
    pub max_patches: Option<usize>,
    pub tolerance: Option<f64>,
    pub context: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct FixtureSection {
    pub images: Option<usize>,
    pub size: Option<usize>,
    pub prior_std: Option<f64>,
    pub variance_reduction: Option<f64>,
    pub identity: Option<bool>,
}

/// Global settings after merging flags, config file and defaults.
#[derive(Debug)]
pub struct Settings {
    pub seed: u64,
    pub out_dir: PathBuf,
    pub kind: DivergenceKind,
    pub timestamp: bool,
    pub file: FileConfig,
}

impl Settings {
    pub fn resolve(g: &GlobalArgs) -> CliResult<Self> {
        let file = match &g.config {
            Some(p) => load_config(p)?,
            None => FileConfig::default(),
        };
        let kind_text = g
            .divergence
            .clone()
            .or_else(|| file.divergence.clone())
            .unwrap_or_else(|| "renyi-half".into());
        let kind: DivergenceKind = kind_text.parse().map_err(|_| {
            usage(format!(
                "--divergence must be renyi-half or hellinger, got {kind_text:?}"
            ))
        })?;
        Ok(Self {
            seed: g.seed.or(file.seed).unwrap_or(0),
            out_dir: g
                .out_dir
                .clone()
                .or_else(|| file.out_dir.clone())
                .unwrap_or_else(|| "out".into()),
            kind,
            timestamp: !(g.no_timestamp || file.no_timestamp.unwrap_or(false)),
            file,
        })
    }

    /// Creates the output directory and returns the path of `name` inside it.
    pub fn out_path(&self, name: &str) -> CliResult<PathBuf> {
        fs::create_dir_all(&self.out_dir)
            .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", self.out_dir.display())))?;
        Ok(self.out_dir.join(name))
    }
}

fn load_config(path: &Path) -> CliResult<FileConfig> {
    let text =
        fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("invalid config {}: {e}", path.display())))
}

/// First `Some` of flag, file value; else the default.
pub fn pick<T: Clone>(flag: &Option<T>, file: &Option<T>, default: T) -> T {
    flag.clone().or_else(|| file.clone()).unwrap_or(default)
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
    write_text(path, &(text + "\n"))
}
