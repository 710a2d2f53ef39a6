//! Experiment configuration: defaults, key = value files, flag overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use phrmt::dynamics::{CouplingParams, HamiltonianKind};
use phrmt::ensemble::{EnsembleConfig, ScalarClass};

/// CLI error carrying the process exit code contract:
/// 1 check failure, 2 usage error, 3 I/O error.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Check(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Check(_) => ExitCode::from(1),
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Io(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Check(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<phrmt::Error> for CliError {
    fn from(err: phrmt::Error) -> Self {
        match err {
            phrmt::Error::Config(_) | phrmt::Error::Argument(_) | phrmt::Error::UnsupportedParameters(_) => {
                CliError::Usage(err.to_string())
            }
            other => CliError::Check(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

/// Fully resolved experiment parameters.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub scalar_class: ScalarClass,
    pub b: f64,
    pub c: f64,
    pub c1: f64,
    pub c2: f64,
    pub kind: HamiltonianKind,
    pub m_index: usize,
    pub n_index: usize,
    pub theta: f64,
    pub phi: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub t_steps: usize,
    pub output: Option<PathBuf>,
    /// Suppress the timestamp comment so reruns are byte-identical.
    pub deterministic: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 6,
            m: 2,
            seed: 1,
            scalar_class: ScalarClass::Complex,
            b: 1.2,
            c: 1.0,
            c1: 2.0,
            c2: 0.0,
            kind: HamiltonianKind::A1,
            m_index: 1,
            n_index: 2,
            theta: std::f64::consts::FRAC_PI_2,
            phi: 0.0,
            t_start: 0.0,
            t_end: 10.0,
            t_steps: 2001,
            output: None,
            deterministic: false,
        }
    }
}

/// Optional overrides collected from a config file or command-line flags.
/// Later layers win field by field.
#[derive(Debug, Clone, Default)]
pub struct ConfigOverlay {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub seed: Option<u64>,
    pub scalar_class: Option<ScalarClass>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub kind: Option<HamiltonianKind>,
    pub m_index: Option<usize>,
    pub n_index: Option<usize>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub t_steps: Option<usize>,
    pub output: Option<PathBuf>,
    pub deterministic: Option<bool>,
}

impl ExperimentConfig {
    pub fn apply(&mut self, overlay: &ConfigOverlay) {
        macro_rules! take {
            ($field:ident) => {
                if let Some(v) = overlay.$field.clone() {
                    self.$field = v;
                }
            };
        }
        take!(n);
        take!(m);
        take!(seed);
        take!(scalar_class);
        take!(b);
        take!(c);
        take!(c1);
        take!(c2);
        take!(kind);
        take!(m_index);
        take!(n_index);
        take!(theta);
        take!(phi);
        take!(t_start);
        take!(t_end);
        take!(t_steps);
        take!(deterministic);
        if overlay.output.is_some() {
            self.output = overlay.output.clone();
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.m < 1 || self.n < 2 * self.m {
            return Err(CliError::Usage(format!(
                "n/m: dimensions must satisfy n >= 2m with m >= 1, got n = {}, m = {}",
                self.n, self.m
            )));
        }
        if self.t_steps < 1 {
            return Err(CliError::Usage("t-steps: must be at least 1".into()));
        }
        if self.t_end < self.t_start {
            return Err(CliError::Usage(format!(
                "t-end: must be >= t-start, got [{}, {}]",
                self.t_start, self.t_end
            )));
        }
        if self.t_steps > 1 && self.t_end == self.t_start {
            return Err(CliError::Usage(
                "t-end: a multi-point grid needs t-end > t-start".into(),
            ));
        }
        for (label, idx) in [("m-index", self.m_index), ("n-index", self.n_index)] {
            if idx < 1 || idx > self.m {
                return Err(CliError::Usage(format!(
                    "{label}: must lie in 1..={}, got {idx}",
                    self.m
                )));
            }
        }
        if self.m_index == self.n_index {
            return Err(CliError::Usage("n-index: must differ from m-index".into()));
        }
        if !self.theta.is_finite() || !self.phi.is_finite() {
            return Err(CliError::Usage("theta/phi: must be finite".into()));
        }
        if self.b < 0.0 || self.c < 0.0 {
            return Err(CliError::Usage("b/c: must be non-negative".into()));
        }
        Ok(())
    }

    pub fn ensemble(&self) -> Result<EnsembleConfig, CliError> {
        Ok(EnsembleConfig::new(self.n, self.m, self.seed, self.scalar_class)?)
    }

    pub fn coupling(&self) -> Result<CouplingParams<f64>, CliError> {
        Ok(CouplingParams::new(self.b, self.c, self.c1, self.c2)?)
    }
}

pub fn parse_scalar_class(s: &str) -> Result<ScalarClass, String> {
    match s.to_ascii_lowercase().as_str() {
        "complex" => Ok(ScalarClass::Complex),
        "real" => Ok(ScalarClass::Real),
        other => Err(format!("scalar-class: expected 'complex' or 'real', got '{other}'")),
    }
}

pub fn parse_kind(s: &str) -> Result<HamiltonianKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "a1" => Ok(HamiltonianKind::A1),
        "a2" => Ok(HamiltonianKind::A2),
        other => Err(format!("kind: expected 'a1' or 'a2', got '{other}'")),
    }
}

/// Parses a `key = value` configuration file. Blank lines and `#` comments
/// are ignored; keys are the kebab-case flag names.
pub fn load_file(path: &Path) -> Result<ConfigOverlay, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut overlay = ConfigOverlay::default();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "{}:{}: expected 'key = value', got '{line}'",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        let fail = |msg: String| {
            CliError::Usage(format!("{}:{}: {msg}", path.display(), lineno + 1))
        };

        macro_rules! parse_num {
            ($field:ident, $ty:ty) => {
                overlay.$field = Some(
                    value
                        .parse::<$ty>()
                        .map_err(|e| fail(format!("{key}: {e}")))?,
                )
            };
        }

        match key {
            "n" => parse_num!(n, usize),
            "m" => parse_num!(m, usize),
            "seed" => parse_num!(seed, u64),
            "scalar-class" => overlay.scalar_class = Some(parse_scalar_class(value).map_err(fail)?),
            "b" => parse_num!(b, f64),
            "c" => parse_num!(c, f64),
            "c1" => parse_num!(c1, f64),
            "c2" => parse_num!(c2, f64),
            "kind" => overlay.kind = Some(parse_kind(value).map_err(fail)?),
            "m-index" => parse_num!(m_index, usize),
            "n-index" => parse_num!(n_index, usize),
            "theta" => parse_num!(theta, f64),
            "phi" => parse_num!(phi, f64),
            "t-start" => parse_num!(t_start, f64),
            "t-end" => parse_num!(t_end, f64),
            "t-steps" => parse_num!(t_steps, usize),
            "out" => overlay.output = Some(PathBuf::from(value)),
            "deterministic" => {
                overlay.deterministic = Some(
                    value
                        .parse::<bool>()
                        .map_err(|e| fail(format!("deterministic: {e}")))?,
                )
            }
            other => {
                return Err(fail(format!("unknown configuration key '{other}'")));
            }
        }
    }
    Ok(overlay)
}
