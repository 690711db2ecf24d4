//! Scenario configuration: figure defaults, `key = value` files, overrides.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use redsm_core::{BatchMode, BudgetMode, Protocol};
use thiserror::Error;

/// Seed used when neither the file nor the flags give one.
pub const DEFAULT_SEED: u64 = 20_160_915;
pub const DEFAULT_BATCHES: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown key '{0}'")]
    UnknownKey(String),
    #[error("invalid value for '{key}': {message}")]
    Invalid { key: String, message: String },
    #[error("line {line} of {path}: expected 'key = value'")]
    Syntax { path: String, line: usize },
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("unknown scenario '{0}' (expected fig2a|fig2b|fig3a|fig3b|fig4a|fig4b|fig5|custom)")]
    UnknownScenario(String),
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioName {
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig5,
    Custom,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 8] = [
        ScenarioName::Fig2a,
        ScenarioName::Fig2b,
        ScenarioName::Fig3a,
        ScenarioName::Fig3b,
        ScenarioName::Fig4a,
        ScenarioName::Fig4b,
        ScenarioName::Fig5,
        ScenarioName::Custom,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioName::Fig2a => "fig2a",
            ScenarioName::Fig2b => "fig2b",
            ScenarioName::Fig3a => "fig3a",
            ScenarioName::Fig3b => "fig3b",
            ScenarioName::Fig4a => "fig4a",
            ScenarioName::Fig4b => "fig4b",
            ScenarioName::Fig5 => "fig5",
            ScenarioName::Custom => "custom",
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioName {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        ScenarioName::ALL
            .into_iter()
            .find(|n| n.as_str() == s.trim())
            .ok_or_else(|| ConfigError::UnknownScenario(s.to_string()))
    }
}

/// Which states the trials reconstruct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    /// Random pure states with nonnegative real and imaginary parts.
    Pure,
    /// Ginibre-random density matrices.
    Mixed,
    /// Depolarized random pure states, weight from the `nu` grid.
    NearlyPure,
    /// The fixed qubit reference state.
    Reference,
}

impl StateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StateKind::Pure => "pure",
            StateKind::Mixed => "mixed",
            StateKind::NearlyPure => "nearly_pure",
            StateKind::Reference => "reference",
        }
    }
}

impl FromStr for StateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "pure" => Ok(StateKind::Pure),
            "mixed" => Ok(StateKind::Mixed),
            "nearly_pure" | "nearly-pure" => Ok(StateKind::NearlyPure),
            "reference" => Ok(StateKind::Reference),
            other => Err(format!(
                "unknown state kind '{other}' (expected pure|mixed|nearly_pure|reference)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: ScenarioName,
    pub state: StateKind,
    pub d: Vec<usize>,
    pub theta: Vec<f64>,
    pub nc: Vec<u64>,
    pub nu: Vec<f64>,
    pub protocols: Vec<Protocol>,
    pub seed: u64,
    pub batches: usize,
    pub budget_mode: BudgetMode,
    pub batch_mode: BatchMode,
    pub out: PathBuf,
    pub exact: bool,
}

const NC_SWEEP: [u64; 4] = [10_000, 100_000, 1_000_000, 10_000_000];
const PURE_PROTOCOLS: [Protocol; 3] = [Protocol::DsmPure, Protocol::RedsmPure, Protocol::MubQst];
const MIXED_PROTOCOLS: [Protocol; 4] = [
    Protocol::RedsmSsb,
    Protocol::RedsmBbb,
    Protocol::DsmMixed,
    Protocol::MubQst,
];

impl Scenario {
    /// Defaults taken from the figure captions.
    pub fn defaults(name: ScenarioName) -> Self {
        let mut s = Scenario {
            name,
            state: StateKind::Pure,
            d: vec![2],
            theta: vec![FRAC_PI_2],
            nc: NC_SWEEP.to_vec(),
            nu: vec![0.0],
            protocols: PURE_PROTOCOLS.to_vec(),
            seed: DEFAULT_SEED,
            batches: DEFAULT_BATCHES,
            budget_mode: BudgetMode::PaperP0,
            batch_mode: BatchMode::Paper,
            out: PathBuf::from(format!("{name}.csv")),
            exact: false,
        };
        match name {
            ScenarioName::Fig2a => {}
            ScenarioName::Fig2b => {
                s.d = (2..=7).collect();
                s.nc = vec![10_000_000];
            }
            ScenarioName::Fig3a => {
                s.state = StateKind::Mixed;
                s.protocols = MIXED_PROTOCOLS.to_vec();
            }
            ScenarioName::Fig3b => {
                s.state = StateKind::Mixed;
                s.protocols = MIXED_PROTOCOLS.to_vec();
                s.nc = vec![10_000_000];
                s.theta = (2..=10).map(|k| k as f64 * 0.05 * PI).collect();
            }
            ScenarioName::Fig4a => {
                s.state = StateKind::NearlyPure;
                s.protocols = MIXED_PROTOCOLS.to_vec();
                s.nu = vec![0.10];
            }
            ScenarioName::Fig4b => {
                s.state = StateKind::NearlyPure;
                s.protocols = MIXED_PROTOCOLS.to_vec();
                s.nc = vec![1_000_000];
                s.nu = (1..=10).map(|k| k as f64 / 100.0).collect();
            }
            ScenarioName::Fig5 => {
                s.state = StateKind::Reference;
                s.protocols = vec![Protocol::RedsmSsb];
                s.nc = vec![10_000_000];
                s.batches = 1;
                s.batch_mode = BatchMode::FixedState;
            }
            ScenarioName::Custom => {
                s.nc = vec![1_000_000];
                s.protocols = Vec::new();
            }
        }
        s
    }

    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key.trim() {
            "state" => self.state = v.parse().map_err(|m: String| invalid("state", m))?,
            "d" => self.d = parse_list(key, v, parse_dim)?,
            "theta" => self.theta = parse_list(key, v, parse_theta)?,
            "nc" | "N_c" | "n_c" => self.nc = parse_list(key, v, parse_copies)?,
            "nu" => self.nu = parse_list(key, v, parse_nu)?,
            "protocols" => {
                self.protocols = if v.is_empty() {
                    Vec::new()
                } else {
                    parse_list(key, v, |k, x| x.parse::<Protocol>().map_err(|m| invalid(k, m)))?
                }
            }
            "seed" => {
                self.seed = v
                    .parse()
                    .map_err(|_| invalid("seed", format!("'{v}' is not an unsigned integer")))?
            }
            "batches" => {
                self.batches = match v.parse::<usize>() {
                    Ok(m) if m >= 1 => m,
                    _ => return Err(invalid("batches", format!("'{v}' is not a positive integer"))),
                }
            }
            "budget_mode" | "budget-mode" => self.budget_mode = v.parse().map_err(|m: String| invalid(key, m))?,
            "batch_mode" | "batch-mode" => self.batch_mode = v.parse().map_err(|m: String| invalid(key, m))?,
            "out" => self.out = PathBuf::from(v),
            "exact" => {
                self.exact = match v {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => return Err(invalid("exact", format!("'{v}' is not a boolean"))),
                }
            }
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Check the combination of settings.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.protocols.is_empty() {
            return Err(invalid("protocols", "at least one protocol is required"));
        }
        for (key, empty) in [
            ("d", self.d.is_empty()),
            ("theta", self.theta.is_empty()),
            ("nc", self.nc.is_empty()),
            ("nu", self.nu.is_empty()),
        ] {
            if empty {
                return Err(invalid(key, "grid must not be empty"));
            }
        }
        if self.state == StateKind::Reference && self.d != [2] {
            return Err(invalid("d", "the reference state is a qubit (d = 2)"));
        }
        if !matches!(self.state, StateKind::Pure) {
            if let Some(p) = self.protocols.iter().find(|p| p.is_pure()) {
                return Err(invalid(
                    "protocols",
                    format!("{p} needs pure states, state is {}", self.state.as_str()),
                ));
            }
        }
        if let Some(&nc) = self.nc.iter().find(|&&nc| nc < self.batches as u64) {
            return Err(invalid(
                "nc",
                format!("{nc} copies cannot cover {} batches", self.batches),
            ));
        }
        Ok(())
    }

    /// Human-readable echo of every resolved setting.
    pub fn echo(&self) -> String {
        let list = |v: Vec<String>| v.join(",");
        format!(
            "scenario    = {}\nstate       = {}\nd           = {}\ntheta       = {}\nnc          = {}\nnu          = {}\nprotocols   = {}\nseed        = {}\nbatches     = {}\nbudget_mode = {}\nbatch_mode  = {}\nexact       = {}\nout         = {}\n",
            self.name,
            self.state.as_str(),
            list(self.d.iter().map(|d| d.to_string()).collect()),
            list(self.theta.iter().map(|t| format!("{}pi", round9(t / PI))).collect()),
            list(self.nc.iter().map(|n| n.to_string()).collect()),
            list(self.nu.iter().map(|n| round9(*n).to_string()).collect()),
            list(self.protocols.iter().map(|p| p.to_string()).collect()),
            self.seed,
            self.batches,
            self.budget_mode,
            self.batch_mode,
            self.exact,
            self.out.display(),
        )
    }
}

fn round9(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

fn parse_list<T>(
    key: &str,
    value: &str,
    item: impl Fn(&str, &str) -> Result<T, ConfigError>,
) -> Result<Vec<T>, ConfigError> {
    let items = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| item(key, s))
        .collect::<Result<Vec<_>, _>>()?;
    if items.is_empty() {
        return Err(invalid(key, "empty list"));
    }
    Ok(items)
}

fn parse_dim(key: &str, s: &str) -> Result<usize, ConfigError> {
    match s.parse::<usize>() {
        Ok(d) if d >= 2 => Ok(d),
        _ => Err(invalid(key, format!("'{s}' is not an integer dimension >= 2"))),
    }
}

/// Radians, or a multiple of pi written `<x>pi` (`0.25pi`, `pi`).
pub fn parse_theta(key: &str, s: &str) -> Result<f64, ConfigError> {
    let value = match s.strip_suffix("pi") {
        Some("") => Ok(PI),
        Some(x) => x.trim().parse::<f64>().map(|x| x * PI),
        None => s.parse::<f64>(),
    }
    .map_err(|_| invalid(key, format!("'{s}' is not a number or <x>pi")))?;
    if !(value > 0.0 && value <= FRAC_PI_2 + 1e-12) {
        return Err(invalid(key, format!("{s} is out of range (0<θ≤π/2)")));
    }
    Ok(value.min(FRAC_PI_2))
}

/// Integer copy counts, also in float notation such as `1e7`.
pub fn parse_copies(key: &str, s: &str) -> Result<u64, ConfigError> {
    if let Ok(n) = s.parse::<u64>() {
        if n > 0 {
            return Ok(n);
        }
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 1.0 && x.fract() == 0.0 && x < 1.8e19 => Ok(x as u64),
        _ => Err(invalid(key, format!("'{s}' is not a positive integer copy count"))),
    }
}

fn parse_nu(key: &str, s: &str) -> Result<f64, ConfigError> {
    match s.parse::<f64>() {
        Ok(x) if (0.0..=1.0).contains(&x) => Ok(x),
        _ => Err(invalid(key, format!("'{s}' is not in [0, 1]"))),
    }
}

/// `(key, value)` pairs of a config file. Blank lines and `#` comments are
/// skipped.
pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>, ConfigError> {
    let text = fs::read_to_string(path).map_err(|e| ConfigError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            path: path.display().to_string(),
            line: i + 1,
        })?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

/// Figure defaults, then the file, then flag overrides, then validation.
pub fn parse_config(
    name: ScenarioName,
    file: Option<&Path>,
    overrides: &[(String, String)],
) -> Result<Scenario, ConfigError> {
    let mut s = Scenario::defaults(name);
    if let Some(path) = file {
        for (k, v) in read_config_file(path)? {
            s.set(&k, &v)?;
        }
    }
    for (k, v) in overrides {
        s.set(k, v)?;
    }
    s.validate()?;
    Ok(s)
}
