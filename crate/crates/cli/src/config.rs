//! Run configuration: a JSON document, optionally patched by `SOFTDECO_*`
//! environment variables, validated in full at load time.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use softdeco::constants::{coupling, FINE_STRUCTURE};
use softdeco::decoherence::{CutoffSet, Variant};
use softdeco::experiment::{ParticleMirror, SlitGeometry, SlitPath};
use softdeco::kinematics::{DetectorVertex, InterferometerGeometry};
use softdeco::numerics::QuadratureSpec;
use softdeco::Error as CoreError;

pub const ENV_PREFIX: &str = "SOFTDECO_";

/// Every key path an environment variable may override.
pub const OVERRIDABLE: [&str; 20] = [
    "geometry.l",
    "geometry.tau",
    "geometry.detector_vertex",
    "cutoffs.lambda_ir",
    "cutoffs.omega_uv",
    "cutoffs.beta",
    "charge.Q",
    "charge.alpha",
    "quadrature.n_theta",
    "quadrature.n_phi",
    "quadrature.panels_per_period",
    "quadrature.rel_tol",
    "quadrature.abs_tol",
    "variants",
    "sweep.parameter",
    "sweep.start",
    "sweep.stop",
    "sweep.points",
    "sweep.scale",
    "seed",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// Dotted key path or environment variable at fault.
    pub key: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "config error at line {l}, column {c}, key `{}`: {}", self.key, self.message),
            (Some(l), None) => write!(f, "config error at line {l}, key `{}`: {}", self.key, self.message),
            _ => write!(f, "config error, key `{}`: {}", self.key, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub l: f64,
    pub tau: f64,
    #[serde(default)]
    pub detector_vertex: DetectorVertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChargeConfig {
    #[serde(rename = "Q", default = "one")]
    pub q: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

impl Default for ChargeConfig {
    fn default() -> Self {
        Self {
            q: 1.0,
            alpha: FINE_STRUCTURE,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn default_alpha() -> f64 {
    FINE_STRUCTURE
}

fn default_variants() -> Vec<Variant> {
    vec![Variant::Dressed, Variant::Sub, Variant::Hard]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    L,
    Tau,
    LambdaIr,
    OmegaUv,
    /// Sets `omega_uv = value / tau`.
    OmegaTau,
    Beta,
    #[serde(rename = "Q")]
    Q,
    Alpha,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::L => "l",
            SweepParameter::Tau => "tau",
            SweepParameter::LambdaIr => "lambda_ir",
            SweepParameter::OmegaUv => "omega_uv",
            SweepParameter::OmegaTau => "omega_tau",
            SweepParameter::Beta => "beta",
            SweepParameter::Q => "Q",
            SweepParameter::Alpha => "alpha",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default = "linear")]
    pub scale: Scale,
}

fn linear() -> Scale {
    Scale::Linear
}

impl SweepConfig {
    /// Grid values; `points = 0` gives an empty grid.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|k| {
                if n == 1 {
                    return self.start;
                }
                let f = k as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.start + f * (self.stop - self.start),
                    Scale::Log => (self.start.ln() + f * (self.stop / self.start).ln()).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    pub cutoffs: CutoffSet,
    #[serde(default)]
    pub charge: ChargeConfig,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default = "default_variants")]
    pub variants: Vec<Variant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    /// Seed for randomized checks; the `--seed` flag takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn coupling(&self) -> f64 {
        coupling(self.charge.alpha, self.charge.q)
    }

    pub fn interferometer(&self) -> Result<InterferometerGeometry, CoreError> {
        Ok(InterferometerGeometry::new(self.geometry.l, self.geometry.tau, self.coupling())?
            .with_detector_vertex(self.geometry.detector_vertex))
    }

    /// Copy with one parameter replaced, for sweeps.
    pub fn with_parameter(&self, parameter: SweepParameter, value: f64) -> RunConfig {
        let mut c = self.clone();
        match parameter {
            SweepParameter::L => c.geometry.l = value,
            SweepParameter::Tau => c.geometry.tau = value,
            SweepParameter::LambdaIr => c.cutoffs.lambda_ir = value,
            SweepParameter::OmegaUv => c.cutoffs.omega_uv = value,
            SweepParameter::OmegaTau => c.cutoffs.omega_uv = value / c.geometry.tau,
            SweepParameter::Beta => c.cutoffs.beta = Some(value),
            SweepParameter::Q => c.charge.q = value,
            SweepParameter::Alpha => c.charge.alpha = value,
        }
        c
    }

    /// Checks everything the computation will later rely on. Returns the
    /// dotted key at fault with the reason.
    pub fn validate(&self) -> Result<(), (String, String)> {
        let keyed = |e: CoreError| (core_error_key(&e).to_string(), e.to_string());
        if !(self.charge.alpha > 0.0) || !self.charge.alpha.is_finite() {
            return Err(("charge.alpha".into(), "must be positive and finite".into()));
        }
        if !self.charge.q.is_finite() {
            return Err(("charge.Q".into(), "must be finite".into()));
        }
        self.interferometer().map_err(keyed)?;
        self.cutoffs.validate().map_err(keyed)?;
        self.quadrature.validate().map_err(keyed)?;
        if self.variants.is_empty() {
            return Err(("variants".into(), "at least one variant is required".into()));
        }
        let sweeps_lambda = matches!(self.sweep, Some(s) if s.parameter == SweepParameter::LambdaIr);
        if self.variants.contains(&Variant::Full) && self.cutoffs.lambda_ir == 0.0 && !sweeps_lambda {
            return Err(("cutoffs.lambda_ir".into(), CoreError::InfraredDivergence.to_string()));
        }
        if let Some(s) = &self.sweep {
            if !s.start.is_finite() || !s.stop.is_finite() {
                return Err(("sweep.start".into(), "sweep bounds must be finite".into()));
            }
            if s.scale == Scale::Log && !(s.start > 0.0 && s.stop > 0.0) {
                return Err(("sweep.scale".into(), "log sweeps need positive start and stop".into()));
            }
        }
        Ok(())
    }
}

/// Maps a library parameter name to the config key that feeds it.
fn core_error_key(e: &CoreError) -> &'static str {
    match e {
        CoreError::Superluminal { .. } => "geometry.l",
        CoreError::InvalidParameter { name, .. } => match *name {
            "l" => "geometry.l",
            "tau" => "geometry.tau",
            "charge" => "charge.Q",
            "lambda_ir" => "cutoffs.lambda_ir",
            "omega_uv" => "cutoffs.omega_uv",
            "beta" => "cutoffs.beta",
            "n_theta" => "quadrature.n_theta",
            "n_phi" => "quadrature.n_phi",
            "panels_per_period" => "quadrature.panels_per_period",
            "rel_tol" => "quadrature.rel_tol",
            "abs_tol" => "quadrature.abs_tol",
            _ => "config",
        },
        CoreError::InfraredDivergence => "cutoffs.lambda_ir",
        _ => "config",
    }
}

/// Line and column (1-based) of the first occurrence of `"key"` after the
/// section key, if any.
pub fn locate_key(text: &str, dotted: &str) -> Option<(usize, usize)> {
    let mut offset = 0;
    for part in dotted.split('.') {
        let needle = format!("\"{part}\"");
        offset += text[offset..].find(&needle)?;
        if !dotted.ends_with(part) {
            offset += needle.len();
        }
    }
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = offset - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    Some((line, column))
}

fn env_name(path: &str) -> String {
    format!("{ENV_PREFIX}{}", path.replace('.', "_").to_uppercase())
}

/// Applies overrides. Values are parsed as JSON, falling back to a plain
/// string so `SOFTDECO_SWEEP_SCALE=log` works unquoted.
pub fn apply_overrides<I>(root: &mut Value, vars: I) -> Result<Vec<String>, ConfigError>
where
    I: IntoIterator<Item = (String, String)>,
{
    let mut applied = Vec::new();
    let mut vars: Vec<(String, String)> = vars
        .into_iter()
        .filter(|(k, _)| k.starts_with(ENV_PREFIX))
        .collect();
    vars.sort();
    for (name, raw) in vars {
        let Some(path) = OVERRIDABLE.iter().find(|p| env_name(p) == name) else {
            return Err(ConfigError {
                key: name.clone(),
                line: None,
                column: None,
                message: format!("unknown override; expected one of {}", OVERRIDABLE.map(env_name).join(", ")),
            });
        };
        let value = serde_json::from_str(&raw).unwrap_or(Value::String(raw.clone()));
        let mut node = &mut *root;
        let parts: Vec<&str> = path.split('.').collect();
        for part in &parts[..parts.len() - 1] {
            let Some(map) = node.as_object_mut() else {
                return Err(ConfigError {
                    key: name.clone(),
                    line: None,
                    column: None,
                    message: format!("cannot override inside non-object `{part}`"),
                });
            };
            node = map
                .entry(part.to_string())
                .or_insert_with(|| Value::Object(Default::default()));
        }
        let Some(map) = node.as_object_mut() else {
            return Err(ConfigError {
                key: name.clone(),
                line: None,
                column: None,
                message: "override target is not inside an object".into(),
            });
        };
        map.insert(parts[parts.len() - 1].to_string(), value);
        applied.push(path.to_string());
    }
    Ok(applied)
}

/// Parses, patches and validates a config document.
pub fn parse_config<I>(text: &str, env: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = (String, String)>,
{
    let mut root: Value = serde_json::from_str(text).map_err(|e| ConfigError {
        key: "<document>".into(),
        line: Some(e.line()),
        column: Some(e.column()),
        message: e.to_string(),
    })?;
    let overridden = apply_overrides(&mut root, env)?;
    let config: RunConfig = serde_json::from_value(root).map_err(|e| {
        let message = e.to_string();
        let key = key_from_serde_message(&message);
        schema_error(text, &overridden, key, message)
    })?;
    config
        .validate()
        .map_err(|(key, message)| schema_error(text, &overridden, key, message))?;
    Ok(config)
}

fn schema_error(text: &str, overridden: &[String], key: String, message: String) -> ConfigError {
    if overridden.iter().any(|p| *p == key) {
        return ConfigError {
            key: env_name(&key),
            line: None,
            column: None,
            message,
        };
    }
    let location = locate_key(text, &key);
    ConfigError {
        key,
        line: location.map(|l| l.0),
        column: location.map(|l| l.1),
        message,
    }
}

/// serde messages name the field in backticks; recover the best key we can.
fn key_from_serde_message(message: &str) -> String {
    let quoted: Vec<&str> = message.split('`').skip(1).step_by(2).collect();
    if let Some(first) = quoted.first() {
        if let Some(path) = OVERRIDABLE.iter().find(|p| p.ends_with(&format!(".{first}")) || *p == first) {
            return path.to_string();
        }
        return first.to_string();
    }
    "<document>".into()
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        key: path.display().to_string(),
        line: None,
        column: None,
        message: format!("cannot read config: {e}"),
    })?;
    parse_config(&text, std::env::vars())
}

/// Input for `estimate-slit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlitConfig {
    pub slit: SlitGeometry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acceleration: Option<AccelerationConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mirror: Option<ParticleMirror>,
    /// Wavenumber for the Rayleigh rate; defaults to the mirror's `q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_mag: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccelerationConfig {
    pub z_f: f64,
    pub ell_o: f64,
    #[serde(default = "path_a")]
    pub path: SlitPath,
}

fn path_a() -> SlitPath {
    SlitPath::A
}

pub fn parse_slit_config(text: &str) -> Result<SlitConfig, ConfigError> {
    let config: SlitConfig = serde_json::from_str(text).map_err(|e| {
        let message = e.to_string();
        let quoted: Vec<&str> = message.split('`').skip(1).step_by(2).collect();
        ConfigError {
            key: quoted.first().map_or("<document>".into(), |k| k.to_string()),
            line: Some(e.line()),
            column: Some(e.column()),
            message,
        }
    })?;
    let keyed = |section: &str, e: CoreError| {
        let name = match &e {
            CoreError::InvalidParameter { name, .. } => name.to_string(),
            CoreError::Superluminal { .. } => "v_over_c".into(),
            _ => "config".into(),
        };
        let key = format!("{section}.{name}");
        let location = locate_key(text, &key);
        ConfigError {
            key,
            line: location.map(|l| l.0),
            column: location.map(|l| l.1),
            message: e.to_string(),
        }
    };
    config.slit.validate().map_err(|e| keyed("slit", e))?;
    if let Some(m) = &config.mirror {
        m.validate().map_err(|e| keyed("mirror", e))?;
    }
    Ok(config)
}

pub fn load_slit_config(path: &Path) -> Result<SlitConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        key: path.display().to_string(),
        line: None,
        column: None,
        message: format!("cannot read config: {e}"),
    })?;
    parse_slit_config(&text)
}
