//! Scenario documents.
//!
//! A scenario is a JSON object. Field names and defaults are listed in
//! `docs/config-schema.md`; unknown keys are rejected.

use std::fmt;

use blockfade_core::nalgebra::DMatrix;
use blockfade_core::{
    ArrayGeometry, ChannelModel, Complex64, CorrelationMode, CorrelationSpec, ResourceGrid,
    UserSpec,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::preset::Preset;

pub const DEFAULT_BINS: usize = blockfade_core::analytics::DEFAULT_BINS;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    /// Malformed JSON.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// Well-formed JSON that does not fit the schema (unknown key, wrong type).
    #[error("schema error at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },
    /// A value that violates a constraint, named by its path in the document.
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("unknown preset {0:?} (expected one of {list})", list = Preset::names().join(", "))]
    UnknownPreset(String),
}

impl ConfigError {
    fn invalid(path: impl Into<String>, message: impl fmt::Display) -> Self {
        ConfigError::Invalid {
            path: path.into(),
            message: message.to_string(),
        }
    }

    fn from_core(prefix: &str, err: blockfade_core::Error) -> Self {
        use blockfade_core::Error as E;
        let join = |field: &str| {
            if prefix.is_empty() {
                field.to_string()
            } else {
                format!("{prefix}.{field}")
            }
        };
        match err {
            E::InvalidParameter {
                field,
                constraint,
                value,
            } => Self::invalid(join(field), format!("{constraint} (got {value})")),
            E::DimensionMismatch {
                what,
                expected,
                found,
            } => Self::invalid(
                join(what.split(' ').next().unwrap_or(what)),
                format!("expected {expected} entries, found {found}"),
            ),
            E::EmptyInput(what) => Self::invalid(join(what), "must not be empty"),
            other => Self::invalid(prefix, other),
        }
    }
}

impl From<serde_json::Error> for ConfigError {
    fn from(err: serde_json::Error) -> Self {
        use serde_json::error::Category;
        let (line, column) = (err.line(), err.column());
        let message = err.to_string();
        // serde_json appends " at line X column Y"
        let message = match message.rfind(" at line ") {
            Some(pos) => message[..pos].to_string(),
            None => message,
        };
        match err.classify() {
            Category::Data => ConfigError::Schema {
                line,
                column,
                message,
            },
            _ => ConfigError::Syntax {
                line,
                column,
                message,
            },
        }
    }
}

/// An artifact a scenario run can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputKind {
    Histogram,
    CrossCorrelation,
    Eigencdf,
    PowerProfile,
    CorrelationMatrix,
    RawChannel,
}

impl OutputKind {
    pub const ALL: [OutputKind; 6] = [
        OutputKind::Histogram,
        OutputKind::CrossCorrelation,
        OutputKind::Eigencdf,
        OutputKind::PowerProfile,
        OutputKind::CorrelationMatrix,
        OutputKind::RawChannel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OutputKind::Histogram => "histogram",
            OutputKind::CrossCorrelation => "cross-correlation",
            OutputKind::Eigencdf => "eigencdf",
            OutputKind::PowerProfile => "power-profile",
            OutputKind::CorrelationMatrix => "correlation-matrix",
            OutputKind::RawChannel => "raw-channel",
        }
    }

    fn needs_pairs(self) -> bool {
        matches!(
            self,
            OutputKind::CrossCorrelation | OutputKind::CorrelationMatrix
        )
    }
}

/// Outputs produced when a document does not list any.
pub fn default_outputs(n_users: usize) -> Vec<OutputKind> {
    OutputKind::ALL
        .into_iter()
        .filter(|o| *o != OutputKind::RawChannel && (n_users >= 2 || !o.needs_pairs()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    #[default]
    None,
    Time,
    Frequency,
}

impl From<ModeName> for CorrelationMode {
    fn from(m: ModeName) -> Self {
        match m {
            ModeName::None => CorrelationMode::None,
            ModeName::Time => CorrelationMode::Time,
            ModeName::Frequency => CorrelationMode::Frequency,
        }
    }
}

/// Covariance given as separate real and imaginary row lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomMatrix {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

/// Correlation of the fading grids along the resource grid. The correlated
/// length is taken from the grid (`t_max` for time, `f_max` for frequency).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationConfig {
    #[serde(default)]
    pub mode: ModeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom: Option<CustomMatrix>,
}

impl CorrelationConfig {
    pub fn exponential(mode: ModeName, rho: f64) -> Self {
        Self {
            mode,
            rho: Some(rho),
            custom: None,
        }
    }

    pub fn to_spec(&self, grid: &ResourceGrid) -> Result<CorrelationSpec, ConfigError> {
        let mode = CorrelationMode::from(self.mode);
        let length = match self.mode {
            ModeName::None => {
                if self.rho.is_some() || self.custom.is_some() {
                    return Err(ConfigError::invalid(
                        "correlation",
                        "mode \"none\" takes neither rho nor custom",
                    ));
                }
                return Ok(CorrelationSpec::none());
            }
            ModeName::Time => grid.t_max,
            ModeName::Frequency => grid.f_max,
        };
        let spec = match (self.rho, &self.custom) {
            (Some(rho), None) => CorrelationSpec::exponential(mode, rho, length),
            (None, Some(custom)) => CorrelationSpec::custom(mode, custom_matrix(custom)?),
            _ => {
                return Err(ConfigError::invalid(
                    "correlation",
                    "exactly one of rho or custom is required when mode is time or frequency",
                ))
            }
        };
        spec.validate()
            .and_then(|_| spec.check_grid(grid))
            .map_err(|e| ConfigError::from_core("correlation", e))?;
        Ok(spec)
    }
}

fn custom_matrix(custom: &CustomMatrix) -> Result<DMatrix<Complex64>, ConfigError> {
    let n = custom.re.len();
    let zeros = vec![vec![0.0; n]; n];
    let im = custom.im.as_ref().unwrap_or(&zeros);
    if im.len() != n {
        return Err(ConfigError::invalid(
            "correlation.custom.im",
            format!("expected {n} rows, found {}", im.len()),
        ));
    }
    for (part, rows) in [("re", &custom.re), ("im", im)] {
        if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != n) {
            return Err(ConfigError::invalid(
                format!("correlation.custom.{part}[{r}]"),
                format!("expected {n} columns, found {}", row.len()),
            ));
        }
    }
    Ok(DMatrix::from_fn(n, n, |i, j| {
        Complex64::new(custom.re[i][j], im[i][j])
    }))
}

/// A fully specified, validated scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub geometry: ArrayGeometry,
    pub users: Vec<UserSpec>,
    pub grid: ResourceGrid,
    pub correlation: CorrelationConfig,
    pub realizations: u64,
    pub outputs: Vec<OutputKind>,
    pub bins: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    preset: Option<String>,
    seed: Option<u64>,
    geometry: Option<ArrayGeometry>,
    users: Option<Vec<UserSpec>>,
    grid: Option<ResourceGrid>,
    correlation: Option<CorrelationConfig>,
    realizations: Option<u64>,
    outputs: Option<Vec<OutputKind>>,
    bins: Option<usize>,
}

/// Parses and validates a scenario document.
///
/// A document either describes a scenario in full or names a `preset`,
/// optionally overriding its `seed`, `realizations`, `outputs` and `bins`.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let doc: Document = serde_json::from_str(text)?;
    let mut config = match doc.preset {
        Some(name) => {
            let fixed = [
                ("geometry", doc.geometry.is_some()),
                ("users", doc.users.is_some()),
                ("grid", doc.grid.is_some()),
                ("correlation", doc.correlation.is_some()),
            ];
            if let Some((key, _)) = fixed.iter().find(|(_, present)| *present) {
                return Err(ConfigError::invalid(
                    *key,
                    "cannot be combined with preset (only seed, realizations, outputs and bins can be overridden)",
                ));
            }
            let mut config = name.parse::<Preset>()?.config();
            if let Some(outputs) = doc.outputs.clone() {
                config.outputs = outputs;
            }
            config
        }
        None => {
            let users = required(doc.users, "users")?;
            let outputs = doc
                .outputs
                .clone()
                .unwrap_or_else(|| default_outputs(users.len()));
            ScenarioConfig {
                seed: required(doc.seed, "seed")?,
                geometry: required(doc.geometry, "geometry")?,
                users,
                grid: doc.grid.unwrap_or_default(),
                correlation: doc.correlation.unwrap_or_default(),
                realizations: required(doc.realizations, "realizations")?,
                outputs,
                bins: DEFAULT_BINS,
            }
        }
    };
    if let Some(seed) = doc.seed {
        config.seed = seed;
    }
    if let Some(r) = doc.realizations {
        config.realizations = r;
    }
    if let Some(bins) = doc.bins {
        config.bins = bins;
    }
    config.validate()?;
    Ok(config)
}

fn required<T>(value: Option<T>, path: &str) -> Result<T, ConfigError> {
    value.ok_or_else(|| ConfigError::invalid(path, "is required"))
}

impl ScenarioConfig {
    pub fn n_users(&self) -> usize {
        self.users.len()
    }

    pub fn wants(&self, output: OutputKind) -> bool {
        self.outputs.contains(&output)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.geometry
            .validate()
            .map_err(|e| ConfigError::from_core("geometry", e))?;
        if self.users.is_empty() {
            return Err(ConfigError::invalid(
                "users",
                "at least one user is required",
            ));
        }
        for (j, user) in self.users.iter().enumerate() {
            if user.clusters.is_empty() {
                return Err(ConfigError::invalid(
                    format!("users[{j}].clusters"),
                    "at least one cluster is required",
                ));
            }
            for (c, cluster) in user.clusters.iter().enumerate() {
                cluster
                    .validate(self.geometry.n_antennas)
                    .map_err(|e| ConfigError::from_core(&format!("users[{j}].clusters[{c}]"), e))?;
            }
        }
        self.grid
            .validate()
            .map_err(|e| ConfigError::from_core("grid", e))?;
        self.correlation.to_spec(&self.grid)?;
        if self.realizations == 0 {
            return Err(ConfigError::invalid(
                "realizations",
                "must be at least 1 (got 0)",
            ));
        }
        if self.bins == 0 {
            return Err(ConfigError::invalid("bins", "must be at least 1 (got 0)"));
        }
        for (k, output) in self.outputs.iter().enumerate() {
            if self.outputs[..k].contains(output) {
                return Err(ConfigError::invalid(
                    format!("outputs[{k}]"),
                    format!("{} is listed more than once", output.name()),
                ));
            }
            if output.needs_pairs() && self.n_users() < 2 {
                return Err(ConfigError::invalid(
                    format!("outputs[{k}]"),
                    format!("{} needs at least 2 users", output.name()),
                ));
            }
        }
        Ok(())
    }

    pub fn correlation_spec(&self) -> Result<CorrelationSpec, ConfigError> {
        self.correlation.to_spec(&self.grid)
    }

    pub fn model(&self) -> Result<ChannelModel, ConfigError> {
        ChannelModel::new(
            self.geometry,
            self.users.clone(),
            self.grid,
            self.correlation_spec()?,
        )
        .map_err(|e| ConfigError::from_core("", e))
    }

    /// Pretty-printed document that [`parse_config`] maps back to `self`.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("config serializes to JSON");
        text.push('\n');
        text
    }
}
