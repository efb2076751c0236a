//! Experiment configuration files, plugin field metadata and the
//! interactive configuration wizard.
//!
//! A configuration is a TOML document:
//!
//! ```toml
//! [loader]
//! name = "maxcut-graphs"
//! max_nodes = 5
//!
//! [platform]
//! name = "statevector"
//!
//! [ansatz]
//! name = "qaoa"
//! depth = [1, 2]
//!
//! [initializer]
//! name = "uniform-random"
//!
//! [optimizer]
//! name = "local"
//! budget = 400
//!
//! [reductions]
//! path = []
//!
//! [[processors]]
//! name = "ratio-table"
//!
//! [run]
//! seed = 7
//! restarts = 10
//! ```
//!
//! Every plugin section holds `name` plus that plugin's fields. Field keys
//! are checked against the plugin's descriptors, so a misspelt key is an
//! error rather than a silently ignored setting.

mod fields;
mod wizard;

pub use fields::{check_table, settings_from, FieldDescriptor, FieldKind};
pub use wizard::wizard;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use toml::Value;

use crate::problem::{PluginKind, PluginRegistry, ProblemError};
use crate::simulator::ExpectationMode;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("cannot read config `{path}`: {message}")]
    Read { path: String, message: String },
    #[error("cannot parse config `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("cannot write `{path}`: {message}")]
    Write { path: String, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Plugin(#[from] ProblemError),
    #[error("bad override `{text}`: {message}")]
    Override { text: String, message: String },
    #[error("configuration aborted")]
    Aborted,
}

/// A plugin choice and its settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PluginSection {
    pub name: String,
    #[serde(flatten)]
    pub settings: toml::Table,
}

impl PluginSection {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            settings: toml::Table::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.settings.insert(key.into(), value.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReductionsSection {
    /// Reduction names applied in order instead of the shortest path.
    #[serde(default)]
    pub path: Vec<String>,
    /// Per-reduction settings, keyed by reduction name.
    #[serde(flatten)]
    pub settings: BTreeMap<String, toml::Table>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    /// Experiment directory name under `out`.
    pub name: String,
    pub seed: u64,
    pub restarts: usize,
    /// Shots for the final sample of each record.
    pub shots: usize,
    /// Outcomes kept in each record's summary.
    pub top_k: usize,
    pub out: String,
    /// Optional plugins to activate, by name.
    pub plugins: Vec<String>,
    /// Worker threads; 0 uses every core.
    pub workers: usize,
    /// How ratios are computed from the final state.
    pub metrics: ExpectationMode,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            name: "experiment".into(),
            seed: 0,
            restarts: 10,
            shots: 1024,
            top_k: 8,
            out: "results".into(),
            plugins: Vec::new(),
            workers: 0,
            metrics: ExpectationMode::Exact,
        }
    }
}

impl RunSection {
    pub fn fields() -> Vec<FieldDescriptor> {
        let d = Self::default();
        vec![
            FieldDescriptor::text("name", "Experiment name", &d.name),
            FieldDescriptor::integer("seed", "Master seed", d.seed as i64).min(0.0),
            FieldDescriptor::integer("restarts", "Restarts per instance and depth", d.restarts as i64).min(1.0),
            FieldDescriptor::integer("shots", "Final sampling shots", d.shots as i64).min(1.0),
            FieldDescriptor::integer("top_k", "Outcomes kept per record", d.top_k as i64).min(1.0),
            FieldDescriptor::text("out", "Output directory", &d.out),
            FieldDescriptor::text("plugins", "Optional plugins", "").help("comma-separated plugin names"),
            FieldDescriptor::integer("workers", "Worker threads (0 = all cores)", d.workers as i64).min(0.0),
            FieldDescriptor::choice("metrics", "Ratio computation", &["exact", "shots"], "exact"),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub loader: PluginSection,
    #[serde(default = "default_platform")]
    pub platform: PluginSection,
    pub ansatz: PluginSection,
    #[serde(default = "default_initializer")]
    pub initializer: PluginSection,
    pub optimizer: PluginSection,
    #[serde(default)]
    pub reductions: ReductionsSection,
    #[serde(default)]
    pub processors: Vec<PluginSection>,
    #[serde(default)]
    pub run: RunSection,
}

fn default_platform() -> PluginSection {
    PluginSection::new("statevector")
}

fn default_initializer() -> PluginSection {
    PluginSection::new("uniform-random")
}

impl ExperimentConfig {
    pub fn new(loader: PluginSection, ansatz: PluginSection, optimizer: PluginSection) -> Self {
        Self {
            loader,
            platform: default_platform(),
            ansatz,
            initializer: default_initializer(),
            optimizer,
            reductions: ReductionsSection::default(),
            processors: Vec::new(),
            run: RunSection::default(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        Self::parse(text, "<string>")
    }

    fn parse(text: &str, path: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: path.into(),
            message: e.message().to_string(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: shown.clone(),
            message: e.to_string(),
        })?;
        Self::parse(&text, &shown)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ConfigError> {
        let path = path.as_ref();
        std::fs::write(path, self.to_toml_string()).map_err(|e| ConfigError::Write {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    /// Plugin sections in wizard order, with their kinds.
    pub fn sections(&self) -> Vec<(PluginKind, &PluginSection)> {
        let mut out = vec![
            (PluginKind::Loader, &self.loader),
            (PluginKind::Platform, &self.platform),
            (PluginKind::Ansatz, &self.ansatz),
            (PluginKind::Initializer, &self.initializer),
            (PluginKind::Optimizer, &self.optimizer),
        ];
        out.extend(self.processors.iter().map(|p| (PluginKind::Processor, p)));
        out
    }

    /// Checks that every named plugin exists and is active, and that every
    /// plugin accepts its settings. Builds each plugin once to surface
    /// errors that only construction detects.
    pub fn validate(&self, registry: &PluginRegistry) -> Result<(), ConfigError> {
        for name in &self.run.plugins {
            if registry.kinds_of(name).is_empty() {
                return Err(ConfigError::Invalid(format!("run.plugins names unknown plugin `{name}`")));
            }
        }
        let active = |kind: PluginKind, name: &str| -> Result<(), ConfigError> {
            let entry = registry.lookup(kind, name)?;
            if !entry.default_active && !self.run.plugins.iter().any(|p| p == name) {
                return Err(ConfigError::Invalid(format!(
                    "{kind} plugin `{name}` is optional; list it in run.plugins to use it"
                )));
            }
            Ok(())
        };
        for (kind, section) in self.sections() {
            active(kind, &section.name)?;
        }
        registry.loader(&self.loader.name, &self.loader.settings)?;
        registry.platform(&self.platform.name, &self.platform.settings)?;
        registry.ansatz(&self.ansatz.name, &self.ansatz.settings)?;
        registry.initializer(&self.initializer.name, &self.initializer.settings)?;
        registry.optimizer(&self.optimizer.name, &self.optimizer.settings)?;
        for p in &self.processors {
            registry.processor(&p.name, &p.settings)?;
        }
        for name in self.reductions.path.iter().chain(self.reductions.settings.keys()) {
            active(PluginKind::Reduction, name)?;
            let empty = toml::Table::new();
            registry.reduction(name, self.reductions.settings.get(name).unwrap_or(&empty))?;
        }
        let run = &self.run;
        if run.restarts == 0 || run.shots == 0 || run.top_k == 0 {
            return Err(ConfigError::Invalid("run.restarts, run.shots and run.top_k must be at least 1".into()));
        }
        if run.name.is_empty() || run.name.contains(['/', '\\']) || run.name == "." || run.name == ".." {
            return Err(ConfigError::Invalid(format!("run.name `{}` is not a plain directory name", run.name)));
        }
        Ok(())
    }

    /// Applies `key.path=value` overrides. Values are parsed as TOML
    /// (`3`, `0.5`, `true`, `[1, 2]`, `"text"`), falling back to a bare
    /// string. Numeric path segments index arrays such as `processors.0`.
    pub fn with_overrides(&self, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut tree = Value::try_from(self).expect("configs always serialize");
        for text in overrides {
            let bad = |message: String| ConfigError::Override {
                text: text.clone(),
                message,
            };
            let (key, raw) = text.split_once('=').ok_or_else(|| bad("expected key=value".into()))?;
            let value = parse_value(raw.trim());
            let segments: Vec<&str> = key.trim().split('.').collect();
            if segments.iter().any(|s| s.is_empty()) {
                return Err(bad("empty key segment".into()));
            }
            set_path(&mut tree, &segments, value).map_err(bad)?;
        }
        let text = toml::to_string(&tree).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Self::parse(&text, "<overrides>")
    }
}

fn parse_value(raw: &str) -> Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

fn set_path(node: &mut Value, segments: &[&str], value: Value) -> Result<(), String> {
    let (head, rest) = segments.split_first().expect("non-empty path");
    match node {
        Value::Table(table) => {
            if rest.is_empty() {
                table.insert(head.to_string(), value);
                return Ok(());
            }
            let child = table
                .entry(head.to_string())
                .or_insert_with(|| Value::Table(toml::Table::new()));
            set_path(child, rest, value)
        }
        Value::Array(items) => {
            let index: usize = head.parse().map_err(|_| format!("`{head}` is not an array index"))?;
            let len = items.len();
            let slot = items
                .get_mut(index)
                .ok_or_else(|| format!("index {index} out of range (length {len})"))?;
            if rest.is_empty() {
                *slot = value;
                Ok(())
            } else {
                set_path(slot, rest, value)
            }
        }
        _ => Err(format!("`{head}` descends into a non-table value")),
    }
}

/// Field descriptors of one registered plugin.
pub fn describe_fields(registry: &PluginRegistry, kind: PluginKind, name: &str) -> Result<Vec<FieldDescriptor>, ConfigError> {
    Ok(registry.lookup(kind, name)?.fields.clone())
}
