use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Loader, ProblemError, ReductionEdge};
use crate::ansatze::Ansatz;
use crate::config::{check_table, FieldDescriptor};
use crate::optimizers::{Initializer, Optimizer};
use crate::pipeline::ResultProcessor;
use crate::simulator::Platform;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PluginKind {
    Loader,
    Platform,
    Ansatz,
    Reduction,
    Initializer,
    Optimizer,
    Processor,
}

impl PluginKind {
    pub const ALL: [PluginKind; 7] = [
        PluginKind::Loader,
        PluginKind::Platform,
        PluginKind::Ansatz,
        PluginKind::Reduction,
        PluginKind::Initializer,
        PluginKind::Optimizer,
        PluginKind::Processor,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PluginKind::Loader => "loader",
            PluginKind::Platform => "platform",
            PluginKind::Ansatz => "ansatz",
            PluginKind::Reduction => "reduction",
            PluginKind::Initializer => "initializer",
            PluginKind::Optimizer => "optimizer",
            PluginKind::Processor => "processor",
        }
    }
}

impl fmt::Display for PluginKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PluginKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PluginKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown plugin kind `{s}`"))
    }
}

/// Builds a plugin from its (already key-checked) settings table.
pub type PluginFactory<T> = Arc<dyn Fn(&toml::Table) -> Result<T, String> + Send + Sync>;

#[derive(Clone)]
pub enum Factory {
    Loader(PluginFactory<Box<dyn Loader>>),
    Platform(PluginFactory<Arc<dyn Platform>>),
    Ansatz(PluginFactory<Box<dyn Ansatz>>),
    Reduction(PluginFactory<ReductionEdge>),
    Initializer(PluginFactory<Box<dyn Initializer>>),
    Optimizer(PluginFactory<Box<dyn Optimizer>>),
    Processor(PluginFactory<Box<dyn ResultProcessor>>),
}

impl Factory {
    pub fn kind(&self) -> PluginKind {
        match self {
            Factory::Loader(_) => PluginKind::Loader,
            Factory::Platform(_) => PluginKind::Platform,
            Factory::Ansatz(_) => PluginKind::Ansatz,
            Factory::Reduction(_) => PluginKind::Reduction,
            Factory::Initializer(_) => PluginKind::Initializer,
            Factory::Optimizer(_) => PluginKind::Optimizer,
            Factory::Processor(_) => PluginKind::Processor,
        }
    }
}

#[derive(Clone)]
pub struct PluginEntry {
    pub name: String,
    pub summary: String,
    pub fields: Vec<FieldDescriptor>,
    /// Inactive plugins must be listed in the run's `plugins` field.
    pub default_active: bool,
    pub factory: Factory,
}

impl fmt::Debug for PluginEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PluginEntry")
            .field("kind", &self.kind())
            .field("name", &self.name)
            .field("fields", &self.fields.len())
            .field("default_active", &self.default_active)
            .finish()
    }
}

impl PluginEntry {
    pub fn new(name: &str, factory: Factory) -> Self {
        Self {
            name: name.into(),
            summary: String::new(),
            fields: Vec::new(),
            default_active: true,
            factory,
        }
    }

    pub fn summary(mut self, summary: &str) -> Self {
        self.summary = summary.into();
        self
    }

    pub fn fields(mut self, fields: Vec<FieldDescriptor>) -> Self {
        self.fields = fields;
        self
    }

    pub fn optional(mut self) -> Self {
        self.default_active = false;
        self
    }

    pub fn kind(&self) -> PluginKind {
        self.factory.kind()
    }

    /// Settings table holding every field at its default.
    pub fn default_settings(&self) -> toml::Table {
        self.fields.iter().map(|f| (f.key.clone(), f.default.clone())).collect()
    }
}

/// Plugins by kind and name. Built once, then shared read-only.
#[derive(Clone, Default)]
pub struct PluginRegistry {
    entries: BTreeMap<(PluginKind, String), PluginEntry>,
}

macro_rules! typed_builder {
    ($method:ident, $variant:ident, $ty:ty) => {
        pub fn $method(&self, name: &str, settings: &toml::Table) -> Result<$ty, ProblemError> {
            let entry = self.checked(PluginKind::$variant, name, settings)?;
            match &entry.factory {
                Factory::$variant(f) => f(settings).map_err(|message| ProblemError::InvalidSettings {
                    kind: PluginKind::$variant,
                    name: name.into(),
                    message,
                }),
                _ => unreachable!("registry keys match factory kinds"),
            }
        }
    };
}

impl PluginRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, entry: PluginEntry) -> Result<(), ProblemError> {
        if entry.name.is_empty() {
            return Err(ProblemError::EmptyName);
        }
        let key = (entry.kind(), entry.name.clone());
        if self.entries.contains_key(&key) {
            return Err(ProblemError::DuplicateName {
                kind: key.0,
                name: key.1,
            });
        }
        self.entries.insert(key, entry);
        Ok(())
    }

    /// Registers a factory with no configurable fields.
    pub fn register_plugin(&mut self, kind: PluginKind, name: &str, factory: Factory) -> Result<(), ProblemError> {
        if factory.kind() != kind {
            return Err(ProblemError::InvalidSettings {
                kind,
                name: name.into(),
                message: format!("factory builds {} plugins", factory.kind()),
            });
        }
        self.register(PluginEntry::new(name, factory))
    }

    pub fn lookup(&self, kind: PluginKind, name: &str) -> Result<&PluginEntry, ProblemError> {
        self.entries
            .get(&(kind, name.to_string()))
            .ok_or_else(|| ProblemError::UnknownPlugin {
                kind,
                name: name.into(),
            })
    }

    pub fn names(&self, kind: PluginKind) -> Vec<&str> {
        self.entries
            .keys()
            .filter(|(k, _)| *k == kind)
            .map(|(_, n)| n.as_str())
            .collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &PluginEntry> {
        self.entries.values()
    }

    /// Kinds under which `name` is registered.
    pub fn kinds_of(&self, name: &str) -> Vec<PluginKind> {
        self.entries
            .keys()
            .filter(|(_, n)| n == name)
            .map(|(k, _)| *k)
            .collect()
    }

    fn checked(&self, kind: PluginKind, name: &str, settings: &toml::Table) -> Result<&PluginEntry, ProblemError> {
        let entry = self.lookup(kind, name)?;
        check_table(settings, &entry.fields).map_err(|message| ProblemError::InvalidSettings {
            kind,
            name: name.into(),
            message,
        })?;
        Ok(entry)
    }

    typed_builder!(loader, Loader, Box<dyn Loader>);
    typed_builder!(platform, Platform, Arc<dyn Platform>);
    typed_builder!(ansatz, Ansatz, Box<dyn Ansatz>);
    typed_builder!(reduction, Reduction, ReductionEdge);
    typed_builder!(initializer, Initializer, Box<dyn Initializer>);
    typed_builder!(optimizer, Optimizer, Box<dyn Optimizer>);
    typed_builder!(processor, Processor, Box<dyn ResultProcessor>);

    /// Builds every active reduction (default-active, or named in `extra`),
    /// with per-reduction settings taken from `settings[name]`.
    pub fn active_reductions(
        &self,
        extra: &[String],
        settings: &BTreeMap<String, toml::Table>,
    ) -> Result<Vec<ReductionEdge>, ProblemError> {
        let empty = toml::Table::new();
        self.entries
            .values()
            .filter(|e| e.kind() == PluginKind::Reduction)
            .filter(|e| e.default_active || extra.contains(&e.name))
            .map(|e| self.reduction(&e.name, settings.get(&e.name).unwrap_or(&empty)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::reduction::ReductionEdge;

    fn qubo_ising() -> Factory {
        Factory::Reduction(Arc::new(|_| Ok(ReductionEdge::qubo_to_ising())))
    }

    #[test]
    fn register_and_lookup() {
        let mut registry = PluginRegistry::new();
        registry.register_plugin(PluginKind::Reduction, "qi", qubo_ising()).unwrap();
        assert_eq!(registry.lookup(PluginKind::Reduction, "qi").unwrap().name, "qi");
        assert_eq!(
            registry.register_plugin(PluginKind::Reduction, "qi", qubo_ising()).unwrap_err(),
            ProblemError::DuplicateName {
                kind: PluginKind::Reduction,
                name: "qi".into()
            }
        );
        assert!(matches!(
            registry.lookup(PluginKind::Ansatz, "nonexistent"),
            Err(ProblemError::UnknownPlugin { .. })
        ));
        assert!(registry.register_plugin(PluginKind::Ansatz, "qi", qubo_ising()).is_err());
        assert_eq!(registry.register_plugin(PluginKind::Reduction, "", qubo_ising()), Err(ProblemError::EmptyName));
    }

    #[test]
    fn same_name_in_two_kinds_is_fine() {
        let mut registry = PluginRegistry::new();
        registry.register_plugin(PluginKind::Reduction, "x", qubo_ising()).unwrap();
        let edge = registry.reduction("x", &toml::Table::new()).unwrap();
        assert_eq!(edge.target, "ising");
        let mut bad = toml::Table::new();
        bad.insert("nope".into(), toml::Value::Integer(1));
        assert!(matches!(registry.reduction("x", &bad), Err(ProblemError::InvalidSettings { .. })));
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in PluginKind::ALL {
            assert_eq!(kind.as_str().parse::<PluginKind>().unwrap(), kind);
        }
    }
}
