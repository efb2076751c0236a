//! Problems as collections of equivalent forms, the reduction graph that
//! converts between forms, and the plugin registry.

mod loaders;
mod reduction;
mod registry;

pub use loaders::{AcpLoader, AcpLoaderSettings, Loader, MaxCutFileLoader, MaxCutGraphsLoader};
pub use reduction::{builtin_reductions, convert, find_reduction_path, ReductionEdge, Transform};
pub use registry::{Factory, PluginEntry, PluginFactory, PluginKind, PluginRegistry};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::acp::AcpInstance;
use crate::encodings::{IsingModel, MaxCutInstance, McecInstance, QuboInstance};

pub const ACP: &str = "acp";
pub const MCEC: &str = "mcec";
pub const QUBO: &str = "qubo";
pub const ISING: &str = "ising";
pub const MAXCUT: &str = "maxcut";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("plugin names must be non-empty")]
    EmptyName,
    #[error("{kind} plugin `{name}` is already registered")]
    DuplicateName { kind: PluginKind, name: String },
    #[error("unknown {kind} plugin `{name}`")]
    UnknownPlugin { kind: PluginKind, name: String },
    #[error("{kind} plugin `{name}`: {message}")]
    InvalidSettings {
        kind: PluginKind,
        name: String,
        message: String,
    },
    #[error("no reduction path from `{from}` to `{to}`")]
    NoPath { from: String, to: String },
    #[error("a reduction must change the form, got `{0}` to itself")]
    SameForm(String),
    #[error("form `{0}` already present")]
    FormExists(String),
    #[error("instance has no `{0}` form")]
    MissingForm(String),
    #[error("reduction `{reduction}` failed: {message}")]
    Reduction { reduction: String, message: String },
    #[error("loading failed: {0}")]
    Load(String),
}

/// One representation of a problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", content = "data", rename_all = "lowercase")]
pub enum Form {
    Acp(AcpInstance),
    Mcec(McecInstance),
    Qubo(QuboInstance),
    Ising(IsingModel),
    #[serde(rename = "maxcut")]
    MaxCut(MaxCutInstance),
}

impl Form {
    pub fn name(&self) -> &'static str {
        match self {
            Form::Acp(_) => ACP,
            Form::Mcec(_) => MCEC,
            Form::Qubo(_) => QUBO,
            Form::Ising(_) => ISING,
            Form::MaxCut(_) => MAXCUT,
        }
    }
}

/// A named problem with its original form and every form derived from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    name: String,
    original: String,
    forms: BTreeMap<String, Form>,
}

impl ProblemInstance {
    pub fn new(name: impl Into<String>, payload: Form) -> Result<Self, ProblemError> {
        let name = name.into();
        if name.is_empty() {
            return Err(ProblemError::EmptyName);
        }
        let original = payload.name().to_string();
        Ok(Self {
            name,
            forms: BTreeMap::from([(original.clone(), payload)]),
            original,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Name of the form the instance was loaded as.
    pub fn original_form(&self) -> &str {
        &self.original
    }

    pub fn payload(&self) -> &Form {
        &self.forms[&self.original]
    }

    pub fn form(&self, name: &str) -> Option<&Form> {
        self.forms.get(name)
    }

    pub fn has_form(&self, name: &str) -> bool {
        self.forms.contains_key(name)
    }

    pub fn form_names(&self) -> impl Iterator<Item = &str> {
        self.forms.keys().map(String::as_str)
    }

    /// Adds a new form; existing forms are never replaced.
    pub fn add_form(&mut self, form: Form) -> Result<(), ProblemError> {
        let key = form.name();
        if self.forms.contains_key(key) {
            return Err(ProblemError::FormExists(key.to_string()));
        }
        self.forms.insert(key.to_string(), form);
        Ok(())
    }

    pub fn ising(&self) -> Option<&IsingModel> {
        match self.forms.get(ISING) {
            Some(Form::Ising(model)) => Some(model),
            _ => None,
        }
    }

    pub fn maxcut(&self) -> Option<&MaxCutInstance> {
        match self.forms.get(MAXCUT) {
            Some(Form::MaxCut(graph)) => Some(graph),
            _ => None,
        }
    }

    pub fn mcec(&self) -> Option<&McecInstance> {
        match self.forms.get(MCEC) {
            Some(Form::Mcec(mcec)) => Some(mcec),
            _ => None,
        }
    }

    pub fn acp(&self) -> Option<&AcpInstance> {
        match self.forms.get(ACP) {
            Some(Form::Acp(acp)) => Some(acp),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_are_added_not_replaced() {
        let graph = MaxCutInstance::complete(3);
        let mut instance = ProblemInstance::new("k3", Form::MaxCut(graph.clone())).unwrap();
        assert_eq!(instance.original_form(), MAXCUT);
        instance.add_form(Form::Ising(IsingModel::zeros(3))).unwrap();
        assert_eq!(
            instance.add_form(Form::Ising(IsingModel::zeros(3))),
            Err(ProblemError::FormExists(ISING.into()))
        );
        assert_eq!(instance.maxcut(), Some(&graph));
        assert_eq!(instance.form_names().collect::<Vec<_>>(), vec![ISING, MAXCUT]);
        assert!(ProblemInstance::new("", Form::MaxCut(graph)).is_err());
    }
}
