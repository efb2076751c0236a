//! Circuit builders for QAOA, multi-angle QAOA, QAOA+ and XQAOA.
//!
//! Each builder declares its parameter groups in a fixed order with the
//! full table sizes (`2p`, `p(m²+2m)`, `2(p+m)`, `p(m²+3m)`), even where some
//! slots cannot reach a gate:
//!
//! - ma-QAOA and XQAOA allocate `m²` coupling angles per layer, slot
//!   `j·m + k` for the pair `(j, k)`; only `j < k` with `J_jk ≠ 0` is used.
//! - QAOA+ allocates `m` coupling angles `ν` although the chain has `m − 1`
//!   couplings; `ν[0]` is padding.
//!
//! Slots not referenced by any gate are inactive and excluded from
//! optimization unless `strict_table` is set.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::FieldDescriptor;
use crate::encodings::IsingModel;
use crate::problem::ISING;
use crate::simulator::{ParameterTable, ParametricCircuit, SimulatorError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnsatzError {
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("{ansatz} needs at least {min} qubits, got {m}")]
    TooFewQubits { ansatz: &'static str, min: usize, m: usize },
    #[error("{ansatz} has no parameter group `{group}`")]
    UnknownGroup { ansatz: &'static str, group: String },
    #[error(transparent)]
    Circuit(#[from] SimulatorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnsatzKind {
    Qaoa,
    MaQaoa,
    QaoaPlus,
    Xqaoa,
}

impl AnsatzKind {
    pub const ALL: [AnsatzKind; 4] = [AnsatzKind::Qaoa, AnsatzKind::MaQaoa, AnsatzKind::QaoaPlus, AnsatzKind::Xqaoa];

    pub fn name(self) -> &'static str {
        match self {
            AnsatzKind::Qaoa => "qaoa",
            AnsatzKind::MaQaoa => "ma-qaoa",
            AnsatzKind::QaoaPlus => "qaoa-plus",
            AnsatzKind::Xqaoa => "xqaoa",
        }
    }

    /// Parameter groups in declaration order with default bounds.
    pub fn groups(self) -> &'static [(&'static str, f64, f64)] {
        const GAMMA: (&str, f64, f64) = ("gamma", -PI, PI);
        const THETA: (&str, f64, f64) = ("theta", -PI, PI);
        const BETA: (&str, f64, f64) = ("beta", 0.0, PI);
        const ALPHA: (&str, f64, f64) = ("alpha", 0.0, PI);
        const NU: (&str, f64, f64) = ("nu", -PI, PI);
        const MU: (&str, f64, f64) = ("mu", -PI, PI);
        match self {
            AnsatzKind::Qaoa => &[GAMMA, BETA],
            AnsatzKind::MaQaoa => &[GAMMA, THETA, BETA],
            AnsatzKind::QaoaPlus => &[GAMMA, BETA, NU, MU],
            AnsatzKind::Xqaoa => &[GAMMA, THETA, BETA, ALPHA],
        }
    }

    /// Table size for depth `p` on `m` qubits.
    pub fn parameter_count(self, p: usize, m: usize) -> usize {
        match self {
            AnsatzKind::Qaoa => 2 * p,
            AnsatzKind::MaQaoa => p * (m * m + 2 * m),
            AnsatzKind::QaoaPlus => 2 * (p + m),
            AnsatzKind::Xqaoa => p * (m * m + 3 * m),
        }
    }

    fn group_len(self, group: &str, p: usize, m: usize) -> usize {
        match (self, group) {
            (AnsatzKind::Qaoa | AnsatzKind::QaoaPlus, "gamma" | "beta") => p,
            (_, "gamma") => p * m * m,
            (AnsatzKind::QaoaPlus, _) => m,
            _ => p * m,
        }
    }
}

/// Build options shared by every ansatz.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnsatzOptions {
    /// Bound overrides per parameter group.
    pub bounds: BTreeMap<String, [f64; 2]>,
    /// Divide `J` and `h` by their largest magnitude before building.
    pub normalize: bool,
    /// Optimize every table slot, including ones that reach no gate.
    pub strict_table: bool,
}

fn table(kind: AnsatzKind, p: usize, m: usize, options: &AnsatzOptions) -> Result<ParameterTable, AnsatzError> {
    if p == 0 {
        return Err(AnsatzError::ZeroDepth);
    }
    let mut table = ParameterTable::new();
    for &(name, lower, upper) in kind.groups() {
        table.declare(name, kind.group_len(name, p, m), lower, upper)?;
    }
    for (group, [lower, upper]) in &options.bounds {
        if table.group(group).is_none() {
            return Err(AnsatzError::UnknownGroup {
                ansatz: kind.name(),
                group: group.clone(),
            });
        }
        table.set_bounds(group, *lower, *upper)?;
    }
    Ok(table)
}

fn prepared(model: &IsingModel, options: &AnsatzOptions) -> IsingModel {
    let scale = model.max_abs_coefficient();
    if options.normalize && scale > 0.0 {
        model.scaled(1.0 / scale)
    } else {
        model.clone()
    }
}

fn finish(mut circuit: ParametricCircuit, options: &AnsatzOptions) -> ParametricCircuit {
    if options.strict_table {
        circuit.activate_all_parameters();
    }
    circuit
}

fn hadamards(circuit: &mut ParametricCircuit) -> Result<(), AnsatzError> {
    for q in 0..circuit.num_qubits() {
        circuit.h(q)?;
    }
    Ok(())
}

/// Cost layer `i`. With `multi_angle` every term gets its own angle,
/// otherwise all terms share `gamma[i]`.
fn cost_layer(circuit: &mut ParametricCircuit, model: &IsingModel, i: usize, multi_angle: bool) -> Result<(), AnsatzError> {
    let m = model.num_spins();
    for k in 0..m {
        for j in 0..k {
            let coupling = model.coupling(j, k);
            if coupling != 0.0 {
                let slot = if multi_angle { i * m * m + j * m + k } else { i };
                let angle = circuit.param("gamma", slot, 2.0 * coupling)?;
                circuit.rzz(j, k, angle)?;
            }
        }
    }
    for j in 0..m {
        let field = model.field(j);
        if field != 0.0 {
            let angle = if multi_angle {
                circuit.param("theta", i * m + j, 2.0 * field)?
            } else {
                circuit.param("gamma", i, 2.0 * field)?
            };
            circuit.rz(j, angle)?;
        }
    }
    Ok(())
}

/// Standard QAOA: `H^⊗m`, then `p` layers of `RZZ(2γ_i J_jk)`, `RZ(2γ_i h_j)`
/// and `RX(2β_i)`. Zero coefficients produce no gates.
pub fn build_qaoa(model: &IsingModel, p: usize) -> Result<ParametricCircuit, AnsatzError> {
    build(AnsatzKind::Qaoa, model, p, &AnsatzOptions::default())
}

pub fn build_ma_qaoa(model: &IsingModel, p: usize) -> Result<ParametricCircuit, AnsatzError> {
    build(AnsatzKind::MaQaoa, model, p, &AnsatzOptions::default())
}

pub fn build_qaoa_plus(model: &IsingModel, p: usize) -> Result<ParametricCircuit, AnsatzError> {
    build(AnsatzKind::QaoaPlus, model, p, &AnsatzOptions::default())
}

pub fn build_xqaoa(model: &IsingModel, p: usize) -> Result<ParametricCircuit, AnsatzError> {
    build(AnsatzKind::Xqaoa, model, p, &AnsatzOptions::default())
}

pub fn build(kind: AnsatzKind, model: &IsingModel, p: usize, options: &AnsatzOptions) -> Result<ParametricCircuit, AnsatzError> {
    let m = model.num_spins();
    if kind == AnsatzKind::QaoaPlus && m < 2 {
        return Err(AnsatzError::TooFewQubits {
            ansatz: kind.name(),
            min: 2,
            m,
        });
    }
    let model = prepared(model, options);
    let mut circuit = ParametricCircuit::with_parameters(m, table(kind, p, m, options)?);
    hadamards(&mut circuit)?;
    let multi_angle = matches!(kind, AnsatzKind::MaQaoa | AnsatzKind::Xqaoa);
    for i in 0..p {
        cost_layer(&mut circuit, &model, i, multi_angle)?;
        for j in 0..m {
            let slot = if multi_angle { i * m + j } else { i };
            let beta = circuit.param("beta", slot, 2.0)?;
            circuit.rx(j, beta)?;
        }
        if kind == AnsatzKind::Xqaoa {
            for j in 0..m {
                let alpha = circuit.param("alpha", i * m + j, 2.0)?;
                circuit.ry(j, alpha)?;
            }
        }
    }
    if kind == AnsatzKind::QaoaPlus {
        for j in 0..m {
            let mu = circuit.param("mu", j, 1.0)?;
            circuit.rx(j, mu)?;
        }
        for j in 1..m {
            let nu = circuit.param("nu", j, 1.0)?;
            circuit.rzz(j, j - 1, nu)?;
        }
    }
    Ok(finish(circuit, options))
}

/// An ansatz plugin: builds circuits for every configured depth.
pub trait Ansatz: Send + Sync {
    fn name(&self) -> &str;

    /// Form the problem must be converted to before building.
    fn required_form(&self) -> &str {
        ISING
    }

    fn depths(&self) -> &[usize];

    fn build(&self, model: &IsingModel, p: usize) -> Result<ParametricCircuit, AnsatzError>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnsatzSettings {
    pub depth: Vec<usize>,
    pub bounds: BTreeMap<String, [f64; 2]>,
    pub normalize: bool,
    pub strict_table: bool,
}

impl Default for AnsatzSettings {
    fn default() -> Self {
        Self {
            depth: vec![1],
            bounds: BTreeMap::new(),
            normalize: false,
            strict_table: false,
        }
    }
}

impl AnsatzSettings {
    pub fn fields(kind: AnsatzKind) -> Vec<FieldDescriptor> {
        let mut fields = vec![
            FieldDescriptor::integer_list("depth", "Depths p to run", &[1]).range(1.0, 16.0),
            FieldDescriptor::bounds("bounds", "Parameter bounds").help(&format!(
                "groups: {}",
                kind.groups().iter().map(|g| g.0).collect::<Vec<_>>().join(", ")
            )),
        ];
        if kind != AnsatzKind::Qaoa {
            fields.push(FieldDescriptor::boolean("normalize", "Scale J and h to unit maximum", false));
            fields.push(FieldDescriptor::boolean("strict_table", "Optimize unused table slots", false));
        }
        fields
    }
}

/// One of the four built-in ansätze with its settings.
#[derive(Debug, Clone)]
pub struct BuiltinAnsatz {
    pub kind: AnsatzKind,
    pub depth: Vec<usize>,
    pub options: AnsatzOptions,
}

impl BuiltinAnsatz {
    pub fn new(kind: AnsatzKind, settings: AnsatzSettings) -> Result<Self, AnsatzError> {
        if settings.depth.contains(&0) {
            return Err(AnsatzError::ZeroDepth);
        }
        for group in settings.bounds.keys() {
            if !kind.groups().iter().any(|g| g.0 == group) {
                return Err(AnsatzError::UnknownGroup {
                    ansatz: kind.name(),
                    group: group.clone(),
                });
            }
        }
        Ok(Self {
            kind,
            depth: settings.depth,
            options: AnsatzOptions {
                bounds: settings.bounds,
                normalize: settings.normalize,
                strict_table: settings.strict_table,
            },
        })
    }
}

impl Ansatz for BuiltinAnsatz {
    fn name(&self) -> &str {
        self.kind.name()
    }

    fn depths(&self) -> &[usize] {
        &self.depth
    }

    fn build(&self, model: &IsingModel, p: usize) -> Result<ParametricCircuit, AnsatzError> {
        build(self.kind, model, p, &self.options)
    }
}
