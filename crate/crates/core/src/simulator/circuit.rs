use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SimulatorError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    RX,
    RY,
    RZ,
    RZZ,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::RZZ => 2,
            _ => 1,
        }
    }

    pub fn is_parametric(self) -> bool {
        self != GateKind::H
    }
}

/// Reference to one slot of a named parameter group, multiplied by `scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRef {
    pub slot: usize,
    pub scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Angle {
    Literal(f64),
    Param(ParamRef),
}

impl Angle {
    pub fn resolve(&self, values: &[f64]) -> f64 {
        match *self {
            Angle::Literal(v) => v,
            Angle::Param(r) => r.scale * values[r.slot],
        }
    }
}

impl From<f64> for Angle {
    fn from(value: f64) -> Self {
        Angle::Literal(value)
    }
}

impl From<ParamRef> for Angle {
    fn from(value: ParamRef) -> Self {
        Angle::Param(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gate<A = Angle> {
    pub kind: GateKind,
    pub qubits: [usize; 2],
    pub angle: A,
}

impl<A> Gate<A> {
    pub fn targets(&self) -> &[usize] {
        &self.qubits[..self.kind.arity()]
    }
}

pub type BoundGate = Gate<f64>;

/// One named group of parameters, e.g. `gamma` with one slot per layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterGroup {
    pub name: String,
    pub len: usize,
    pub lower: f64,
    pub upper: f64,
    /// Position of the group's first slot in the flat parameter vector.
    pub offset: usize,
}

/// Named parameter groups laid out contiguously in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParameterTable {
    groups: Vec<ParameterGroup>,
    active: Vec<bool>,
}

impl ParameterTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a group; bounds are closed, `lower < upper`.
    pub fn declare(&mut self, name: &str, len: usize, lower: f64, upper: f64) -> Result<(), SimulatorError> {
        if self.group(name).is_some() {
            return Err(SimulatorError::DuplicateParameter(name.to_string()));
        }
        if !(lower < upper) {
            return Err(SimulatorError::InvalidBounds {
                name: name.to_string(),
                lower,
                upper,
            });
        }
        self.groups.push(ParameterGroup {
            name: name.to_string(),
            len,
            lower,
            upper,
            offset: self.active.len(),
        });
        self.active.extend(std::iter::repeat_n(false, len));
        Ok(())
    }

    pub fn groups(&self) -> &[ParameterGroup] {
        &self.groups
    }

    pub fn group(&self, name: &str) -> Option<&ParameterGroup> {
        self.groups.iter().find(|g| g.name == name)
    }

    /// Total number of slots, referenced or not.
    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    pub fn slot(&self, name: &str, index: usize) -> Result<usize, SimulatorError> {
        let group = self.group(name).ok_or_else(|| SimulatorError::MissingParameter {
            name: name.to_string(),
            index,
        })?;
        if index >= group.len {
            return Err(SimulatorError::MissingParameter {
                name: name.to_string(),
                index,
            });
        }
        Ok(group.offset + index)
    }

    /// `(group name, index within group)` of a flat slot.
    pub fn slot_name(&self, slot: usize) -> (&str, usize) {
        let group = self
            .groups
            .iter()
            .find(|g| slot >= g.offset && slot < g.offset + g.len)
            .expect("slot within table");
        (&group.name, slot - group.offset)
    }

    pub fn bounds(&self, slot: usize) -> (f64, f64) {
        let (name, _) = self.slot_name(slot);
        let g = self.group(name).expect("known group");
        (g.lower, g.upper)
    }

    pub fn is_active(&self, slot: usize) -> bool {
        self.active[slot]
    }

    pub fn active_slots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&s| self.active[s]).collect()
    }

    pub(crate) fn set_active(&mut self, slot: usize) {
        self.active[slot] = true;
    }

    pub(crate) fn activate_all(&mut self) {
        self.active.iter_mut().for_each(|a| *a = true);
    }

    /// Overrides the bounds of a whole group.
    pub fn set_bounds(&mut self, name: &str, lower: f64, upper: f64) -> Result<(), SimulatorError> {
        if !(lower < upper) {
            return Err(SimulatorError::InvalidBounds {
                name: name.to_string(),
                lower,
                upper,
            });
        }
        let group = self
            .groups
            .iter_mut()
            .find(|g| g.name == name)
            .ok_or_else(|| SimulatorError::MissingParameter {
                name: name.to_string(),
                index: 0,
            })?;
        group.lower = lower;
        group.upper = upper;
        Ok(())
    }

    /// Flattens named values into a full slot vector.
    pub fn flatten(&self, values: &BTreeMap<String, Vec<f64>>) -> Result<Vec<f64>, SimulatorError> {
        let mut flat = vec![0.0; self.len()];
        for group in &self.groups {
            let given = values.get(&group.name).map(Vec::as_slice).unwrap_or(&[]);
            for index in 0..group.len {
                let value = *given.get(index).ok_or_else(|| SimulatorError::MissingParameter {
                    name: group.name.clone(),
                    index,
                })?;
                flat[group.offset + index] = value;
            }
        }
        Ok(flat)
    }

    /// Checks that every active slot of `flat` lies within its bounds.
    pub fn check(&self, flat: &[f64]) -> Result<(), SimulatorError> {
        if flat.len() != self.len() {
            return Err(SimulatorError::ParameterCount {
                expected: self.len(),
                actual: flat.len(),
            });
        }
        for group in &self.groups {
            for index in 0..group.len {
                let slot = group.offset + index;
                let value = flat[slot];
                if self.active[slot] && !(value >= group.lower && value <= group.upper) {
                    return Err(SimulatorError::OutOfBounds {
                        name: group.name.clone(),
                        index,
                        value,
                        lower: group.lower,
                        upper: group.upper,
                    });
                }
            }
        }
        Ok(())
    }

    /// Full slot vector from values for the active slots only; inactive
    /// slots get 0 clamped into their bounds.
    pub fn expand(&self, active_values: &[f64]) -> Vec<f64> {
        let mut flat: Vec<f64> = (0..self.len())
            .map(|s| {
                let (lo, hi) = self.bounds(s);
                0.0f64.clamp(lo, hi)
            })
            .collect();
        for (slot, value) in self.active_slots().into_iter().zip(active_values) {
            flat[slot] = *value;
        }
        flat
    }

    pub fn active_bounds(&self) -> Vec<(f64, f64)> {
        self.active_slots().into_iter().map(|s| self.bounds(s)).collect()
    }

    /// Named view of a full slot vector.
    pub fn named(&self, flat: &[f64]) -> BTreeMap<String, Vec<f64>> {
        self.groups
            .iter()
            .map(|g| (g.name.clone(), flat[g.offset..g.offset + g.len].to_vec()))
            .collect()
    }
}

/// Gate list over `m` qubits whose angles may refer to a parameter table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParametricCircuit {
    qubits: usize,
    gates: Vec<Gate>,
    pub parameters: ParameterTable,
}

impl ParametricCircuit {
    pub fn new(qubits: usize) -> Self {
        Self {
            qubits,
            gates: Vec::new(),
            parameters: ParameterTable::new(),
        }
    }

    pub fn with_parameters(qubits: usize, parameters: ParameterTable) -> Self {
        Self {
            qubits,
            gates: Vec::new(),
            parameters,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Reference to `name[index]` scaled by `scale`.
    pub fn param(&self, name: &str, index: usize, scale: f64) -> Result<ParamRef, SimulatorError> {
        Ok(ParamRef {
            slot: self.parameters.slot(name, index)?,
            scale,
        })
    }

    pub fn push(&mut self, kind: GateKind, qubits: &[usize], angle: impl Into<Angle>) -> Result<(), SimulatorError> {
        if qubits.len() != kind.arity() {
            return Err(SimulatorError::BadGate(format!(
                "{kind:?} acts on {} qubits, got {}",
                kind.arity(),
                qubits.len()
            )));
        }
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.qubits) {
            return Err(SimulatorError::BadGate(format!(
                "qubit {q} outside a {}-qubit register",
                self.qubits
            )));
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(SimulatorError::BadGate(format!("{kind:?} on repeated qubit {}", qubits[0])));
        }
        let angle = angle.into();
        if let Angle::Param(r) = angle {
            if r.slot >= self.parameters.len() {
                return Err(SimulatorError::BadGate(format!("unknown parameter slot {}", r.slot)));
            }
            self.parameters.set_active(r.slot);
        }
        let mut pair = [qubits[0], 0];
        if qubits.len() == 2 {
            pair[1] = qubits[1];
        }
        self.gates.push(Gate {
            kind,
            qubits: pair,
            angle,
        });
        Ok(())
    }

    pub fn h(&mut self, q: usize) -> Result<(), SimulatorError> {
        self.push(GateKind::H, &[q], 0.0)
    }

    pub fn rx(&mut self, q: usize, angle: impl Into<Angle>) -> Result<(), SimulatorError> {
        self.push(GateKind::RX, &[q], angle)
    }

    pub fn ry(&mut self, q: usize, angle: impl Into<Angle>) -> Result<(), SimulatorError> {
        self.push(GateKind::RY, &[q], angle)
    }

    pub fn rz(&mut self, q: usize, angle: impl Into<Angle>) -> Result<(), SimulatorError> {
        self.push(GateKind::RZ, &[q], angle)
    }

    pub fn rzz(&mut self, a: usize, b: usize, angle: impl Into<Angle>) -> Result<(), SimulatorError> {
        self.push(GateKind::RZZ, &[a, b], angle)
    }

    /// Marks every slot as optimizable, referenced by a gate or not.
    pub fn activate_all_parameters(&mut self) {
        self.parameters.activate_all();
    }

    /// Binds a full slot vector after checking bounds.
    pub fn bind_flat(&self, values: &[f64]) -> Result<BoundCircuit, SimulatorError> {
        self.parameters.check(values)?;
        Ok(self.bind_unchecked(values))
    }

    /// Binds parameters given by group name.
    pub fn bind(&self, values: &BTreeMap<String, Vec<f64>>) -> Result<BoundCircuit, SimulatorError> {
        let flat = self.parameters.flatten(values)?;
        self.bind_flat(&flat)
    }

    pub(crate) fn bind_unchecked(&self, values: &[f64]) -> BoundCircuit {
        BoundCircuit {
            qubits: self.qubits,
            gates: self
                .gates
                .iter()
                .map(|g| Gate {
                    kind: g.kind,
                    qubits: g.qubits,
                    angle: g.angle.resolve(values),
                })
                .collect(),
        }
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }
}

/// Circuit with every angle resolved to a number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCircuit {
    pub qubits: usize,
    pub gates: Vec<BoundGate>,
}

impl BoundCircuit {
    pub fn new(qubits: usize) -> Self {
        Self {
            qubits,
            gates: Vec::new(),
        }
    }

    /// Unchecked literal gate, used by tests and hand-built circuits.
    pub fn gate(mut self, kind: GateKind, qubits: &[usize], angle: f64) -> Self {
        let mut pair = [qubits[0], 0];
        if qubits.len() > 1 {
            pair[1] = qubits[1];
        }
        self.gates.push(Gate {
            kind,
            qubits: pair,
            angle,
        });
        self
    }
}
