use serde::{Deserialize, Serialize};

use super::{BoundCircuit, Histogram, SimulatorError, Statevector};
use crate::config::FieldDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capabilities {
    pub max_qubits: usize,
    pub max_shots: usize,
    /// Whether the backend can report the exact output distribution.
    pub exact: bool,
}

/// Execution backend for bound circuits.
///
/// Remote providers only need `sample`; the default `expectation` estimates
/// from shots. Local simulators override it with exact values.
pub trait Platform: Send + Sync {
    fn name(&self) -> &str;

    fn capabilities(&self) -> Capabilities;

    fn sample(&self, circuit: &BoundCircuit, shots: usize, seed: u64) -> Result<Histogram, SimulatorError>;

    /// Exact outcome probabilities indexed by basis state, if available.
    fn distribution(&self, _circuit: &BoundCircuit) -> Result<Option<Vec<f64>>, SimulatorError> {
        Ok(None)
    }

    /// Expected value of a diagonal observable given by its energies.
    fn expectation(&self, circuit: &BoundCircuit, energies: &[f64], seed: u64) -> Result<f64, SimulatorError> {
        let shots = self.capabilities().max_shots.min(4096);
        let histogram = self.sample(circuit, shots, seed)?;
        Ok(histogram
            .iter()
            .map(|(bits, &count)| energies[bits.index()] * count as f64)
            .sum::<f64>()
            / shots as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectationMode {
    #[default]
    Exact,
    Shots,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StatevectorSettings {
    pub method: String,
    pub precision: String,
    pub max_qubits: usize,
    pub max_shots: usize,
    pub expectation: ExpectationMode,
    /// Shots per expectation estimate when `expectation = "shots"`.
    pub expectation_shots: usize,
}

impl Default for StatevectorSettings {
    fn default() -> Self {
        Self {
            method: "statevector".into(),
            precision: "double".into(),
            max_qubits: 22,
            max_shots: 1_000_000,
            expectation: ExpectationMode::Exact,
            expectation_shots: 4096,
        }
    }
}

impl StatevectorSettings {
    pub fn fields() -> Vec<FieldDescriptor> {
        let d = Self::default();
        vec![
            FieldDescriptor::choice("method", "Simulation method", &["statevector"], &d.method),
            FieldDescriptor::choice("precision", "Floating point precision", &["double"], &d.precision),
            FieldDescriptor::integer("max_qubits", "Maximum number of qubits", d.max_qubits as i64).range(1.0, 30.0),
            FieldDescriptor::integer("max_shots", "Maximum number of shots", d.max_shots as i64).range(1.0, 1e9),
            FieldDescriptor::choice("expectation", "Expectation values", &["exact", "shots"], "exact"),
            FieldDescriptor::integer("expectation_shots", "Shots per expectation estimate", d.expectation_shots as i64)
                .range(1.0, 1e9),
        ]
    }
}

/// Exact double-precision statevector simulation.
#[derive(Debug, Clone, Default)]
pub struct StatevectorPlatform {
    pub settings: StatevectorSettings,
}

impl StatevectorPlatform {
    pub fn new(settings: StatevectorSettings) -> Self {
        Self { settings }
    }

    pub fn run(&self, circuit: &BoundCircuit) -> Result<Statevector, SimulatorError> {
        if circuit.qubits > self.settings.max_qubits {
            return Err(SimulatorError::TooManyQubits {
                qubits: circuit.qubits,
                cap: self.settings.max_qubits,
            });
        }
        Ok(Statevector::simulate(circuit))
    }
}

impl Platform for StatevectorPlatform {
    fn name(&self) -> &str {
        "statevector"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            max_qubits: self.settings.max_qubits,
            max_shots: self.settings.max_shots,
            exact: true,
        }
    }

    fn sample(&self, circuit: &BoundCircuit, shots: usize, seed: u64) -> Result<Histogram, SimulatorError> {
        if shots > self.settings.max_shots {
            return Err(SimulatorError::TooManyShots {
                shots,
                cap: self.settings.max_shots,
            });
        }
        self.run(circuit)?.sample(shots, seed)
    }

    fn distribution(&self, circuit: &BoundCircuit) -> Result<Option<Vec<f64>>, SimulatorError> {
        Ok(Some(self.run(circuit)?.probabilities()))
    }

    fn expectation(&self, circuit: &BoundCircuit, energies: &[f64], seed: u64) -> Result<f64, SimulatorError> {
        let state = self.run(circuit)?;
        match self.settings.expectation {
            ExpectationMode::Exact => Ok(state.expectation_diagonal(energies)),
            ExpectationMode::Shots => {
                let shots = self.settings.expectation_shots;
                let histogram = state.sample(shots, seed)?;
                Ok(histogram
                    .iter()
                    .map(|(bits, &count)| energies[bits.index()] * count as f64)
                    .sum::<f64>()
                    / shots as f64)
            }
        }
    }
}
