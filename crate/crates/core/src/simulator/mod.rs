//! Parametric circuits over the gate set `{H, RX, RY, RZ, RZZ}` and an exact
//! statevector backend.
//!
//! Conventions: `|0⟩` is the `σ^z = +1` eigenstate, `RX(θ) = exp(−iθX/2)`,
//! `RY(θ) = exp(−iθY/2)`, `RZ(θ) = exp(−iθZ/2)` and
//! `RZZ(θ) = exp(−iθ Z⊗Z/2)`. Qubit 0 is the least significant bit of a
//! basis-state index.

mod circuit;
mod platform;
mod statevector;

pub use circuit::{
    Angle, BoundCircuit, BoundGate, Gate, GateKind, ParamRef, ParameterGroup, ParameterTable,
    ParametricCircuit,
};
pub use platform::{Capabilities, ExpectationMode, Platform, StatevectorPlatform, StatevectorSettings};
pub use statevector::{Histogram, Statevector};
pub(crate) use statevector::{most_likely, top_k};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulatorError {
    #[error("parameter {name}[{index}] has no value")]
    MissingParameter { name: String, index: usize },
    #[error("parameter {name}[{index}] = {value} outside [{lower}, {upper}]")]
    OutOfBounds {
        name: String,
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("parameter `{0}` declared twice")]
    DuplicateParameter(String),
    #[error("parameter `{name}` has empty bounds [{lower}, {upper}]")]
    InvalidBounds { name: String, lower: f64, upper: f64 },
    #[error("expected {expected} parameter values, got {actual}")]
    ParameterCount { expected: usize, actual: usize },
    #[error("invalid gate: {0}")]
    BadGate(String),
    #[error("invalid state: {0}")]
    BadState(String),
    #[error("model has {actual} spins but the register has {expected} qubits")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("at least one shot is required")]
    NoShots,
    #[error("{qubits} qubits exceed the simulator cap of {cap}")]
    TooManyQubits { qubits: usize, cap: usize },
    #[error("{shots} shots exceed the platform cap of {cap}")]
    TooManyShots { shots: usize, cap: usize },
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::f64::consts::{FRAC_PI_4, PI};

    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::encodings::{maxcut_to_ising, Bitstring, IsingModel, MaxCutInstance};

    #[test]
    fn hadamard_on_one_qubit() {
        let state = Statevector::simulate(&BoundCircuit::new(1).gate(GateKind::H, &[0], 0.0));
        for a in state.amplitudes() {
            assert!((a.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15 && a.im == 0.0);
        }
    }

    #[test]
    fn rzz_zero_is_identity() {
        let base = BoundCircuit::new(2)
            .gate(GateKind::H, &[0], 0.0)
            .gate(GateKind::RY, &[1], 0.7);
        let with = base.clone().gate(GateKind::RZZ, &[0, 1], 0.0);
        assert_eq!(Statevector::simulate(&base), Statevector::simulate(&with));
    }

    #[test]
    fn rz_phases_follow_the_z_eigenvalue() {
        let state = Statevector::simulate(
            &BoundCircuit::new(1)
                .gate(GateKind::H, &[0], 0.0)
                .gate(GateKind::RZ, &[0], 0.6),
        );
        let a = state.amplitudes();
        // |0⟩ picks up e^{-iθ/2}, |1⟩ picks up e^{+iθ/2}.
        assert!((a[0].arg() + 0.3).abs() < 1e-12);
        assert!((a[1].arg() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn qubit_zero_is_the_low_bit() {
        let state = Statevector::simulate(&BoundCircuit::new(2).gate(GateKind::RX, &[0], PI));
        assert!((state.probabilities()[1] - 1.0).abs() < 1e-12);
        assert_eq!(state.most_likely().to_string(), "01");
    }

    #[test]
    fn bind_checks_names_and_bounds() {
        let mut table = ParameterTable::new();
        table.declare("gamma", 1, -PI, PI).unwrap();
        table.declare("beta", 1, 0.0, PI).unwrap();
        let mut circuit = ParametricCircuit::with_parameters(1, table);
        let g = circuit.param("gamma", 0, 2.0).unwrap();
        let b = circuit.param("beta", 0, 2.0).unwrap();
        circuit.rz(0, g).unwrap();
        circuit.rx(0, b).unwrap();

        let ok = BTreeMap::from([("gamma".to_string(), vec![0.5]), ("beta".to_string(), vec![0.3])]);
        let bound = circuit.bind(&ok).unwrap();
        assert_eq!(bound.gates[0].angle, 1.0);
        assert_eq!(bound.gates[1].angle, 0.6);

        let missing = BTreeMap::from([("gamma".to_string(), vec![0.5])]);
        assert!(matches!(circuit.bind(&missing), Err(SimulatorError::MissingParameter { .. })));

        let out = BTreeMap::from([("gamma".to_string(), vec![0.5]), ("beta".to_string(), vec![4.0])]);
        assert!(matches!(circuit.bind(&out), Err(SimulatorError::OutOfBounds { .. })));
    }

    #[test]
    fn rejects_bad_gates() {
        let mut circuit = ParametricCircuit::new(2);
        assert!(circuit.rzz(0, 0, 1.0).is_err());
        assert!(circuit.rx(2, 1.0).is_err());
        assert!(circuit.push(GateKind::RZZ, &[0], 1.0).is_err());
    }

    #[test]
    fn expectation_of_basis_and_uniform_states() {
        let graph = MaxCutInstance::new(2, &[(0, 1)]).unwrap();
        let model = maxcut_to_ising(&graph);
        let zero = Statevector::zero(2);
        assert_eq!(zero.expectation(&model).unwrap(), model.evaluate(&[1, 1]).unwrap());

        let mut field = IsingModel::zeros(1);
        field.set_field(0, 1.0);
        let plus = Statevector::simulate(&BoundCircuit::new(1).gate(GateKind::H, &[0], 0.0));
        assert!(plus.expectation(&field).unwrap().abs() < 1e-15);
        assert!(matches!(
            plus.expectation(&model),
            Err(SimulatorError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sampling_basis_state_and_reproducibility() {
        let state = Statevector::basis(2, 1);
        let hist = state.sample(100, 3).unwrap();
        assert_eq!(hist.len(), 1);
        assert_eq!(hist[&"01".parse::<Bitstring>().unwrap()], 100);
        assert!(matches!(state.sample(0, 3), Err(SimulatorError::NoShots)));

        let plus = Statevector::simulate(&BoundCircuit::new(3).gate(GateKind::H, &[0], 0.0).gate(GateKind::H, &[2], 0.0));
        assert_eq!(plus.sample(1000, 9).unwrap(), plus.sample(1000, 9).unwrap());
    }

    #[test]
    fn uniform_sampling_within_three_sigma() {
        let plus = Statevector::simulate(&BoundCircuit::new(1).gate(GateKind::H, &[0], 0.0));
        let shots = 100_000;
        let hist = plus.sample(shots, 11).unwrap();
        let sigma = (shots as f64 * 0.25).sqrt();
        for count in hist.values() {
            assert!((*count as f64 - 50_000.0).abs() < 3.0 * sigma);
        }
    }

    #[test]
    fn most_likely_tie_breaks_low() {
        let state = Statevector::from_amplitudes(vec![Complex64::new(0.6, 0.0), Complex64::new(0.8, 0.0)]).unwrap();
        assert_eq!(state.most_likely().to_string(), "1");
        let mut uniform = BoundCircuit::new(3);
        for q in 0..3 {
            uniform = uniform.gate(GateKind::H, &[q], 0.0);
        }
        assert_eq!(Statevector::simulate(&uniform).most_likely().to_string(), "000");
    }

    #[test]
    fn inverse_gates_restore_the_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let kinds = [GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::RZZ];
        let mut circuit = BoundCircuit::new(3);
        for q in 0..3 {
            circuit = circuit.gate(GateKind::H, &[q], 0.0).gate(GateKind::RY, &[q], 0.3 * q as f64);
        }
        let before = Statevector::simulate(&circuit);
        for _ in 0..20 {
            let kind = kinds[rng.random_range(0..4)];
            let theta = rng.random_range(-PI..PI);
            let q = rng.random_range(0..3);
            let qubits = [q, (q + 1) % 3];
            let mut state = before.clone();
            state.apply(&Gate { kind, qubits, angle: theta });
            state.apply(&Gate { kind, qubits, angle: -theta });
            for (a, b) in state.amplitudes().iter().zip(before.amplitudes()) {
                assert!((a - b).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn platform_caps_and_exact_expectation() {
        let platform = StatevectorPlatform::new(StatevectorSettings {
            max_qubits: 2,
            ..Default::default()
        });
        let circuit = BoundCircuit::new(1).gate(GateKind::RX, &[0], FRAC_PI_4);
        let diag = vec![1.0, -1.0];
        let exact = platform.expectation(&circuit, &diag, 0).unwrap();
        assert!((exact - FRAC_PI_4.cos()).abs() < 1e-12);
        assert!(platform.run(&BoundCircuit::new(3)).is_err());
        assert!(platform.sample(&circuit, 2_000_000, 0).is_err());

        let shots = StatevectorPlatform::new(StatevectorSettings {
            expectation: ExpectationMode::Shots,
            expectation_shots: 100_000,
            ..Default::default()
        });
        let estimate = shots.expectation(&circuit, &diag, 1).unwrap();
        assert!((estimate - exact).abs() < 0.02);
    }
}
