use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{BoundCircuit, BoundGate, GateKind, SimulatorError};
use crate::encodings::{Bitstring, IsingModel};

/// Measurement counts keyed by outcome.
pub type Histogram = BTreeMap<Bitstring, usize>;

/// Amplitudes of an `m`-qubit register; qubit 0 is the least significant
/// bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩`.
    pub fn zero(qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self { qubits, amplitudes }
    }

    pub fn basis(qubits: usize, index: usize) -> Self {
        let mut state = Self::zero(qubits);
        state.amplitudes[0] = Complex64::new(0.0, 0.0);
        state.amplitudes[index] = Complex64::new(1.0, 0.0);
        state
    }

    /// Wraps raw amplitudes; their squared norm must be 1 within 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimulatorError> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(SimulatorError::BadState(format!("length {len} is not a power of two")));
        }
        let state = Self {
            qubits: len.trailing_zeros() as usize,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(SimulatorError::BadState(format!("squared norm {norm}")));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies `circuit` to `|0…0⟩`.
    pub fn simulate(circuit: &BoundCircuit) -> Self {
        let mut state = Self::zero(circuit.qubits);
        for gate in &circuit.gates {
            state.apply(gate);
        }
        state
    }

    pub fn apply(&mut self, gate: &BoundGate) {
        let q = gate.qubits[0];
        let theta = gate.angle;
        match gate.kind {
            GateKind::H => self.apply_single(q, |a, b| ((a + b) * FRAC_1_SQRT_2, (a - b) * FRAC_1_SQRT_2)),
            GateKind::RX => {
                let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                let mis = Complex64::new(0.0, -s);
                self.apply_single(q, |a, b| (a * c + b * mis, a * mis + b * c));
            }
            GateKind::RY => {
                let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                self.apply_single(q, |a, b| (a * c - b * s, a * s + b * c));
            }
            GateKind::RZ => {
                let phase = Complex64::from_polar(1.0, -theta / 2.0);
                let conj = phase.conj();
                self.apply_single(q, |a, b| (a * phase, b * conj));
            }
            GateKind::RZZ => {
                let mask = (1usize << q) | (1usize << gate.qubits[1]);
                let even = Complex64::from_polar(1.0, -theta / 2.0);
                let odd = even.conj();
                for (index, amp) in self.amplitudes.iter_mut().enumerate() {
                    *amp *= if (index & mask).count_ones() % 2 == 0 { even } else { odd };
                }
            }
        }
    }

    fn apply_single(&mut self, q: usize, f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64)) {
        let stride = 1usize << q;
        for block in (0..self.amplitudes.len()).step_by(stride << 1) {
            for i in block..block + stride {
                let (a, b) = f(self.amplitudes[i], self.amplitudes[i + stride]);
                self.amplitudes[i] = a;
                self.amplitudes[i + stride] = b;
            }
        }
    }

    /// `⟨ψ|H|ψ⟩` for a diagonal Hamiltonian given by its energies.
    pub fn expectation_diagonal(&self, energies: &[f64]) -> f64 {
        self.amplitudes
            .iter()
            .zip(energies)
            .map(|(a, e)| a.norm_sqr() * e)
            .sum()
    }

    /// Expected Ising energy, constant included.
    pub fn expectation(&self, model: &IsingModel) -> Result<f64, SimulatorError> {
        if model.num_spins() != self.qubits {
            return Err(SimulatorError::DimensionMismatch {
                expected: self.qubits,
                actual: model.num_spins(),
            });
        }
        Ok(self.expectation_diagonal(&model.diagonal()))
    }

    /// `shots` i.i.d. measurements in the computational basis.
    pub fn sample(&self, shots: usize, seed: u64) -> Result<Histogram, SimulatorError> {
        if shots == 0 {
            return Err(SimulatorError::NoShots);
        }
        let dist = WeightedIndex::new(self.probabilities())
            .map_err(|e| SimulatorError::BadState(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = vec![0usize; self.amplitudes.len()];
        for _ in 0..shots {
            counts[dist.sample(&mut rng)] += 1;
        }
        Ok(counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(i, c)| (Bitstring::new(i, self.qubits), c))
            .collect())
    }

    /// Most probable outcome; near-ties go to the smallest bitstring.
    pub fn most_likely(&self) -> Bitstring {
        most_likely(&self.probabilities(), self.qubits)
    }

    /// The `k` most probable outcomes, descending, ties by bitstring.
    pub fn top_k(&self, k: usize) -> Vec<(Bitstring, f64)> {
        top_k(&self.probabilities(), self.qubits, k)
    }
}

pub(crate) fn most_likely(probabilities: &[f64], qubits: usize) -> Bitstring {
    let mut best = 0;
    for (index, &p) in probabilities.iter().enumerate().skip(1) {
        if p > probabilities[best] + 1e-12 {
            best = index;
        }
    }
    Bitstring::new(best, qubits)
}

pub(crate) fn top_k(probabilities: &[f64], qubits: usize, k: usize) -> Vec<(Bitstring, f64)> {
    let mut order: Vec<usize> = (0..probabilities.len()).collect();
    order.sort_by(|&a, &b| probabilities[b].total_cmp(&probabilities[a]).then(a.cmp(&b)));
    order
        .into_iter()
        .take(k)
        .map(|i| (Bitstring::new(i, qubits), probabilities[i]))
        .collect()
}
