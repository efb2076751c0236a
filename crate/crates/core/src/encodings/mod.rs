//! Problem forms that sit between a domain problem and the quantum circuit:
//! minimum cost exact cover, QUBO, Ising and MaxCut, together with the
//! reductions that connect them.
//!
//! Spin convention used throughout the crate: a binary variable `x` and a
//! spin `ω` are related by `x = (ω + 1) / 2`, so `ω = +1` means `x = 1`.
//! The simulator measures `|0⟩` as the `σ^z = +1` eigenstate, therefore a
//! measured bit `0` on qubit `j` corresponds to `ω_j = +1` and `x_j = 1`.

mod bitstring;
pub mod graphs;
mod ising;
mod maxcut;
mod mcec;
mod qubo;

pub use bitstring::Bitstring;
pub use ising::{
    brute_force_ground_state, energy_extremes, mcec_to_ising_direct, qubo_to_ising, Extremes,
    GroundState, IsingModel, DEFAULT_BRUTE_FORCE_CAP,
};
pub use maxcut::{maxcut_to_ising, MaxCutInstance};
pub use mcec::McecInstance;
pub use qubo::{mcec_to_qubo, Penalty, QuboInstance};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncodingError {
    #[error("penalty factor must be positive, got {0}")]
    InvalidPenalty(f64),
    #[error("spin {index} has value {value}, expected -1 or +1")]
    BadSpin { index: usize, value: i8 },
    #[error("{m} variables exceed the brute-force cap of {cap}")]
    TooLarge { m: usize, cap: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
