//! Variational quantum optimization: crew pairing and MaxCut problems,
//! reductions to Ising form, QAOA-family circuits on a statevector
//! simulator, classical optimizers and an experiment pipeline.

pub mod acp;
pub mod ansatze;
pub mod cli;
pub mod config;
pub mod encodings;
pub mod optimizers;
pub mod pipeline;
pub mod plugins;
pub mod problem;
pub mod simulator;

pub use plugins::builtin_registry;
