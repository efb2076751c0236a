//! Classical optimizers for circuit parameters and the initial-point
//! strategies that feed them.

mod genetic;
mod initializers;
mod local;
mod spsa;

pub use genetic::{GeneticAlgorithm, GeneticSettings};
pub use initializers::{initialize, Constant, Initializer, PerturbedConstant, UniformRandom};
pub use local::{LocalSettings, LocalTrustRegion};
pub use spsa::{Spsa, SpsaSchedule, SpsaSettings};

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizerError {
    #[error("evaluation budget must be at least 1")]
    BudgetZero,
    #[error("expected a {expected}-dimensional starting point, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("starting point component {index} = {value} outside [{lower}, {upper}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("unknown initialization strategy `{0}`")]
    UnknownStrategy(String),
    #[error("invalid settings: {0}")]
    InvalidSettings(String),
}

/// Black-box objective over a box. Every call is counted, and every
/// evaluated point must lie inside the bounds.
pub struct Objective<'a> {
    bounds: Vec<(f64, f64)>,
    f: Box<dyn Fn(&[f64]) -> f64 + Sync + 'a>,
    count: AtomicUsize,
}

impl fmt::Debug for Objective<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("bounds", &self.bounds)
            .field("evaluations", &self.evaluations())
            .finish()
    }
}

impl<'a> Objective<'a> {
    pub fn new(bounds: Vec<(f64, f64)>, f: impl Fn(&[f64]) -> f64 + Sync + 'a) -> Self {
        Self {
            bounds,
            f: Box::new(f),
            count: AtomicUsize::new(0),
        }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim(), "point has wrong dimension");
        for (i, (&v, &(lo, hi))) in x.iter().zip(&self.bounds).enumerate() {
            assert!(v >= lo && v <= hi, "component {i} = {v} outside [{lo}, {hi}]");
        }
        self.count.fetch_add(1, Ordering::Relaxed);
        (self.f)(x)
    }

    pub fn evaluations(&self) -> usize {
        self.count.load(Ordering::Relaxed)
    }

    pub fn clip(&self, x: &mut [f64]) {
        for (v, &(lo, hi)) in x.iter_mut().zip(&self.bounds) {
            *v = v.clamp(lo, hi);
        }
    }

    pub fn check_start(&self, x0: &[f64]) -> Result<(), OptimizerError> {
        if x0.len() != self.dim() {
            return Err(OptimizerError::DimensionMismatch {
                expected: self.dim(),
                actual: x0.len(),
            });
        }
        for (index, (&value, &(lower, upper))) in x0.iter().zip(&self.bounds).enumerate() {
            if !(value >= lower && value <= upper) {
                return Err(OptimizerError::OutOfBounds {
                    index,
                    value,
                    lower,
                    upper,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// Trust-region radius dropped below its final value.
    Converged,
    Budget,
    Stagnation,
    /// Fixed iteration or generation count reached.
    Completed,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Converged => "converged",
            Termination::Budget => "budget",
            Termination::Stagnation => "stagnation",
            Termination::Completed => "completed",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: usize,
    pub value: f64,
    /// Whether this step produced a new best value.
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_x: Vec<f64>,
    pub best_value: f64,
    pub evaluations: usize,
    pub trace: Vec<TraceEntry>,
    pub termination: Termination,
}

/// Keeps the best point seen and the trace.
pub(crate) struct Tracker {
    pub best_x: Vec<f64>,
    pub best_value: f64,
    pub trace: Vec<TraceEntry>,
}

impl Tracker {
    pub fn new(x: Vec<f64>, value: f64) -> Self {
        Self {
            best_x: x,
            best_value: value,
            trace: vec![TraceEntry {
                step: 0,
                value,
                accepted: true,
            }],
        }
    }

    /// Records a candidate; returns whether it became the new best.
    pub fn offer(&mut self, step: usize, x: &[f64], value: f64) -> bool {
        let accepted = value < self.best_value;
        if accepted {
            self.best_value = value;
            self.best_x = x.to_vec();
        }
        self.trace.push(TraceEntry { step, value, accepted });
        accepted
    }

    pub fn finish(self, objective: &Objective, termination: Termination) -> OptimizationResult {
        OptimizationResult {
            best_x: self.best_x,
            best_value: self.best_value,
            evaluations: objective.evaluations(),
            trace: self.trace,
            termination,
        }
    }
}

/// An optimizer plugin.
pub trait Optimizer: Send + Sync {
    fn name(&self) -> &str;

    fn optimize(&self, objective: &Objective, x0: &[f64], seed: u64) -> Result<OptimizationResult, OptimizerError>;
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_every_call() {
        let objective = Objective::new(vec![(-1.0, 1.0)], |x| x[0]);
        objective.evaluate(&[0.5]);
        objective.evaluate(&[1.0]);
        assert_eq!(objective.evaluations(), 2);
    }

    #[test]
    #[should_panic(expected = "outside")]
    fn rejects_out_of_bounds_points() {
        Objective::new(vec![(-1.0, 1.0)], |x| x[0]).evaluate(&[1.5]);
    }

    #[test]
    fn start_point_checks() {
        let objective = Objective::new(vec![(-1.0, 1.0); 2], |x| x[0]);
        assert!(objective.check_start(&[0.0, 0.0]).is_ok());
        assert!(matches!(objective.check_start(&[0.0]), Err(OptimizerError::DimensionMismatch { .. })));
        assert!(matches!(objective.check_start(&[0.0, 2.0]), Err(OptimizerError::OutOfBounds { index: 1, .. })));
    }
}
