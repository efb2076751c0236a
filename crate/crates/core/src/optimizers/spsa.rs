use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Objective, OptimizationResult, Optimizer, OptimizerError, Termination, Tracker};
use crate::config::FieldDescriptor;

/// Gain sequences `a_k = a/(k+1+A)^alpha` and `c_k = c/(k+1)^gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpsaSchedule {
    pub a: f64,
    pub c: f64,
    #[serde(rename = "A")]
    pub big_a: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for SpsaSchedule {
    fn default() -> Self {
        Self {
            a: 0.2,
            c: 0.1,
            big_a: 10.0,
            alpha: 0.602,
            gamma: 0.101,
        }
    }
}

impl SpsaSchedule {
    pub fn validate(&self) -> Result<(), OptimizerError> {
        let bad = |m: String| Err(OptimizerError::InvalidSettings(m));
        if !(self.a > 0.0 && self.c > 0.0) {
            return bad(format!("a and c must be positive, got {} and {}", self.a, self.c));
        }
        if !(self.big_a >= 0.0) {
            return bad(format!("A must be non-negative, got {}", self.big_a));
        }
        if !(self.alpha > 0.5 && self.alpha <= 1.0) {
            return bad(format!("alpha must lie in (0.5, 1], got {}", self.alpha));
        }
        // Sum of a_k diverges while sum of (a_k/c_k)^2 converges.
        if !(self.gamma > 0.0 && self.alpha - self.gamma > 0.5) {
            return bad(format!(
                "need gamma > 0 and alpha - gamma > 1/2, got alpha {} and gamma {}",
                self.alpha, self.gamma
            ));
        }
        Ok(())
    }

    pub fn a_k(&self, k: usize) -> f64 {
        self.a / (k as f64 + 1.0 + self.big_a).powf(self.alpha)
    }

    pub fn c_k(&self, k: usize) -> f64 {
        self.c / (k as f64 + 1.0).powf(self.gamma)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpsaSettings {
    #[serde(flatten)]
    pub schedule: SpsaSchedule,
    pub iterations: usize,
    /// Evaluate the final iterate once more after the last step.
    pub final_evaluation: bool,
}

impl Default for SpsaSettings {
    fn default() -> Self {
        Self {
            schedule: SpsaSchedule::default(),
            iterations: 300,
            final_evaluation: true,
        }
    }
}

impl SpsaSettings {
    pub fn fields() -> Vec<FieldDescriptor> {
        let d = Self::default();
        let s = d.schedule;
        vec![
            FieldDescriptor::number("a", "Step scale a", s.a).min(1e-12),
            FieldDescriptor::number("c", "Perturbation scale c", s.c).min(1e-12),
            FieldDescriptor::number("A", "Stability offset A", s.big_a).min(0.0),
            FieldDescriptor::number("alpha", "Step decay exponent", s.alpha).range(0.5, 1.0),
            FieldDescriptor::number("gamma", "Perturbation decay exponent", s.gamma).range(1e-12, 0.5),
            FieldDescriptor::integer("iterations", "Iterations", d.iterations as i64).min(1.0),
            FieldDescriptor::boolean("final_evaluation", "Evaluate the final iterate", d.final_evaluation),
        ]
    }
}

/// Simultaneous perturbation stochastic approximation: two evaluations per
/// iteration estimate the full gradient along a random Rademacher direction.
#[derive(Debug, Clone, Default)]
pub struct Spsa {
    pub settings: SpsaSettings,
}

impl Spsa {
    pub fn new(settings: SpsaSettings) -> Self {
        Self { settings }
    }
}

impl Optimizer for Spsa {
    fn name(&self) -> &str {
        "spsa"
    }

    fn optimize(&self, objective: &Objective, x0: &[f64], seed: u64) -> Result<OptimizationResult, OptimizerError> {
        let s = &self.settings;
        s.schedule.validate()?;
        objective.check_start(x0)?;
        let need_final = s.final_evaluation || s.iterations == 0;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut theta = x0.to_vec();
        let mut tracker: Option<Tracker> = None;
        let mut step = 0;
        let mut offer = |x: &[f64], value: f64| {
            match tracker.as_mut() {
                None => tracker = Some(Tracker::new(x.to_vec(), value)),
                Some(t) => {
                    step += 1;
                    t.offer(step, x, value);
                }
            };
        };

        for k in 0..s.iterations {
            let c_k = s.schedule.c_k(k);
            let delta: Vec<f64> = (0..theta.len())
                .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
                .collect();
            let mut plus: Vec<f64> = theta.iter().zip(&delta).map(|(t, d)| t + c_k * d).collect();
            let mut minus: Vec<f64> = theta.iter().zip(&delta).map(|(t, d)| t - c_k * d).collect();
            objective.clip(&mut plus);
            objective.clip(&mut minus);
            let f_plus = objective.evaluate(&plus);
            let f_minus = objective.evaluate(&minus);
            offer(&plus, f_plus);
            offer(&minus, f_minus);

            let a_k = s.schedule.a_k(k);
            for i in 0..theta.len() {
                // Clipping can shrink the perturbation; divide by what was applied.
                let spread = plus[i] - minus[i];
                if spread != 0.0 {
                    theta[i] -= a_k * (f_plus - f_minus) / spread;
                }
            }
            objective.clip(&mut theta);
        }

        if need_final {
            let value = objective.evaluate(&theta);
            offer(&theta, value);
        }
        let termination = Termination::Completed;
        Ok(tracker.expect("at least one evaluation").finish(objective, termination))
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::{distance, shifted};
    use super::*;

    #[test]
    fn two_evaluations_per_iteration() {
        for (iterations, final_evaluation, expected) in [(10, true, 21), (10, false, 20), (1, true, 3)] {
            let objective = Objective::new(vec![(-1.0, 1.0); 3], shifted(&[0.1, 0.2, 0.3]));
            let spsa = Spsa::new(SpsaSettings {
                iterations,
                final_evaluation,
                ..Default::default()
            });
            let result = spsa.optimize(&objective, &[0.0; 3], 7).unwrap();
            assert_eq!(result.evaluations, expected);
            assert_eq!(objective.evaluations(), expected);
        }
    }

    #[test]
    fn c_k_strictly_decreasing() {
        let schedule = SpsaSchedule::default();
        for k in 0..1000 {
            assert!(schedule.c_k(k + 1) < schedule.c_k(k));
            assert!(schedule.a_k(k + 1) < schedule.a_k(k));
            assert!(schedule.a_k(k) > 0.0);
        }
    }

    #[test]
    fn schedule_validity_region() {
        assert!(SpsaSchedule::default().validate().is_ok());
        assert!(SpsaSchedule { alpha: 1.0, gamma: 1.0 / 6.0, ..Default::default() }.validate().is_ok());
        for (alpha, gamma) in [(0.5, 0.0), (1.01, 0.101), (0.602, 0.102), (0.602, 0.0)] {
            let schedule = SpsaSchedule {
                alpha,
                gamma,
                ..Default::default()
            };
            assert!(schedule.validate().is_err(), "{alpha} {gamma}");
        }
    }

    #[test]
    fn reproducible_traces() {
        let run = |seed| {
            let objective = Objective::new(vec![(-2.0, 2.0); 2], shifted(&[0.5, -0.5]));
            Spsa::default().optimize(&objective, &[0.0, 0.0], seed).unwrap()
        };
        assert_eq!(run(3), run(3));
        assert_ne!(run(3).trace, run(4).trace);
    }

    #[test]
    fn stays_inside_bounds() {
        // The objective panics on any out-of-bounds point.
        let objective = Objective::new(vec![(0.0, 1.0); 4], shifted(&[5.0, -5.0, 0.5, 2.0]));
        let result = Spsa::default().optimize(&objective, &[0.0, 1.0, 0.5, 1.0], 1).unwrap();
        assert!(distance(&result.best_x, &[1.0, 0.0, 0.5, 1.0]) < 0.2);
    }
}
