use serde::{Deserialize, Serialize};

use crate::config::FieldDescriptor;

use super::{Objective, OptimizationResult, Optimizer, OptimizerError, Termination, Tracker};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LocalSettings {
    /// Maximum objective evaluations.
    pub budget: usize,
    pub rho_begin: f64,
    pub rho_end: f64,
    /// Minimum total improvement over `2·dim + 1` accepted steps.
    pub stagnation_tol: f64,
}

impl Default for LocalSettings {
    fn default() -> Self {
        Self {
            budget: 1000,
            rho_begin: 0.5,
            rho_end: 1e-4,
            stagnation_tol: 1e-8,
        }
    }
}

impl LocalSettings {
    pub fn fields() -> Vec<FieldDescriptor> {
        let d = Self::default();
        vec![
            FieldDescriptor::integer("budget", "Evaluation budget", d.budget as i64).min(0.0),
            FieldDescriptor::number("rho_begin", "Initial trust radius", d.rho_begin).min(1e-12),
            FieldDescriptor::number("rho_end", "Final trust radius", d.rho_end).min(1e-12),
            FieldDescriptor::number("stagnation_tol", "Stagnation tolerance", d.stagnation_tol).min(0.0),
        ]
    }
}

/// Derivative-free descent on linear models interpolated over a simplex of
/// `dim + 1` points, with a trust region of radius `rho`.
///
/// Each iteration fits the linear model through the simplex, steps `rho`
/// along its projected steepest descent and swaps the new point into the
/// simplex. A failed step on a well-poised simplex halves `rho`; a failed
/// step on a stretched simplex rebuilds it around the best point first.
#[derive(Debug, Clone, Default)]
pub struct LocalTrustRegion {
    pub settings: LocalSettings,
}

impl LocalTrustRegion {
    pub fn new(settings: LocalSettings) -> Self {
        Self { settings }
    }
}

struct Run<'o, 'a> {
    objective: &'o Objective<'a>,
    budget: usize,
    tracker: Tracker,
    step: usize,
}

/// Out of evaluations.
struct Exhausted;

impl Run<'_, '_> {
    fn eval(&mut self, x: &[f64]) -> Result<f64, Exhausted> {
        if self.objective.evaluations() >= self.budget {
            return Err(Exhausted);
        }
        let value = self.objective.evaluate(x);
        self.step += 1;
        self.tracker.offer(self.step, x, value);
        Ok(value)
    }

    /// Axis-aligned simplex of radius `rho` around `center`, stepping away
    /// from the nearer bound.
    fn simplex(&mut self, center: &[f64], rho: f64) -> Result<Vec<(Vec<f64>, f64)>, Exhausted> {
        let mut vertices = Vec::with_capacity(center.len());
        for i in 0..center.len() {
            let (lo, hi) = self.objective.bounds()[i];
            let mut v = center.to_vec();
            v[i] = if center[i] + rho <= hi {
                center[i] + rho
            } else if center[i] - rho >= lo {
                center[i] - rho
            } else if hi - center[i] >= center[i] - lo {
                hi
            } else {
                lo
            };
            let f = self.eval(&v)?;
            vertices.push((v, f));
        }
        Ok(vertices)
    }
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting;
/// `None` when a pivot falls below `tiny`.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>, tiny: f64) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < tiny {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor != 0.0 {
                for k in col..n {
                    a[row][k] -= factor * a[col][k];
                }
                b[row] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

impl Optimizer for LocalTrustRegion {
    fn name(&self) -> &str {
        "local"
    }

    fn optimize(&self, objective: &Objective, x0: &[f64], _seed: u64) -> Result<OptimizationResult, OptimizerError> {
        let s = &self.settings;
        if s.budget == 0 {
            return Err(OptimizerError::BudgetZero);
        }
        if !(s.rho_begin > 0.0 && s.rho_end > 0.0 && s.rho_end <= s.rho_begin) {
            return Err(OptimizerError::InvalidSettings(format!(
                "need 0 < rho_end <= rho_begin, got {} and {}",
                s.rho_end, s.rho_begin
            )));
        }
        objective.check_start(x0)?;
        let start = objective.evaluations();
        let f0 = objective.evaluate(x0);
        let mut run = Run {
            objective,
            budget: start + s.budget,
            tracker: Tracker::new(x0.to_vec(), f0),
            step: 0,
        };
        let termination = descend(&mut run, s, x0.to_vec(), f0);
        Ok(run.tracker.finish(objective, termination))
    }
}

fn descend(run: &mut Run, s: &LocalSettings, x0: Vec<f64>, f0: f64) -> Termination {
    let n = x0.len();
    if n == 0 {
        return Termination::Converged;
    }
    let window = 2 * n + 1;
    let mut rho = s.rho_begin;
    let (mut best, mut f_best) = (x0, f0);
    let mut vertices = match run.simplex(&best, rho) {
        Ok(v) => v,
        Err(Exhausted) => return Termination::Budget,
    };
    let mut fresh = true;
    let mut gains: Vec<f64> = Vec::new();

    loop {
        // The simplex may hold a point better than the current centre.
        if let Some(i) = (0..n).min_by(|&i, &j| vertices[i].1.total_cmp(&vertices[j].1)) {
            if vertices[i].1 < f_best {
                std::mem::swap(&mut vertices[i].0, &mut best);
                std::mem::swap(&mut vertices[i].1, &mut f_best);
            }
        }

        let rows: Vec<Vec<f64>> = vertices
            .iter()
            .map(|(v, _)| v.iter().zip(&best).map(|(a, b)| a - b).collect())
            .collect();
        let rhs: Vec<f64> = vertices.iter().map(|(_, f)| f - f_best).collect();
        let Some(gradient) = solve(rows, rhs, 1e-12 * rho) else {
            match run.simplex(&best, rho) {
                Ok(v) => vertices = v,
                Err(Exhausted) => return Termination::Budget,
            }
            fresh = true;
            continue;
        };

        let was_fresh = fresh;
        let mut direction: Vec<f64> = gradient.iter().map(|g| -g).collect();
        for (i, d) in direction.iter_mut().enumerate() {
            let (lo, hi) = run.objective.bounds()[i];
            if (best[i] <= lo && *d < 0.0) || (best[i] >= hi && *d > 0.0) {
                *d = 0.0;
            }
        }
        let norm = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
        let mut improved = false;
        if norm > 0.0 && norm.is_finite() {
            let mut trial: Vec<f64> = best.iter().zip(&direction).map(|(x, d)| x + rho * d / norm).collect();
            run.objective.clip(&mut trial);
            if distance(&trial, &best) > 0.0 {
                let f_trial = match run.eval(&trial) {
                    Ok(f) => f,
                    Err(Exhausted) => return Termination::Budget,
                };
                // The trial replaces the simplex vertex farthest from it.
                let far = (0..n)
                    .max_by(|&i, &j| distance(&vertices[i].0, &trial).total_cmp(&distance(&vertices[j].0, &trial)))
                    .expect("nonempty simplex");
                if f_trial < f_best {
                    improved = true;
                    gains.push(f_best - f_trial);
                    vertices[far] = (std::mem::replace(&mut best, trial), f_best);
                    f_best = f_trial;
                    fresh = false;
                    if gains.len() >= window && gains[gains.len() - window..].iter().sum::<f64>() < s.stagnation_tol {
                        return Termination::Stagnation;
                    }
                } else if f_trial < vertices[far].1 {
                    vertices[far] = (trial, f_trial);
                    fresh = false;
                }
            }
        }
        if improved {
            let stretched = vertices.iter().any(|(v, _)| distance(v, &best) > 2.0 * rho);
            if stretched {
                match run.simplex(&best, rho) {
                    Ok(v) => vertices = v,
                    Err(Exhausted) => return Termination::Budget,
                }
                fresh = true;
            }
            continue;
        }
        if was_fresh {
            rho /= 2.0;
            if rho < s.rho_end {
                return Termination::Converged;
            }
        }
        match run.simplex(&best, rho) {
            Ok(v) => vertices = v,
            Err(Exhausted) => return Termination::Budget,
        }
        fresh = true;
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::{distance as dist, shifted, sphere};
    use super::*;

    fn optimizer(budget: usize) -> LocalTrustRegion {
        LocalTrustRegion::new(LocalSettings {
            budget,
            ..Default::default()
        })
    }

    #[test]
    fn sphere_from_one_one() {
        let objective = Objective::new(vec![(-5.0, 5.0); 2], sphere);
        let result = optimizer(200).optimize(&objective, &[1.0, 1.0], 0).unwrap();
        assert!(dist(&result.best_x, &[0.0, 0.0]) < 1e-3, "{result:?}");
        assert!(result.evaluations <= 200);
        assert_eq!(result.evaluations, objective.evaluations());
    }

    #[test]
    fn optimum_on_a_bound() {
        let target = [2.0, -1.0];
        let objective = Objective::new(vec![(0.0, 1.0); 2], shifted(&target));
        let result = optimizer(500).optimize(&objective, &[1.0, 0.0], 0).unwrap();
        assert!(result.best_value <= 2.0);
        assert!(dist(&result.best_x, &[1.0, 0.0]) < 1e-9);
    }

    #[test]
    fn budget_one_and_zero() {
        let objective = Objective::new(vec![(-1.0, 1.0)], sphere);
        let result = optimizer(1).optimize(&objective, &[0.5], 0).unwrap();
        assert_eq!(result.evaluations, 1);
        assert_eq!(result.best_x, vec![0.5]);
        assert_eq!(result.termination, Termination::Budget);
        assert_eq!(optimizer(0).optimize(&objective, &[0.5], 0), Err(OptimizerError::BudgetZero));
    }

    #[test]
    fn trace_best_matches_result() {
        let objective = Objective::new(vec![(-3.0, 3.0); 3], shifted(&[0.3, -0.2, 1.1]));
        let result = optimizer(400).optimize(&objective, &[-1.0, 1.0, 0.0], 0).unwrap();
        let best_trace = result
            .trace
            .iter()
            .filter(|t| t.accepted)
            .map(|t| t.value)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(best_trace, result.best_value);
    }

    #[test]
    fn solver_handles_singular_systems() {
        assert!(solve(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 2.0], 1e-12).is_none());
        let x = solve(vec![vec![2.0, 1.0], vec![1.0, 3.0]], vec![3.0, 5.0], 1e-12).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12 && (x[1] - 1.4).abs() < 1e-12);
    }
}
