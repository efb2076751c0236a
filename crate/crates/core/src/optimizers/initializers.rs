use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::OptimizerError;

/// Produces a starting point inside the given bounds.
pub trait Initializer: Send + Sync {
    fn name(&self) -> &str;

    fn initialize(&self, bounds: &[(f64, f64)], seed: u64) -> Vec<f64>;
}

fn sample(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

/// Uniform in `[lower, upper)` per component.
#[derive(Debug, Clone, Default)]
pub struct UniformRandom;

impl Initializer for UniformRandom {
    fn name(&self) -> &str {
        "uniform-random"
    }

    fn initialize(&self, bounds: &[(f64, f64)], seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        bounds.iter().map(|&(lo, hi)| sample(&mut rng, lo, hi)).collect()
    }
}

/// Every component at `value` (clamped into bounds), or at the midpoint of
/// its bounds when `value` is `None`.
#[derive(Debug, Clone, Default)]
pub struct Constant {
    pub value: Option<f64>,
}

impl Constant {
    fn point(&self, bounds: &[(f64, f64)]) -> Vec<f64> {
        bounds
            .iter()
            .map(|&(lo, hi)| match self.value {
                Some(v) => v.clamp(lo, hi),
                None => (lo + hi) / 2.0,
            })
            .collect()
    }
}

impl Initializer for Constant {
    fn name(&self) -> &str {
        "constant"
    }

    fn initialize(&self, bounds: &[(f64, f64)], _seed: u64) -> Vec<f64> {
        self.point(bounds)
    }
}

/// `Constant` plus uniform noise in `[−width/2, width/2)`, clamped.
#[derive(Debug, Clone)]
pub struct PerturbedConstant {
    pub base: Constant,
    pub width: f64,
}

impl Default for PerturbedConstant {
    fn default() -> Self {
        Self {
            base: Constant::default(),
            width: 0.1,
        }
    }
}

impl Initializer for PerturbedConstant {
    fn name(&self) -> &str {
        "perturbed-constant"
    }

    fn initialize(&self, bounds: &[(f64, f64)], seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let half = self.width / 2.0;
        self.base
            .point(bounds)
            .into_iter()
            .zip(bounds)
            .map(|(v, &(lo, hi))| {
                let noise = if half > 0.0 { sample(&mut rng, -half, half) } else { 0.0 };
                (v + noise).clamp(lo, hi)
            })
            .collect()
    }
}

/// Built-in strategy by name, with default settings.
pub fn initialize(strategy: &str, bounds: &[(f64, f64)], seed: u64) -> Result<Vec<f64>, OptimizerError> {
    let init: Box<dyn Initializer> = match strategy {
        "uniform-random" => Box::new(UniformRandom),
        "constant" => Box::new(Constant::default()),
        "perturbed-constant" => Box::new(PerturbedConstant::default()),
        other => return Err(OptimizerError::UnknownStrategy(other.into())),
    };
    Ok(init.initialize(bounds, seed))
}
