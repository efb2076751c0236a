use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Objective, OptimizationResult, Optimizer, OptimizerError, Termination, Tracker};
use crate::config::FieldDescriptor;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneticSettings {
    pub population: usize,
    pub generations: usize,
    pub tournament: usize,
    pub crossover_rate: f64,
    /// Per-gene mutation probability; `None` means `1/dim`.
    #[serde(serialize_with = "auto_out", deserialize_with = "auto_in")]
    pub mutation_rate: Option<f64>,
    /// Mutation standard deviation as a fraction of each bound width.
    pub sigma_fraction: f64,
    pub elitism: usize,
    /// Put the starting point into the first population.
    pub seed_with_initial: bool,
}

impl Default for GeneticSettings {
    fn default() -> Self {
        Self {
            population: 40,
            generations: 60,
            tournament: 3,
            crossover_rate: 0.9,
            mutation_rate: None,
            sigma_fraction: 0.05,
            elitism: 1,
            seed_with_initial: true,
        }
    }
}

fn auto_out<S: Serializer>(value: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.serialize_f64(*v),
        None => s.serialize_str("auto"),
    }
}

fn auto_in<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Number(v) => Ok(Some(v)),
        Raw::Text(t) if t == "auto" => Ok(None),
        Raw::Text(t) => Err(serde::de::Error::custom(format!("expected a number or \"auto\", got `{t}`"))),
    }
}

impl GeneticSettings {
    pub fn fields() -> Vec<FieldDescriptor> {
        let d = Self::default();
        vec![
            FieldDescriptor::integer("population", "Population size", d.population as i64).min(2.0),
            FieldDescriptor::integer("generations", "Generations", d.generations as i64).min(0.0),
            FieldDescriptor::integer("tournament", "Tournament size", d.tournament as i64).min(1.0),
            FieldDescriptor::number("crossover_rate", "Crossover rate", d.crossover_rate).range(0.0, 1.0),
            FieldDescriptor::number_or_auto("mutation_rate", "Per-gene mutation rate")
                .range(0.0, 1.0)
                .help("`auto` is 1/dimension"),
            FieldDescriptor::number("sigma_fraction", "Mutation sigma (fraction of bound width)", d.sigma_fraction)
                .min(0.0),
            FieldDescriptor::integer("elitism", "Elite chromosomes kept", d.elitism as i64).min(0.0),
            FieldDescriptor::boolean("seed_with_initial", "Include the initial point", d.seed_with_initial),
        ]
    }

    pub fn validate(&self) -> Result<(), OptimizerError> {
        let bad = |m: String| Err(OptimizerError::InvalidSettings(m));
        if self.population < 2 {
            return bad(format!("population must be at least 2, got {}", self.population));
        }
        if self.elitism >= self.population {
            return bad(format!("elitism {} must be below the population {}", self.elitism, self.population));
        }
        if self.tournament == 0 {
            return bad("tournament size must be at least 1".into());
        }
        let rate = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(OptimizerError::InvalidSettings(format!("{name} must lie in [0, 1], got {v}")))
            }
        };
        rate("crossover_rate", self.crossover_rate)?;
        if let Some(m) = self.mutation_rate {
            rate("mutation_rate", m)?;
        }
        if !(self.sigma_fraction >= 0.0) {
            return bad(format!("sigma_fraction must be non-negative, got {}", self.sigma_fraction));
        }
        Ok(())
    }
}

/// Real-coded genetic algorithm: tournament selection, uniform crossover,
/// Gaussian per-gene mutation and elitism. Lower objective is fitter.
#[derive(Debug, Clone, Default)]
pub struct GeneticAlgorithm {
    pub settings: GeneticSettings,
}

impl GeneticAlgorithm {
    pub fn new(settings: GeneticSettings) -> Self {
        Self { settings }
    }
}

fn evaluate_all(objective: &Objective, population: &[Vec<f64>]) -> Vec<f64> {
    population.par_iter().map(|x| objective.evaluate(x)).collect()
}

/// Population indices ordered best first; ties keep the lower index.
fn ranking(fitness: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitness.len()).collect();
    order.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]));
    order
}

struct Breeder<'a> {
    settings: &'a GeneticSettings,
    bounds: &'a [(f64, f64)],
    mutation_rate: f64,
}

impl Breeder<'_> {
    fn tournament(&self, fitness: &[f64], rng: &mut ChaCha8Rng) -> usize {
        let mut winner = rng.random_range(0..fitness.len());
        for _ in 1..self.settings.tournament {
            let challenger = rng.random_range(0..fitness.len());
            if fitness[challenger] < fitness[winner] || (fitness[challenger] == fitness[winner] && challenger < winner) {
                winner = challenger;
            }
        }
        winner
    }

    fn child(&self, population: &[Vec<f64>], fitness: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
        let first = &population[self.tournament(fitness, rng)];
        let second = &population[self.tournament(fitness, rng)];
        let mut child = if rng.random_bool(self.settings.crossover_rate) {
            first
                .iter()
                .zip(second)
                .map(|(&a, &b)| if rng.random_bool(0.5) { a } else { b })
                .collect()
        } else {
            first.clone()
        };
        for (gene, &(lo, hi)) in child.iter_mut().zip(self.bounds) {
            if rng.random_bool(self.mutation_rate) {
                let sigma = self.settings.sigma_fraction * (hi - lo);
                if sigma > 0.0 {
                    let noise = Normal::new(0.0, sigma).expect("positive sigma").sample(rng);
                    *gene = (*gene + noise).clamp(lo, hi);
                }
            }
        }
        child
    }

    /// Next population: the elites, ranked, followed by offspring.
    fn next_generation(&self, population: &[Vec<f64>], fitness: &[f64], rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
        let mut next: Vec<Vec<f64>> = ranking(fitness)
            .into_iter()
            .take(self.settings.elitism)
            .map(|i| population[i].clone())
            .collect();
        while next.len() < population.len() {
            next.push(self.child(population, fitness, rng));
        }
        next
    }
}

impl Optimizer for GeneticAlgorithm {
    fn name(&self) -> &str {
        "genetic"
    }

    fn optimize(&self, objective: &Objective, x0: &[f64], seed: u64) -> Result<OptimizationResult, OptimizerError> {
        let s = &self.settings;
        s.validate()?;
        objective.check_start(x0)?;
        let bounds = objective.bounds();
        let breeder = Breeder {
            settings: s,
            bounds,
            mutation_rate: s
                .mutation_rate
                .unwrap_or_else(|| if bounds.is_empty() { 0.0 } else { 1.0 / bounds.len() as f64 }),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        let mut population: Vec<Vec<f64>> = Vec::with_capacity(s.population);
        if s.seed_with_initial {
            population.push(x0.to_vec());
        }
        while population.len() < s.population {
            population.push(
                bounds
                    .iter()
                    .map(|&(lo, hi)| if hi > lo { rng.random_range(lo..hi) } else { lo })
                    .collect(),
            );
        }
        let mut fitness = evaluate_all(objective, &population);
        let best = ranking(&fitness)[0];
        let mut tracker = Tracker::new(population[best].clone(), fitness[best]);

        for generation in 1..=s.generations {
            let next = breeder.next_generation(&population, &fitness, &mut rng);
            let elites = s.elitism;
            let mut next_fitness: Vec<f64> = ranking(&fitness).into_iter().take(elites).map(|i| fitness[i]).collect();
            next_fitness.extend(evaluate_all(objective, &next[elites..]));
            population = next;
            fitness = next_fitness;
            let best = ranking(&fitness)[0];
            tracker.offer(generation, &population[best], fitness[best]);
        }
        Ok(tracker.finish(objective, Termination::Completed))
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::{rastrigin, shifted, sphere};
    use super::*;

    #[test]
    fn elitism_keeps_best_non_increasing() {
        for seed in 0..20 {
            let objective = Objective::new(vec![(-5.12, 5.12); 3], rastrigin);
            let ga = GeneticAlgorithm::new(GeneticSettings {
                population: 20,
                generations: 30,
                ..Default::default()
            });
            let result = ga.optimize(&objective, &[1.0, 2.0, 3.0], seed).unwrap();
            for pair in result.trace.windows(2) {
                assert!(pair[1].value <= pair[0].value, "seed {seed}: {pair:?}");
            }
            assert_eq!(result.trace.len(), 31);
        }
    }

    #[test]
    fn rastrigin_two_dimensional() {
        let successes = (0..20)
            .filter(|&seed| {
                let objective = Objective::new(vec![(-5.12, 5.12); 2], rastrigin);
                let ga = GeneticAlgorithm::new(GeneticSettings {
                    population: 50,
                    generations: 100,
                    ..Default::default()
                });
                ga.optimize(&objective, &[4.0, -4.0], seed).unwrap().best_value < 1.0
            })
            .count();
        assert!(successes >= 16, "{successes}/20");
    }

    #[test]
    fn identical_population_is_a_fixed_point() {
        let settings = GeneticSettings {
            crossover_rate: 0.0,
            mutation_rate: Some(0.0),
            ..Default::default()
        };
        let bounds = vec![(-1.0, 1.0); 3];
        let breeder = Breeder {
            settings: &settings,
            bounds: &bounds,
            mutation_rate: 0.0,
        };
        let population = vec![vec![0.25, -0.5, 0.75]; 10];
        let fitness = vec![1.0; 10];
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut current = population.clone();
        for _ in 0..5 {
            current = breeder.next_generation(&current, &fitness, &mut rng);
        }
        assert_eq!(current, population);
    }

    #[test]
    fn accounting_and_reproducibility() {
        let run = |seed| {
            let objective = Objective::new(vec![(-1.0, 1.0); 4], shifted(&[0.1, 0.2, 0.3, 0.4]));
            let ga = GeneticAlgorithm::new(GeneticSettings {
                population: 10,
                generations: 5,
                elitism: 2,
                ..Default::default()
            });
            let result = ga.optimize(&objective, &[0.0; 4], seed).unwrap();
            assert_eq!(result.evaluations, objective.evaluations());
            result
        };
        let result = run(5);
        assert_eq!(result.evaluations, 10 + 5 * 8);
        assert_eq!(result, run(5));
        assert_ne!(result.trace, run(6).trace);
    }

    #[test]
    fn rejects_tiny_population() {
        let objective = Objective::new(vec![(-1.0, 1.0)], sphere);
        let ga = GeneticAlgorithm::new(GeneticSettings {
            population: 1,
            elitism: 0,
            ..Default::default()
        });
        assert!(matches!(ga.optimize(&objective, &[0.0], 0), Err(OptimizerError::InvalidSettings(_))));
    }

    #[test]
    fn auto_mutation_round_trips() {
        let s: GeneticSettings = toml::from_str("mutation_rate = \"auto\"").unwrap();
        assert_eq!(s.mutation_rate, None);
        let s: GeneticSettings = toml::from_str("mutation_rate = 0.25").unwrap();
        assert_eq!(s.mutation_rate, Some(0.25));
        let text = toml::to_string(&GeneticSettings::default()).unwrap();
        assert!(text.contains("mutation_rate = \"auto\""), "{text}");
    }
}
