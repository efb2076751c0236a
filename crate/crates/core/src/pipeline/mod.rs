//! Experiment orchestration: load, reduce, build, initialize, optimize,
//! measure and process results.

mod metrics;
mod output;
mod processors;

pub use metrics::{
    approximation_ratio, cut_ratio, expected_approximation_ratio, expected_cut_ratio, medoid, optimal_cover_cost,
    quantile, AngleFolding, MetricStatus, Metrics,
};
pub use output::{list_results, Manifest, ResultSummary, MANIFEST};
pub use processors::{
    AnglePattern, AnglePatternSettings, Artifact, Cell, PairingReport, RatioTable, ResultProcessor, Row,
    SizeDistribution, SolveContext,
};

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ansatze::Ansatz;
use crate::config::{ConfigError, ExperimentConfig};
use crate::encodings::{energy_extremes, Bitstring, Extremes, IsingModel, DEFAULT_BRUTE_FORCE_CAP};
use crate::optimizers::{Initializer, Objective, OptimizationResult, Optimizer, Termination};
use crate::problem::{
    convert, find_reduction_path, Loader, PluginRegistry, ProblemError, ProblemInstance, ReductionEdge,
};
use crate::simulator::{most_likely, top_k, ExpectationMode, Platform};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Load(ProblemError),
    #[error("solving `{problem}` failed: {message}")]
    Solve { problem: String, message: String },
    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),
    #[error("cannot write `{path}`: {message}")]
    Write { path: String, message: String },
    #[error("no records to process")]
    NoRecords,
}

impl From<ProblemError> for PipelineError {
    fn from(e: ProblemError) -> Self {
        PipelineError::Config(ConfigError::Plugin(e))
    }
}

/// A most-likely-first outcome of the final state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub bitstring: Bitstring,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub restart: usize,
    pub seed: u64,
    pub best_value: f64,
    pub evaluations: usize,
    pub termination: Termination,
    /// Converged parameters, by group.
    pub parameters: BTreeMap<String, Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveRecord {
    /// Position in the experiment's task order.
    pub index: usize,
    pub problem: String,
    /// Number of qubits.
    pub size: usize,
    pub original_form: String,
    pub form: String,
    pub ansatz: String,
    pub depth: usize,
    pub optimizer: String,
    pub seed: u64,
    /// The best restart's optimization run.
    pub result: OptimizationResult,
    pub best_restart: usize,
    /// The best restart's parameters by group, inactive slots included.
    pub parameters: BTreeMap<String, Vec<f64>>,
    pub restarts: Vec<RestartSummary>,
    pub most_likely: Bitstring,
    pub top: Vec<Outcome>,
    pub metrics: Metrics,
}

/// Every plugin an experiment needs, built from a validated config.
pub struct Plugins {
    pub loader: Box<dyn Loader>,
    pub platform: Arc<dyn Platform>,
    pub ansatz: Box<dyn Ansatz>,
    pub initializer: Box<dyn Initializer>,
    pub optimizer: Box<dyn Optimizer>,
    pub reductions: Vec<ReductionEdge>,
    /// Explicit reduction sequence, when the config names one.
    pub path: Option<Vec<ReductionEdge>>,
    pub processors: Vec<Box<dyn ResultProcessor>>,
}

impl Plugins {
    pub fn build(config: &ExperimentConfig, registry: &PluginRegistry) -> Result<Self, ConfigError> {
        config.validate(registry)?;
        let reductions = registry.active_reductions(&config.run.plugins, &config.reductions.settings)?;
        let path = if config.reductions.path.is_empty() {
            None
        } else {
            let by_name: BTreeMap<&str, &ReductionEdge> = reductions.iter().map(|e| (e.name.as_str(), e)).collect();
            Some(
                config
                    .reductions
                    .path
                    .iter()
                    .map(|n| {
                        by_name
                            .get(n.as_str())
                            .map(|e| (*e).clone())
                            .ok_or_else(|| ConfigError::Invalid(format!("reduction `{n}` is not active")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            )
        };
        Ok(Self {
            loader: registry.loader(&config.loader.name, &config.loader.settings)?,
            platform: registry.platform(&config.platform.name, &config.platform.settings)?,
            ansatz: registry.ansatz(&config.ansatz.name, &config.ansatz.settings)?,
            initializer: registry.initializer(&config.initializer.name, &config.initializer.settings)?,
            optimizer: registry.optimizer(&config.optimizer.name, &config.optimizer.settings)?,
            reductions,
            path,
            processors: config
                .processors
                .iter()
                .map(|p| registry.processor(&p.name, &p.settings))
                .collect::<Result<_, _>>()?,
        })
    }
}

/// SplitMix64 step; per-task and per-restart seeds come from the master
/// seed and a counter through this mix.
pub fn derive_seed(seed: u64, counter: u64) -> u64 {
    let mut z = seed ^ counter.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn point_seed(seed: u64, x: &[f64]) -> u64 {
    x.iter().fold(seed, |acc, v| derive_seed(acc, v.to_bits()))
}

/// An instance in the ansatz's form, with its exhaustive-oracle data.
pub struct PreparedInstance {
    pub instance: ProblemInstance,
    pub model: IsingModel,
    pub energies: Vec<f64>,
    pub extremes: Option<Extremes>,
    pub optimal_cover_cost: Option<f64>,
}

fn solve_error(problem: &str, e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Solve {
        problem: problem.into(),
        message: e.to_string(),
    }
}

fn apply_path(instance: &ProblemInstance, path: &[ReductionEdge]) -> Result<ProblemInstance, ProblemError> {
    let mut out = instance.clone();
    for edge in path {
        if out.has_form(&edge.target) {
            continue;
        }
        let source = out
            .form(&edge.source)
            .ok_or_else(|| ProblemError::MissingForm(edge.source.clone()))?;
        let produced = edge.apply(source)?;
        out.add_form(produced)?;
    }
    Ok(out)
}

pub fn prepare(instance: &ProblemInstance, plugins: &Plugins) -> Result<PreparedInstance, PipelineError> {
    let target = plugins.ansatz.required_form();
    let converted = match &plugins.path {
        Some(path) => apply_path(instance, path),
        None => convert(instance, target, &plugins.reductions),
    }
    .map_err(|e| solve_error(instance.name(), e))?;
    let model = converted
        .ising()
        .cloned()
        .ok_or_else(|| solve_error(instance.name(), ProblemError::MissingForm(target.into())))?;
    let cap = plugins.platform.capabilities().max_qubits;
    if model.num_spins() > cap {
        return Err(solve_error(
            instance.name(),
            format!("{} qubits exceed the platform limit of {cap}", model.num_spins()),
        ));
    }
    let small = model.num_spins() <= DEFAULT_BRUTE_FORCE_CAP;
    let extremes = if small {
        Some(energy_extremes(&model, DEFAULT_BRUTE_FORCE_CAP).map_err(|e| solve_error(instance.name(), e))?)
    } else {
        None
    };
    let optimal_cover_cost = match converted.mcec() {
        Some(mcec) if small && mcec.num_subsets() <= DEFAULT_BRUTE_FORCE_CAP => optimal_cover_cost(mcec),
        _ => None,
    };
    Ok(PreparedInstance {
        energies: model.diagonal(),
        instance: converted,
        model,
        extremes,
        optimal_cover_cost,
    })
}

/// One solve: an instance at one depth, with every restart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Task {
    pub index: usize,
    pub instance: usize,
    pub depth: usize,
    pub seed: u64,
}

pub fn tasks(instances: usize, depths: &[usize], master_seed: u64) -> Vec<Task> {
    let mut out = Vec::with_capacity(instances * depths.len());
    for instance in 0..instances {
        for &depth in depths {
            let index = out.len();
            out.push(Task {
                index,
                instance,
                depth,
                seed: derive_seed(master_seed, index as u64),
            });
        }
    }
    out
}

/// Output of one finished solve: the record and each processor's rows.
struct Solved {
    record: SolveRecord,
    rows: Vec<Vec<Row>>,
}

fn solve(task: &Task, prepared: &PreparedInstance, plugins: &Plugins, config: &ExperimentConfig) -> Result<Solved, PipelineError> {
    let name = prepared.instance.name();
    let fail = |e: &dyn std::fmt::Display| solve_error(name, e);
    let circuit = plugins.ansatz.build(&prepared.model, task.depth).map_err(|e| fail(&e))?;
    let table = &circuit.parameters;
    let bounds = table.active_bounds();
    let platform = &plugins.platform;

    let mut best: Option<(usize, OptimizationResult)> = None;
    let mut restarts = Vec::with_capacity(config.run.restarts);
    for restart in 0..config.run.restarts {
        let seed = derive_seed(task.seed, restart as u64);
        let failure: Mutex<Option<String>> = Mutex::new(None);
        let objective = Objective::new(bounds.clone(), |x: &[f64]| {
            let value = circuit
                .bind_flat(&table.expand(x))
                .map_err(|e| e.to_string())
                .and_then(|bound| {
                    platform
                        .expectation(&bound, &prepared.energies, point_seed(seed, x))
                        .map_err(|e| e.to_string())
                });
            value.unwrap_or_else(|e| {
                failure.lock().expect("unpoisoned").get_or_insert(e);
                f64::INFINITY
            })
        });
        let x0 = plugins.initializer.initialize(&bounds, seed);
        let result = plugins.optimizer.optimize(&objective, &x0, seed).map_err(|e| fail(&e))?;
        drop(objective);
        if let Some(message) = failure.into_inner().expect("unpoisoned") {
            return Err(fail(&message));
        }
        restarts.push(RestartSummary {
            restart,
            seed,
            best_value: result.best_value,
            evaluations: result.evaluations,
            termination: result.termination,
            parameters: table.named(&table.expand(&result.best_x)),
        });
        if best.as_ref().is_none_or(|(_, b)| result.best_value < b.best_value) {
            best = Some((restart, result));
        }
    }
    let (best_restart, result) = best.expect("at least one restart");

    let full = table.expand(&result.best_x);
    let bound = circuit.bind_flat(&full).map_err(|e| fail(&e))?;
    let m = prepared.model.num_spins();
    let final_seed = derive_seed(task.seed, u64::MAX);
    let exact = match config.run.metrics {
        ExpectationMode::Exact => platform.distribution(&bound).map_err(|e| fail(&e))?,
        ExpectationMode::Shots => None,
    };
    let probabilities = match exact {
        Some(p) => p,
        None => {
            let shots = config.run.shots;
            let histogram = platform.sample(&bound, shots, final_seed).map_err(|e| fail(&e))?;
            let mut p = vec![0.0; 1 << m];
            for (bits, count) in histogram {
                p[bits.index()] = count as f64 / shots as f64;
            }
            p
        }
    };
    let most = most_likely(&probabilities, m);
    let metrics = metrics::compute(&metrics::MetricInputs {
        probabilities: &probabilities,
        energies: &prepared.energies,
        most_likely: most,
        extremes: prepared.extremes.as_ref(),
        graph: prepared.instance.maxcut(),
        mcec: prepared.instance.mcec(),
        optimal_cover_cost: prepared.optimal_cover_cost,
    });
    let record = SolveRecord {
        index: task.index,
        problem: name.to_string(),
        size: m,
        original_form: prepared.instance.original_form().to_string(),
        form: plugins.ansatz.required_form().to_string(),
        ansatz: plugins.ansatz.name().to_string(),
        depth: task.depth,
        optimizer: plugins.optimizer.name().to_string(),
        seed: task.seed,
        best_restart,
        parameters: table.named(&full),
        result,
        restarts,
        most_likely: most,
        top: top_k(&probabilities, m, config.run.top_k)
            .into_iter()
            .map(|(bitstring, probability)| Outcome { bitstring, probability })
            .collect(),
        metrics,
    };
    let context = SolveContext {
        record: &record,
        instance: &prepared.instance,
        model: &prepared.model,
    };
    let rows = plugins.processors.iter().map(|p| p.extract(&context)).collect();
    Ok(Solved { record, rows })
}

/// Rows and aggregate files of one processor.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessorOutput {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    pub artifacts: Vec<Artifact>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub instances: usize,
    pub tasks: Vec<Task>,
    pub records: Vec<SolveRecord>,
    pub processors: Vec<ProcessorOutput>,
}

/// What `run_experiment` would do, without solving anything.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Plan {
    pub instances: Vec<PlannedInstance>,
    pub ansatz: String,
    pub depths: Vec<usize>,
    pub optimizer: String,
    pub initializer: String,
    pub platform: String,
    pub restarts: usize,
    pub tasks: usize,
    pub processors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlannedInstance {
    pub name: String,
    pub form: String,
    pub reductions: Vec<String>,
}

pub fn plan(config: &ExperimentConfig, registry: &PluginRegistry) -> Result<Plan, PipelineError> {
    let plugins = Plugins::build(config, registry)?;
    let loaded = plugins.loader.load().map_err(PipelineError::Load)?;
    let target = plugins.ansatz.required_form();
    let instances = loaded
        .iter()
        .map(|i| {
            let reductions = match &plugins.path {
                Some(path) => path.iter().map(|e| e.name.clone()).collect(),
                None => find_reduction_path(i.original_form(), target, &plugins.reductions)
                    .map_err(|e| solve_error(i.name(), e))?
                    .into_iter()
                    .map(|e| e.name)
                    .collect(),
            };
            Ok(PlannedInstance {
                name: i.name().to_string(),
                form: i.original_form().to_string(),
                reductions,
            })
        })
        .collect::<Result<Vec<_>, PipelineError>>()?;
    Ok(Plan {
        tasks: instances.len() * plugins.ansatz.depths().len(),
        instances,
        ansatz: plugins.ansatz.name().to_string(),
        depths: plugins.ansatz.depths().to_vec(),
        optimizer: plugins.optimizer.name().to_string(),
        initializer: plugins.initializer.name().to_string(),
        platform: plugins.platform.name().to_string(),
        restarts: config.run.restarts,
        processors: plugins.processors.iter().map(|p| p.name().to_string()).collect(),
    })
}

/// Runs every instance at every depth. Configuration problems surface
/// before any solve starts; records come back in task order whatever the
/// worker count.
pub fn run_experiment(config: &ExperimentConfig, registry: &PluginRegistry) -> Result<Experiment, PipelineError> {
    let plugins = Plugins::build(config, registry)?;
    let loaded = plugins.loader.load().map_err(PipelineError::Load)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.run.workers)
        .build()
        .map_err(|e| PipelineError::Config(ConfigError::Invalid(e.to_string())))?;
    pool.install(|| {
        let prepared: Vec<PreparedInstance> = loaded
            .par_iter()
            .map(|i| prepare(i, &plugins))
            .collect::<Result<_, _>>()?;
        let tasks = tasks(prepared.len(), plugins.ansatz.depths(), config.run.seed);
        let solved: Vec<Solved> = tasks
            .par_iter()
            .map(|t| solve(t, &prepared[t.instance], &plugins, config))
            .collect::<Result<_, _>>()?;
        let mut records = Vec::with_capacity(solved.len());
        let mut rows: Vec<Vec<Row>> = vec![Vec::new(); plugins.processors.len()];
        for s in solved {
            for (all, mut extracted) in rows.iter_mut().zip(s.rows) {
                all.append(&mut extracted);
            }
            records.push(s.record);
        }
        let processors = plugins
            .processors
            .iter()
            .zip(rows)
            .map(|(p, rows)| ProcessorOutput {
                name: p.name().to_string(),
                columns: p.columns().into_iter().map(String::from).collect(),
                artifacts: p.aggregate(&rows),
                rows,
            })
            .collect();
        Ok(Experiment {
            config: config.clone(),
            instances: prepared.len(),
            tasks,
            records,
            processors,
        })
    })
}
