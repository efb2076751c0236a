//! The registry of bundled plugins.

use std::sync::Arc;

use serde::Deserialize;

use crate::ansatze::{AnsatzKind, AnsatzSettings, BuiltinAnsatz};
use crate::config::{settings_from, FieldDescriptor};
use crate::encodings::Penalty;
use crate::optimizers::{
    Constant, GeneticAlgorithm, GeneticSettings, LocalSettings, LocalTrustRegion, PerturbedConstant, Spsa,
    SpsaSettings, UniformRandom,
};
use crate::pipeline::{AnglePattern, AnglePatternSettings, PairingReport, RatioTable, SizeDistribution};
use crate::problem::{
    AcpLoader, AcpLoaderSettings, Factory, MaxCutFileLoader, MaxCutGraphsLoader, PluginEntry, PluginRegistry,
    ReductionEdge,
};
use crate::simulator::{StatevectorPlatform, StatevectorSettings};

#[derive(Deserialize)]
#[serde(default)]
struct GraphRange {
    min_nodes: usize,
    max_nodes: usize,
}

impl Default for GraphRange {
    fn default() -> Self {
        Self {
            min_nodes: 2,
            max_nodes: 6,
        }
    }
}

#[derive(Deserialize)]
struct EdgeFile {
    path: String,
}

#[derive(Deserialize, Default)]
#[serde(default)]
struct PenaltySetting {
    #[serde(deserialize_with = "auto_number")]
    penalty: Option<f64>,
}

fn auto_number<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
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

impl PenaltySetting {
    fn fields() -> Vec<FieldDescriptor> {
        vec![FieldDescriptor::number_or_auto("penalty", "Constraint penalty D")
            .min(1e-12)
            .help("`auto` is 1 + total pairing cost")]
    }

    fn penalty(&self) -> Penalty {
        self.penalty.map_or(Penalty::Auto, Penalty::Fixed)
    }
}

#[derive(Deserialize, Default)]
#[serde(default)]
struct ConstantSetting {
    #[serde(deserialize_with = "auto_number")]
    value: Option<f64>,
    width: Option<f64>,
}

fn constant_fields() -> Vec<FieldDescriptor> {
    vec![FieldDescriptor::number_or_auto("value", "Constant value").help("`auto` is each bound's midpoint")]
}

fn perturbed_fields() -> Vec<FieldDescriptor> {
    let mut fields = constant_fields();
    fields.push(FieldDescriptor::number("width", "Noise width", PerturbedConstant::default().width).min(0.0));
    fields
}

/// Wraps a typed settings parser into a factory closure.
fn parse<T: serde::de::DeserializeOwned>(fields: Vec<FieldDescriptor>) -> impl Fn(&toml::Table) -> Result<T, String> {
    move |table| settings_from(table, &fields)
}

fn ansatz_entry(kind: AnsatzKind, summary: &str) -> PluginEntry {
    let fields = AnsatzSettings::fields(kind);
    let read = parse::<AnsatzSettings>(fields.clone());
    PluginEntry::new(
        kind.name(),
        Factory::Ansatz(Arc::new(move |t| {
            let settings = read(t)?;
            Ok(Box::new(BuiltinAnsatz::new(kind, settings).map_err(|e| e.to_string())?))
        })),
    )
    .summary(summary)
    .fields(fields)
}

/// Every bundled plugin. `mcec-ising-direct` is optional and must be named
/// in the run's `plugins` list to take part in reduction paths.
pub fn builtin_registry() -> PluginRegistry {
    let mut r = PluginRegistry::new();
    let mut add = |entry: PluginEntry| r.register(entry).expect("bundled plugin names are unique");

    let read = parse::<AcpLoaderSettings>(AcpLoaderSettings::fields());
    add(PluginEntry::new(
        "acp",
        Factory::Loader(Arc::new(move |t| Ok(Box::new(AcpLoader::new(read(t)?))))),
    )
    .summary("crew pairing instance from the toy schedule, a generator or a file")
    .fields(AcpLoaderSettings::fields()));

    let read = parse::<GraphRange>(MaxCutGraphsLoader::fields());
    add(PluginEntry::new(
        "maxcut-graphs",
        Factory::Loader(Arc::new(move |t| {
            let s = read(t)?;
            Ok(Box::new(MaxCutGraphsLoader {
                min_nodes: s.min_nodes,
                max_nodes: s.max_nodes,
            }))
        })),
    )
    .summary("every connected non-isomorphic graph in a node range")
    .fields(MaxCutGraphsLoader::fields()));

    let read = parse::<EdgeFile>(MaxCutFileLoader::fields());
    add(PluginEntry::new(
        "maxcut-file",
        Factory::Loader(Arc::new(move |t| {
            let mut t = t.clone();
            t.entry("path").or_insert_with(|| "graph.txt".into());
            Ok(Box::new(MaxCutFileLoader { path: read(&t)?.path }))
        })),
    )
    .summary("one graph from an edge-list file")
    .fields(MaxCutFileLoader::fields()));

    let read = parse::<StatevectorSettings>(StatevectorSettings::fields());
    add(PluginEntry::new(
        "statevector",
        Factory::Platform(Arc::new(move |t| Ok(Arc::new(StatevectorPlatform::new(read(t)?))))),
    )
    .summary("exact double-precision statevector simulator")
    .fields(StatevectorSettings::fields()));

    add(ansatz_entry(AnsatzKind::Qaoa, "standard QAOA, one gamma and beta per layer"));
    add(ansatz_entry(AnsatzKind::MaQaoa, "multi-angle QAOA, one angle per gate"));
    add(ansatz_entry(AnsatzKind::QaoaPlus, "QAOA followed by a problem-independent layer"));
    add(ansatz_entry(AnsatzKind::Xqaoa, "multi-angle QAOA with an extra Y mixer"));

    add(PluginEntry::new("acp-mcec", Factory::Reduction(Arc::new(|_| Ok(ReductionEdge::acp_to_mcec()))))
        .summary("legs become elements, pairings become priced subsets"));
    let read = parse::<PenaltySetting>(PenaltySetting::fields());
    add(PluginEntry::new(
        "mcec-qubo",
        Factory::Reduction(Arc::new(move |t| Ok(ReductionEdge::mcec_to_qubo(read(t)?.penalty())))),
    )
    .summary("exact cover as a penalized QUBO")
    .fields(PenaltySetting::fields()));
    add(PluginEntry::new("qubo-ising", Factory::Reduction(Arc::new(|_| Ok(ReductionEdge::qubo_to_ising()))))
        .summary("QUBO to Ising by x = (1 + w)/2"));
    add(PluginEntry::new("maxcut-ising", Factory::Reduction(Arc::new(|_| Ok(ReductionEdge::maxcut_to_ising()))))
        .summary("MaxCut as an antiferromagnetic Ising model"));
    let read = parse::<PenaltySetting>(PenaltySetting::fields());
    add(PluginEntry::new(
        "mcec-ising-direct",
        Factory::Reduction(Arc::new(move |t| Ok(ReductionEdge::mcec_to_ising_direct(read(t)?.penalty())))),
    )
    .summary("exact cover straight to Ising")
    .fields(PenaltySetting::fields())
    .optional());

    add(PluginEntry::new("uniform-random", Factory::Initializer(Arc::new(|_| Ok(Box::new(UniformRandom)))))
        .summary("uniform within each bound"));
    let read = parse::<ConstantSetting>(constant_fields());
    add(PluginEntry::new(
        "constant",
        Factory::Initializer(Arc::new(move |t| Ok(Box::new(Constant { value: read(t)?.value })))),
    )
    .summary("every parameter at one value")
    .fields(constant_fields()));
    let read = parse::<ConstantSetting>(perturbed_fields());
    add(PluginEntry::new(
        "perturbed-constant",
        Factory::Initializer(Arc::new(move |t| {
            let s = read(t)?;
            Ok(Box::new(PerturbedConstant {
                base: Constant { value: s.value },
                width: s.width.unwrap_or(PerturbedConstant::default().width),
            }))
        })),
    )
    .summary("a constant plus small uniform noise")
    .fields(perturbed_fields()));

    let read = parse::<LocalSettings>(LocalSettings::fields());
    add(PluginEntry::new(
        "local",
        Factory::Optimizer(Arc::new(move |t| Ok(Box::new(LocalTrustRegion::new(read(t)?))))),
    )
    .summary("derivative-free linear-model trust region (COBYLA class)")
    .fields(LocalSettings::fields()));
    let read = parse::<SpsaSettings>(SpsaSettings::fields());
    add(PluginEntry::new(
        "spsa",
        Factory::Optimizer(Arc::new(move |t| {
            let s = read(t)?;
            s.schedule.validate().map_err(|e| e.to_string())?;
            Ok(Box::new(Spsa::new(s)))
        })),
    )
    .summary("simultaneous perturbation stochastic approximation")
    .fields(SpsaSettings::fields()));
    let read = parse::<GeneticSettings>(GeneticSettings::fields());
    add(PluginEntry::new(
        "genetic",
        Factory::Optimizer(Arc::new(move |t| {
            let s = read(t)?;
            s.validate().map_err(|e| e.to_string())?;
            Ok(Box::new(GeneticAlgorithm::new(s)))
        })),
    )
    .summary("real-coded genetic algorithm with elitism")
    .fields(GeneticSettings::fields()));

    add(PluginEntry::new("ratio-table", Factory::Processor(Arc::new(|_| Ok(Box::new(RatioTable)))))
        .summary("average ratios per depth"));
    add(PluginEntry::new("size-distribution", Factory::Processor(Arc::new(|_| Ok(Box::new(SizeDistribution)))))
        .summary("expected-ratio quartiles by instance size"));
    let read = parse::<AnglePatternSettings>(AnglePatternSettings::fields());
    add(PluginEntry::new(
        "angle-pattern",
        Factory::Processor(Arc::new(move |t| Ok(Box::new(AnglePattern { settings: read(t)? })))),
    )
    .summary("converged angles per instance and their clustering")
    .fields(AnglePatternSettings::fields()));
    add(PluginEntry::new("pairing-report", Factory::Processor(Arc::new(|_| Ok(Box::new(PairingReport)))))
        .summary("most likely crew pairing solution, leg by leg"));

    r
}
