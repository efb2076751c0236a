use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Form, ProblemError, ProblemInstance};
use crate::acp::{
    generate_schedule, parse_schedule, AcpInstance, CostModel, GeneratorConfig, RuleConfig, Schedule,
};
use crate::config::FieldDescriptor;
use crate::encodings::graphs::{connected_graphs, MAX_NODES};
use crate::encodings::MaxCutInstance;

/// Produces the problem instances an experiment solves.
pub trait Loader: Send + Sync {
    fn load(&self) -> Result<Vec<ProblemInstance>, ProblemError>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AcpLoaderSettings {
    /// `toy`, `generate`, or a path to a leg CSV or instance JSON file.
    pub schedule: String,
    /// Comma-separated home bases for `toy` and CSV schedules.
    pub home_bases: String,
    pub max_flights: i64,
    pub min_connect_minutes: f64,
    pub max_duty_hours: f64,
    pub max_duties: i64,
    pub min_rest_hours: f64,
    pub max_pairing_days: f64,
    pub max_work_hours: f64,
    pub night_penalty: f64,
    pub offhour_penalty_per_minute: f64,
    pub legs: i64,
    pub days: i64,
    pub airports: i64,
    pub bases: i64,
    pub seed: i64,
}

impl Default for AcpLoaderSettings {
    fn default() -> Self {
        let rules = RuleConfig::default();
        let cost = CostModel::default();
        let generator = GeneratorConfig::default();
        Self {
            schedule: "toy".into(),
            home_bases: "YUL,YYZ".into(),
            max_flights: rules.max_flights as i64,
            min_connect_minutes: rules.min_connect_minutes,
            max_duty_hours: rules.max_duty_hours,
            max_duties: rules.max_duties as i64,
            min_rest_hours: rules.min_rest_hours,
            max_pairing_days: rules.max_pairing_days,
            max_work_hours: rules.max_work_hours,
            night_penalty: cost.night_penalty,
            offhour_penalty_per_minute: cost.offhour_penalty_per_minute,
            legs: generator.legs as i64,
            days: generator.days as i64,
            airports: generator.airports as i64,
            bases: generator.home_bases as i64,
            seed: 0,
        }
    }
}

impl AcpLoaderSettings {
    pub fn fields() -> Vec<FieldDescriptor> {
        let d = Self::default();
        vec![
            FieldDescriptor::text("schedule", "Schedule source", &d.schedule)
                .help("`toy`, `generate`, or a path to a leg CSV or instance JSON file"),
            FieldDescriptor::text("home_bases", "Home bases", &d.home_bases).help("comma-separated airport codes"),
            FieldDescriptor::integer("max_flights", "Max flights per duty", d.max_flights).min(1.0),
            FieldDescriptor::number("min_connect_minutes", "Min connection (minutes)", d.min_connect_minutes).min(1e-9),
            FieldDescriptor::number("max_duty_hours", "Max duty duration (hours)", d.max_duty_hours).min(1e-9),
            FieldDescriptor::integer("max_duties", "Max duties per pairing", d.max_duties).min(1.0),
            FieldDescriptor::number("min_rest_hours", "Min rest (hours)", d.min_rest_hours).min(1e-9),
            FieldDescriptor::number("max_pairing_days", "Max pairing duration (days)", d.max_pairing_days).min(1e-9),
            FieldDescriptor::number("max_work_hours", "Max work time (hours)", d.max_work_hours).min(1e-9),
            FieldDescriptor::number("night_penalty", "Cost per night away", d.night_penalty).min(0.0),
            FieldDescriptor::number("offhour_penalty_per_minute", "Cost per off-hour minute", d.offhour_penalty_per_minute)
                .min(0.0),
            FieldDescriptor::integer("legs", "Generated legs", d.legs).range(1.0, 64.0),
            FieldDescriptor::integer("days", "Generated days", d.days).range(1.0, 14.0),
            FieldDescriptor::integer("airports", "Generated airports", d.airports).range(2.0, 12.0),
            FieldDescriptor::integer("bases", "Generated home bases", d.bases).range(1.0, 11.0),
            FieldDescriptor::integer("seed", "Generator seed", d.seed).min(0.0),
        ]
    }

    pub fn rules(&self) -> RuleConfig {
        RuleConfig {
            max_flights: self.max_flights as usize,
            min_connect_minutes: self.min_connect_minutes,
            max_duty_hours: self.max_duty_hours,
            max_duties: self.max_duties as usize,
            min_rest_hours: self.min_rest_hours,
            max_pairing_days: self.max_pairing_days,
            max_work_hours: self.max_work_hours,
        }
    }

    pub fn cost_model(&self) -> CostModel {
        CostModel {
            night_penalty: self.night_penalty,
            offhour_penalty_per_minute: self.offhour_penalty_per_minute,
            ..CostModel::default()
        }
    }

    fn bases(&self) -> BTreeSet<String> {
        self.home_bases
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect()
    }
}

/// Crew pairing instances from the bundled toy schedule, a generator seed,
/// a leg CSV file or a saved instance JSON file.
#[derive(Debug, Clone, Default)]
pub struct AcpLoader {
    pub settings: AcpLoaderSettings,
}

impl AcpLoader {
    pub fn new(settings: AcpLoaderSettings) -> Self {
        Self { settings }
    }

    pub fn load_instance(&self) -> Result<(String, AcpInstance), ProblemError> {
        let s = &self.settings;
        let load = |e: crate::acp::AcpError| ProblemError::Load(e.to_string());
        let (name, schedule) = match s.schedule.as_str() {
            "toy" => (
                "acp-toy".to_string(),
                Schedule {
                    home_bases: s.bases(),
                    ..Schedule::toy()
                },
            ),
            "generate" => {
                let config = GeneratorConfig {
                    seed: s.seed as u64,
                    legs: s.legs as usize,
                    days: s.days as usize,
                    airports: s.airports as usize,
                    home_bases: s.bases as usize,
                    ..GeneratorConfig::default()
                };
                (format!("acp-gen-{}", s.seed), generate_schedule(&config))
            }
            path => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| ProblemError::Load(format!("{path}: {e}")))?;
                let stem = Path::new(path)
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("acp")
                    .to_string();
                if path.ends_with(".json") {
                    let instance = AcpInstance::from_json(&text).map_err(|e| ProblemError::Load(format!("{path}: {e}")))?;
                    return Ok((stem, instance));
                }
                let legs = parse_schedule(&text).map_err(|e| ProblemError::Load(format!("{path}: {e}")))?;
                (
                    stem,
                    Schedule {
                        legs,
                        home_bases: s.bases(),
                    },
                )
            }
        };
        let instance = AcpInstance::from_schedule(schedule, s.rules(), s.cost_model()).map_err(load)?;
        Ok((name, instance))
    }
}

impl Loader for AcpLoader {
    fn load(&self) -> Result<Vec<ProblemInstance>, ProblemError> {
        let (name, instance) = self.load_instance()?;
        Ok(vec![ProblemInstance::new(name, Form::Acp(instance))?])
    }
}

/// Every connected non-isomorphic graph with `min_nodes..=max_nodes` nodes.
#[derive(Debug, Clone)]
pub struct MaxCutGraphsLoader {
    pub min_nodes: usize,
    pub max_nodes: usize,
}

impl MaxCutGraphsLoader {
    pub fn fields() -> Vec<FieldDescriptor> {
        vec![
            FieldDescriptor::integer("min_nodes", "Smallest graph size", 2).range(2.0, MAX_NODES as f64),
            FieldDescriptor::integer("max_nodes", "Largest graph size", 6).range(2.0, MAX_NODES as f64),
        ]
    }
}

impl Loader for MaxCutGraphsLoader {
    fn load(&self) -> Result<Vec<ProblemInstance>, ProblemError> {
        if self.min_nodes > self.max_nodes {
            return Err(ProblemError::Load(format!(
                "min_nodes {} exceeds max_nodes {}",
                self.min_nodes, self.max_nodes
            )));
        }
        let mut out = Vec::new();
        for n in self.min_nodes..=self.max_nodes {
            for (k, graph) in connected_graphs(n).into_iter().enumerate() {
                out.push(ProblemInstance::new(format!("n{n}-g{k:03}"), Form::MaxCut(graph))?);
            }
        }
        Ok(out)
    }
}

/// A single graph read from an edge-list file.
#[derive(Debug, Clone)]
pub struct MaxCutFileLoader {
    pub path: String,
}

impl MaxCutFileLoader {
    pub fn fields() -> Vec<FieldDescriptor> {
        vec![FieldDescriptor::text("path", "Edge-list file", "graph.txt")]
    }
}

impl Loader for MaxCutFileLoader {
    fn load(&self) -> Result<Vec<ProblemInstance>, ProblemError> {
        let text = std::fs::read_to_string(&self.path).map_err(|e| ProblemError::Load(format!("{}: {e}", self.path)))?;
        let graph = MaxCutInstance::parse_edge_list(&text).map_err(|e| ProblemError::Load(format!("{}: {e}", self.path)))?;
        let name = Path::new(&self.path)
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("graph")
            .to_string();
        Ok(vec![ProblemInstance::new(name, Form::MaxCut(graph))?])
    }
}
