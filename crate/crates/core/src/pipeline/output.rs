//! Experiment directory layout:
//!
//! | file | contents |
//! |---|---|
//! | `config.toml` | resolved configuration |
//! | `records.csv` | one line per record (columns below) |
//! | `records.json` | full records, best-restart traces included |
//! | `rows/<processor>.csv` | first-round rows per processor |
//! | aggregate files | second-round outputs, e.g. `ratio_table.csv` |
//! | `manifest.json` | seeds, counts, crate version and the file list |
//!
//! `records.csv` columns: `index, problem, size, ansatz, depth, optimizer,
//! seed, best_restart, best_value, evaluations, termination, most_likely,
//! probability, approx_ratio, expected_approx_ratio, best_energy,
//! expected_energy, optimal_energy, feasible, cover_cost, optimal_cover_cost,
//! status`. Nothing written depends on the clock, so reruns with the same
//! seed are byte-identical.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Experiment, PipelineError};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub name: String,
    pub version: String,
    pub seed: u64,
    pub instances: usize,
    pub records: usize,
    pub task_seeds: Vec<u64>,
    pub processors: Vec<String>,
    pub files: Vec<String>,
}

fn write_error(path: &Path, e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Write {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |v| format!("{v:.10}"))
}

impl Experiment {
    fn records_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record([
                "index",
                "problem",
                "size",
                "ansatz",
                "depth",
                "optimizer",
                "seed",
                "best_restart",
                "best_value",
                "evaluations",
                "termination",
                "most_likely",
                "probability",
                "approx_ratio",
                "expected_approx_ratio",
                "best_energy",
                "expected_energy",
                "optimal_energy",
                "feasible",
                "cover_cost",
                "optimal_cover_cost",
                "status",
            ])
            .expect("in-memory write");
        for r in &self.records {
            let m = &r.metrics;
            let status = serde_json::to_value(m.status).expect("plain enum");
            writer
                .write_record([
                    r.index.to_string(),
                    r.problem.clone(),
                    r.size.to_string(),
                    r.ansatz.clone(),
                    r.depth.to_string(),
                    r.optimizer.clone(),
                    r.seed.to_string(),
                    r.best_restart.to_string(),
                    format!("{:.10}", r.result.best_value),
                    r.result.evaluations.to_string(),
                    r.result.termination.to_string(),
                    r.most_likely.to_string(),
                    format!("{:.10}", r.top.first().map_or(0.0, |o| o.probability)),
                    opt(m.approximation_ratio),
                    opt(m.expected_approximation_ratio),
                    format!("{:.10}", m.best_energy),
                    format!("{:.10}", m.expected_energy),
                    opt(m.optimal_energy),
                    m.feasible.map_or(String::new(), |f| f.to_string()),
                    opt(m.cover_cost),
                    opt(m.optimal_cover_cost),
                    status.as_str().unwrap_or_default().to_string(),
                ])
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    /// Every output file as (relative path, contents), in a fixed order.
    pub fn files(&self) -> Vec<(String, String)> {
        let mut files = vec![
            ("config.toml".to_string(), self.config.to_toml_string()),
            ("records.csv".to_string(), self.records_csv()),
            (
                "records.json".to_string(),
                serde_json::to_string_pretty(&self.records).expect("records serialize"),
            ),
        ];
        for p in &self.processors {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record(&p.columns).expect("in-memory write");
            for row in &p.rows {
                writer
                    .write_record(row.iter().map(|c| c.to_string()))
                    .expect("in-memory write");
            }
            let text = String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input");
            files.push((format!("rows/{}.csv", p.name), text));
            for a in &p.artifacts {
                files.push((a.file.clone(), a.contents.clone()));
            }
        }
        let mut names: Vec<String> = files.iter().map(|f| f.0.clone()).collect();
        names.push(MANIFEST.to_string());
        names.sort();
        let manifest = Manifest {
            name: self.config.run.name.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: self.config.run.seed,
            instances: self.instances,
            records: self.records.len(),
            task_seeds: self.tasks.iter().map(|t| t.seed).collect(),
            processors: self.processors.iter().map(|p| p.name.clone()).collect(),
            files: names,
        };
        files.push((
            MANIFEST.to_string(),
            serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
        ));
        files
    }

    /// Writes the experiment under `dir`, creating it when needed, and
    /// returns the paths written.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>, PipelineError> {
        if self.records.is_empty() {
            return Err(PipelineError::NoRecords);
        }
        let dir = dir.as_ref();
        let mut written = Vec::new();
        for (name, contents) in self.files() {
            let path = dir.join(&name);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent).map_err(|e| write_error(parent, e))?;
            }
            std::fs::write(&path, contents).map_err(|e| write_error(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultSummary {
    pub directory: PathBuf,
    pub manifest: Manifest,
}

/// Experiment directories directly under `root`, by name. Directories
/// without a readable manifest are skipped.
pub fn list_results(root: impl AsRef<Path>) -> Result<Vec<ResultSummary>, PipelineError> {
    let root = root.as_ref();
    let entries = std::fs::read_dir(root).map_err(|e| write_error(root, e))?;
    let mut out = Vec::new();
    for entry in entries.flatten() {
        let directory = entry.path();
        let Ok(text) = std::fs::read_to_string(directory.join(MANIFEST)) else {
            continue;
        };
        if let Ok(manifest) = serde_json::from_str::<Manifest>(&text) {
            out.push(ResultSummary { directory, manifest });
        }
    }
    out.sort_by(|a, b| a.directory.cmp(&b.directory));
    Ok(out)
}
