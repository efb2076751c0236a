use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use super::metrics::{medoid, quantile, AngleFolding};
use super::SolveRecord;
use crate::acp::AcpInstance;
use crate::config::FieldDescriptor;
use crate::encodings::IsingModel;
use crate::problem::ProblemInstance;

/// One value in a processor row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Float(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => write!(f, "{v:.10}"),
            Cell::Bool(v) => write!(f, "{v}"),
            Cell::Text(v) => f.write_str(v),
            Cell::Empty => Ok(()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

pub type Row = Vec<Cell>;

/// A file produced in the aggregate round, relative to the experiment directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub file: String,
    pub contents: String,
}

/// What a processor sees when a solve finishes.
pub struct SolveContext<'a> {
    pub record: &'a SolveRecord,
    pub instance: &'a ProblemInstance,
    /// The model the circuit was built from.
    pub model: &'a IsingModel,
}

/// Result processors run in two rounds: `extract` turns each finished solve
/// into rows as soon as it completes, and `aggregate` turns every row of the
/// experiment, in record order, into output files.
pub trait ResultProcessor: Send + Sync {
    fn name(&self) -> &str;

    fn columns(&self) -> Vec<&'static str>;

    fn extract(&self, solve: &SolveContext) -> Vec<Row>;

    fn aggregate(&self, rows: &[Row]) -> Vec<Artifact>;
}

fn f6(v: f64) -> String {
    format!("{v:.6}")
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Average approximation and expected approximation ratios per depth.
#[derive(Debug, Clone, Default)]
pub struct RatioTable;

impl ResultProcessor for RatioTable {
    fn name(&self) -> &str {
        "ratio-table"
    }

    fn columns(&self) -> Vec<&'static str> {
        vec!["problem", "size", "depth", "approx_ratio", "expected_approx_ratio"]
    }

    fn extract(&self, solve: &SolveContext) -> Vec<Row> {
        let r = solve.record;
        vec![vec![
            r.problem.as_str().into(),
            r.size.into(),
            r.depth.into(),
            r.metrics.approximation_ratio.into(),
            r.metrics.expected_approximation_ratio.into(),
        ]]
    }

    fn aggregate(&self, rows: &[Row]) -> Vec<Artifact> {
        let mut by_depth: BTreeMap<i64, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
        for row in rows {
            let Cell::Int(depth) = row[2] else { continue };
            let entry = by_depth.entry(depth).or_default();
            if let (Some(a), Some(e)) = (row[3].as_f64(), row[4].as_f64()) {
                entry.0.push(a);
                entry.1.push(e);
            }
        }
        let mean = |v: &[f64]| {
            if v.is_empty() {
                String::new()
            } else {
                f6(v.iter().sum::<f64>() / v.len() as f64)
            }
        };
        let mut header = vec!["metric".to_string()];
        header.extend(by_depth.keys().map(|p| format!("p={p}")));
        let mut table = vec![
            vec!["Avg. approx. ratio".to_string()],
            vec!["Avg. exp. approx. ratio".to_string()],
            vec!["Instances".to_string()],
        ];
        for (a, e) in by_depth.values() {
            table[0].push(mean(a));
            table[1].push(mean(e));
            table[2].push(a.len().to_string());
        }
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        vec![Artifact {
            file: "ratio_table.csv".into(),
            contents: csv_text(&header, &table),
        }]
    }
}

/// Expected-ratio quartiles by instance size and depth.
#[derive(Debug, Clone, Default)]
pub struct SizeDistribution;

impl ResultProcessor for SizeDistribution {
    fn name(&self) -> &str {
        "size-distribution"
    }

    fn columns(&self) -> Vec<&'static str> {
        vec!["problem", "size", "depth", "expected_approx_ratio"]
    }

    fn extract(&self, solve: &SolveContext) -> Vec<Row> {
        let r = solve.record;
        vec![vec![
            r.problem.as_str().into(),
            r.size.into(),
            r.depth.into(),
            r.metrics.expected_approximation_ratio.into(),
        ]]
    }

    fn aggregate(&self, rows: &[Row]) -> Vec<Artifact> {
        let mut groups: BTreeMap<(i64, i64), Vec<f64>> = BTreeMap::new();
        for row in rows {
            if let (Cell::Int(size), Cell::Int(depth), Some(e)) = (&row[1], &row[2], row[3].as_f64()) {
                groups.entry((*depth, *size)).or_default().push(e);
            }
        }
        let table: Vec<Vec<String>> = groups
            .into_iter()
            .map(|((depth, size), mut values)| {
                values.sort_by(f64::total_cmp);
                vec![
                    depth.to_string(),
                    size.to_string(),
                    values.len().to_string(),
                    f6(values[0]),
                    f6(quantile(&values, 0.25)),
                    f6(quantile(&values, 0.5)),
                    f6(quantile(&values, 0.75)),
                    f6(values[values.len() - 1]),
                ]
            })
            .collect();
        vec![Artifact {
            file: "size_distribution.csv".into(),
            contents: csv_text(&["depth", "size", "count", "min", "q1", "median", "q3", "max"], &table),
        }]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnglePatternSettings {
    /// Radius of the ball around the medoid counted as the cluster.
    pub radius: f64,
}

impl Default for AnglePatternSettings {
    fn default() -> Self {
        Self { radius: 0.3 }
    }
}

impl AnglePatternSettings {
    pub fn fields() -> Vec<FieldDescriptor> {
        vec![FieldDescriptor::number("radius", "Cluster radius", 0.3).min(0.0)]
    }
}

/// Converged `(γ_l, β_l)` per record and layer, raw and folded into a
/// fundamental domain, with the fraction of points near the medoid.
/// Records whose ansatz has no `gamma`/`beta` groups of length `p` are skipped.
#[derive(Debug, Clone, Default)]
pub struct AnglePattern {
    pub settings: AnglePatternSettings,
}

impl ResultProcessor for AnglePattern {
    fn name(&self) -> &str {
        "angle-pattern"
    }

    fn columns(&self) -> Vec<&'static str> {
        vec![
            "problem",
            "size",
            "depth",
            "layer",
            "gamma",
            "beta",
            "gamma_folded",
            "beta_folded",
            "beta_period",
        ]
    }

    fn extract(&self, solve: &SolveContext) -> Vec<Row> {
        let r = solve.record;
        let (Some(gammas), Some(betas)) = (r.parameters.get("gamma"), r.parameters.get("beta")) else {
            return Vec::new();
        };
        if gammas.len() != r.depth || betas.len() != r.depth {
            return Vec::new();
        }
        let folding = AngleFolding::for_model(solve.model);
        (0..r.depth)
            .map(|l| {
                let (g, b) = folding.fold(gammas[l], betas[l]);
                vec![
                    r.problem.as_str().into(),
                    r.size.into(),
                    r.depth.into(),
                    l.into(),
                    gammas[l].into(),
                    betas[l].into(),
                    g.into(),
                    b.into(),
                    folding.beta_period.into(),
                ]
            })
            .collect()
    }

    fn aggregate(&self, rows: &[Row]) -> Vec<Artifact> {
        let mut groups: BTreeMap<(i64, i64), Vec<((f64, f64), f64)>> = BTreeMap::new();
        for row in rows {
            if let (Cell::Int(depth), Cell::Int(layer), Some(g), Some(b), Some(period)) =
                (&row[2], &row[3], row[6].as_f64(), row[7].as_f64(), row[8].as_f64())
            {
                groups.entry((*depth, *layer)).or_default().push(((g, b), period));
            }
        }
        let radius = self.settings.radius;
        let table: Vec<Vec<String>> = groups
            .into_iter()
            .map(|((depth, layer), entries)| {
                let points: Vec<(f64, f64)> = entries.iter().map(|e| e.0).collect();
                // Coarsest period present, so mixed batches stay comparable.
                let period = entries.iter().map(|e| e.1).fold(0.0, f64::max);
                let folding = AngleFolding {
                    beta_period: period,
                    gamma_period: None,
                };
                let distance = |a, b| folding.distance(a, b);
                let centre = points[medoid(&points, distance).expect("group is nonempty")];
                let within = points.iter().filter(|&&p| distance(p, centre) <= radius).count();
                vec![
                    depth.to_string(),
                    layer.to_string(),
                    points.len().to_string(),
                    f6(centre.0),
                    f6(centre.1),
                    f6(radius),
                    within.to_string(),
                    f6(within as f64 / points.len() as f64),
                ]
            })
            .collect();
        vec![Artifact {
            file: "angle_pattern.csv".into(),
            contents: csv_text(
                &[
                    "depth",
                    "layer",
                    "count",
                    "medoid_gamma",
                    "medoid_beta",
                    "radius",
                    "within",
                    "fraction_within",
                ],
                &table,
            ),
        }]
    }
}

/// The most likely crew-pairing solution, leg by leg.
#[derive(Debug, Clone, Default)]
pub struct PairingReport;

impl ResultProcessor for PairingReport {
    fn name(&self) -> &str {
        "pairing-report"
    }

    fn columns(&self) -> Vec<&'static str> {
        vec![
            "problem",
            "depth",
            "bitstring",
            "feasible",
            "cost",
            "optimal_cost",
            "pairing",
            "home_base",
            "pairing_cost",
            "leg",
            "from",
            "to",
            "departure",
            "arrival",
        ]
    }

    fn extract(&self, solve: &SolveContext) -> Vec<Row> {
        let r = solve.record;
        let Some(acp) = solve.instance.acp() else {
            return Vec::new();
        };
        let head = || -> Row {
            vec![
                r.problem.as_str().into(),
                r.depth.into(),
                r.most_likely.to_string().into(),
                r.metrics.feasible.map_or(Cell::Empty, Cell::Bool),
                r.metrics.cover_cost.into(),
                r.metrics.optimal_cover_cost.into(),
            ]
        };
        let selection = r.most_likely.assignment();
        let mut rows = Vec::new();
        for (j, pairing) in acp.pairings.iter().enumerate() {
            if !selection.get(j).copied().unwrap_or(false) {
                continue;
            }
            for leg in pairing.legs() {
                let mut row = head();
                row.extend([
                    AcpInstance::pairing_label(j).into(),
                    pairing.home_base.as_str().into(),
                    pairing.cost.into(),
                    leg.id.as_str().into(),
                    leg.departure_airport.as_str().into(),
                    leg.arrival_airport.as_str().into(),
                    leg.departure.to_string().into(),
                    leg.arrival.to_string().into(),
                ]);
                rows.push(row);
            }
        }
        if rows.is_empty() {
            let mut row = head();
            row.extend(std::iter::repeat_n(Cell::Empty, 8));
            rows.push(row);
        }
        rows
    }

    fn aggregate(&self, rows: &[Row]) -> Vec<Artifact> {
        let mut out = String::new();
        let mut last_solution: Option<(String, String, String)> = None;
        let mut last_pairing: Option<String> = None;
        for row in rows {
            let key = (row[0].as_text(), row[1].as_text(), row[2].as_text());
            if last_solution.as_ref() != Some(&key) {
                if last_solution.is_some() {
                    out.push('\n');
                }
                let feasible = match &row[3] {
                    Cell::Bool(true) => "exact cover",
                    Cell::Bool(false) => "not an exact cover",
                    _ => "cover status unknown",
                };
                let cost = row[4].as_f64().map_or("?".to_string(), |c| format!("{c}"));
                let optimal = row[5].as_f64().map_or("none".to_string(), |c| format!("{c}"));
                let _ = writeln!(
                    out,
                    "{} p={}: most likely {}, {feasible}, cost {cost} (optimal {optimal})",
                    key.0, key.1, key.2
                );
                last_solution = Some(key);
                last_pairing = None;
            }
            if matches!(row[6], Cell::Empty) {
                let _ = writeln!(out, "  no pairing selected");
                continue;
            }
            let pairing = row[6].as_text();
            if last_pairing.as_ref() != Some(&pairing) {
                let cost = row[8].as_f64().unwrap_or(f64::NAN);
                let _ = writeln!(out, "  {pairing} (home {}, cost {cost})", row[7]);
                last_pairing = Some(pairing);
            }
            let _ = writeln!(out, "    {} {}-{} {} -> {}", row[9], row[10], row[11], row[12], row[13]);
        }
        vec![Artifact {
            file: "pairing_report.txt".into(),
            contents: out,
        }]
    }
}
