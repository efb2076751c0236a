use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::encodings::{Bitstring, Extremes, MaxCutInstance, McecInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricStatus {
    Ok,
    /// Too many spins for the exhaustive oracle; only raw energies are known.
    NoOptimum,
    /// Every configuration has the same energy.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub approximation_ratio: Option<f64>,
    pub expected_approximation_ratio: Option<f64>,
    /// Energy of the most likely outcome.
    pub best_energy: f64,
    /// Energy averaged over the final distribution.
    pub expected_energy: f64,
    pub optimal_energy: Option<f64>,
    pub worst_energy: Option<f64>,
    /// Whether the most likely outcome is an exact cover (cover problems only).
    pub feasible: Option<bool>,
    pub cover_cost: Option<f64>,
    pub optimal_cover_cost: Option<f64>,
    pub status: MetricStatus,
}

fn degenerate(what: &str) -> PipelineError {
    PipelineError::DegenerateInstance(what.into())
}

/// `(worst − energy) / (worst − best)`: 1 at the ground state, 0 at the
/// highest-energy configuration.
pub fn approximation_ratio(energy: f64, extremes: &Extremes) -> Result<f64, PipelineError> {
    let (best, worst) = (extremes.ground.energy, extremes.max_energy);
    if worst - best <= 1e-12 * worst.abs().max(1.0) {
        return Err(degenerate("all configurations have the same energy"));
    }
    Ok(((worst - energy) / (worst - best)).clamp(0.0, 1.0))
}

/// The same ratio averaged over outcome probabilities indexed by basis state.
pub fn expected_approximation_ratio(probabilities: &[f64], energies: &[f64], extremes: &Extremes) -> Result<f64, PipelineError> {
    let expected: f64 = probabilities.iter().zip(energies).map(|(p, e)| p * e).sum();
    approximation_ratio(expected, extremes)
}

/// `cut(bits) / maxcut`.
pub fn cut_ratio(graph: &MaxCutInstance, bits: Bitstring) -> Result<f64, PipelineError> {
    let best = graph.max_cut();
    if best == 0 {
        return Err(degenerate("graph has no edges"));
    }
    Ok(graph.cut_value(bits) as f64 / best as f64)
}

/// `Σ_z p(z) cut(z) / maxcut`.
pub fn expected_cut_ratio(graph: &MaxCutInstance, probabilities: &[f64]) -> Result<f64, PipelineError> {
    let best = graph.max_cut();
    if best == 0 {
        return Err(degenerate("graph has no edges"));
    }
    let n = graph.num_nodes();
    let expected: f64 = probabilities
        .iter()
        .enumerate()
        .map(|(i, p)| p * graph.cut_value(Bitstring::new(i, n)) as f64)
        .sum();
    Ok(expected / best as f64)
}

/// Cheapest exact cover by enumeration, or `None` when there is none.
pub fn optimal_cover_cost(mcec: &McecInstance) -> Option<f64> {
    let m = mcec.num_subsets();
    (0..1usize << m)
        .map(|i| Bitstring::new(i, m).assignment())
        .filter(|x| mcec.is_exact_cover(x))
        .map(|x| mcec.selection_cost(&x))
        .min_by(f64::total_cmp)
}

/// Inputs for one record's metrics.
pub(crate) struct MetricInputs<'a> {
    pub probabilities: &'a [f64],
    pub energies: &'a [f64],
    pub most_likely: Bitstring,
    pub extremes: Option<&'a Extremes>,
    pub graph: Option<&'a MaxCutInstance>,
    pub mcec: Option<&'a McecInstance>,
    pub optimal_cover_cost: Option<f64>,
}

pub(crate) fn compute(inputs: &MetricInputs) -> Metrics {
    let best_energy = inputs.energies[inputs.most_likely.index()];
    let expected_energy: f64 = inputs.probabilities.iter().zip(inputs.energies).map(|(p, e)| p * e).sum();
    let ratios = match (inputs.graph, inputs.extremes) {
        // MaxCut keeps the cut-ratio definition.
        (Some(graph), _) => cut_ratio(graph, inputs.most_likely)
            .and_then(|r| Ok((r, expected_cut_ratio(graph, inputs.probabilities)?))),
        (None, Some(extremes)) => approximation_ratio(best_energy, extremes)
            .and_then(|r| Ok((r, expected_approximation_ratio(inputs.probabilities, inputs.energies, extremes)?))),
        (None, None) => Err(PipelineError::DegenerateInstance(String::new())),
    };
    let status = match (&ratios, inputs.extremes, inputs.graph) {
        (Ok(_), _, _) => MetricStatus::Ok,
        (Err(_), None, None) => MetricStatus::NoOptimum,
        (Err(_), _, _) => MetricStatus::Degenerate,
    };
    let (approximation_ratio, expected_approximation_ratio) = match ratios {
        Ok((a, e)) => (Some(a), Some(e)),
        Err(_) => (None, None),
    };
    let selection = inputs.most_likely.assignment();
    Metrics {
        approximation_ratio,
        expected_approximation_ratio,
        best_energy,
        expected_energy,
        optimal_energy: inputs.extremes.map(|e| e.ground.energy),
        worst_energy: inputs.extremes.map(|e| e.max_energy),
        feasible: inputs.mcec.map(|m| m.is_exact_cover(&selection)),
        cover_cost: inputs.mcec.map(|m| m.selection_cost(&selection)),
        optimal_cover_cost: inputs.optimal_cover_cost,
        status,
    }
}

/// Maps QAOA angles to a fundamental domain of the landscape's symmetries.
///
/// For a real diagonal cost, `(γ, β) → (−γ, −β)` conjugates the state and
/// leaves every probability unchanged. Without linear fields the mixer
/// has period π/2 in β, otherwise π. When every coupling is ±1/2 and there are
/// no fields, the cost unitary has period 2π in γ. The result has `β` in
/// `[0, period)` and `γ ≥ 0` whenever `γ` is wrapped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleFolding {
    pub beta_period: f64,
    pub gamma_period: Option<f64>,
}

impl AngleFolding {
    pub fn for_model(model: &crate::encodings::IsingModel) -> Self {
        use std::f64::consts::PI;
        let no_fields = model.fields().iter().all(|h| h.abs() < 1e-12);
        let unit_couplings = model
            .coupling_terms()
            .iter()
            .all(|&(_, _, j)| (j.abs() - 0.5).abs() < 1e-12);
        Self {
            beta_period: if no_fields { PI / 2.0 } else { PI },
            gamma_period: (no_fields && unit_couplings).then_some(2.0 * PI),
        }
    }

    pub fn fold(&self, gamma: f64, beta: f64) -> (f64, f64) {
        let mut g = match self.gamma_period {
            Some(period) => wrap_centered(gamma, period),
            None => gamma,
        };
        let mut b = beta;
        if g < 0.0 {
            g = -g;
            b = -b;
        }
        (g, b.rem_euclid(self.beta_period))
    }

    /// Euclidean distance between folded points, periodic in β.
    pub fn distance(&self, a: (f64, f64), b: (f64, f64)) -> f64 {
        let dg = a.0 - b.0;
        let raw = (a.1 - b.1).rem_euclid(self.beta_period);
        let db = raw.min(self.beta_period - raw);
        (dg * dg + db * db).sqrt()
    }
}

/// Into `[−period/2, period/2)`.
fn wrap_centered(x: f64, period: f64) -> f64 {
    (x + period / 2.0).rem_euclid(period) - period / 2.0
}

/// Index of the point with the least total distance to all others; ties
/// resolve to the lowest index.
pub fn medoid(points: &[(f64, f64)], distance: impl Fn((f64, f64), (f64, f64)) -> f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &p) in points.iter().enumerate() {
        let total: f64 = points.iter().map(|&q| distance(p, q)).sum();
        if best.is_none_or(|(_, t)| total < t) {
            best = Some((i, total));
        }
    }
    best.map(|(i, _)| i)
}

/// Quantile with linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}
