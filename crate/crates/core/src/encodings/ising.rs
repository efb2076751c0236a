use serde::{Deserialize, Serialize};

use super::{Bitstring, EncodingError, McecInstance, Penalty, QuboInstance};

/// Largest spin count the exhaustive solver accepts by default.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 20;

/// `E(ω) = Σ_{j<k} J_jk ω_j ω_k + Σ_j h_j ω_j + const`.
///
/// Couplings are stored only for `j < k`. The constant is kept so that
/// energies equal the objective of whatever form the model was reduced from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "IsingJson", try_from = "IsingJson")]
pub struct IsingModel {
    m: usize,
    couplings: Vec<f64>,
    h: Vec<f64>,
    pub constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState {
    pub bitstring: Bitstring,
    pub energy: f64,
}

impl GroundState {
    pub fn spins(&self) -> Vec<i8> {
        self.bitstring.spins()
    }
}

/// Lowest and highest energy over all spin configurations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremes {
    pub ground: GroundState,
    pub max_energy: f64,
}

impl IsingModel {
    pub fn zeros(m: usize) -> Self {
        Self {
            m,
            couplings: vec![0.0; m * m],
            h: vec![0.0; m],
            constant: 0.0,
        }
    }

    pub fn num_spins(&self) -> usize {
        self.m
    }

    /// Coupling between spins `j` and `k` in either order; zero on the diagonal.
    pub fn coupling(&self, j: usize, k: usize) -> f64 {
        match j.cmp(&k) {
            std::cmp::Ordering::Less => self.couplings[j * self.m + k],
            std::cmp::Ordering::Greater => self.couplings[k * self.m + j],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    pub fn set_coupling(&mut self, j: usize, k: usize, value: f64) {
        assert_ne!(j, k, "self-coupling folds into the constant");
        let (a, b) = if j < k { (j, k) } else { (k, j) };
        self.couplings[a * self.m + b] = value;
    }

    pub fn add_coupling(&mut self, j: usize, k: usize, value: f64) {
        let current = self.coupling(j, k);
        self.set_coupling(j, k, current + value);
    }

    pub fn field(&self, j: usize) -> f64 {
        self.h[j]
    }

    pub fn fields(&self) -> &[f64] {
        &self.h
    }

    pub fn set_field(&mut self, j: usize, value: f64) {
        self.h[j] = value;
    }

    /// Nonzero couplings as `(j, k, J_jk)` with `j < k`, row-major order.
    pub fn coupling_terms(&self) -> Vec<(usize, usize, f64)> {
        let mut terms = Vec::new();
        for j in 0..self.m {
            for k in j + 1..self.m {
                let v = self.couplings[j * self.m + k];
                if v != 0.0 {
                    terms.push((j, k, v));
                }
            }
        }
        terms
    }

    /// Largest absolute coupling or field; zero for an empty model.
    pub fn max_abs_coefficient(&self) -> f64 {
        self.couplings
            .iter()
            .chain(self.h.iter())
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// Copy with couplings and fields multiplied by `factor`; the constant is kept.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            m: self.m,
            couplings: self.couplings.iter().map(|v| v * factor).collect(),
            h: self.h.iter().map(|v| v * factor).collect(),
            constant: self.constant,
        }
    }

    pub fn evaluate(&self, spins: &[i8]) -> Result<f64, EncodingError> {
        if spins.len() != self.m {
            return Err(EncodingError::DimensionMismatch {
                expected: self.m,
                actual: spins.len(),
            });
        }
        if let Some((index, &value)) = spins.iter().enumerate().find(|(_, &s)| s != 1 && s != -1) {
            return Err(EncodingError::BadSpin { index, value });
        }
        let mut energy = self.constant;
        for j in 0..self.m {
            let wj = f64::from(spins[j]);
            energy += self.h[j] * wj;
            for k in j + 1..self.m {
                energy += self.couplings[j * self.m + k] * wj * f64::from(spins[k]);
            }
        }
        Ok(energy)
    }

    pub fn evaluate_bitstring(&self, bits: Bitstring) -> f64 {
        self.energy_of_index(bits.index(), &self.coupling_terms())
    }

    fn energy_of_index(&self, index: usize, terms: &[(usize, usize, f64)]) -> f64 {
        let spin = |q: usize| if (index >> q) & 1 == 0 { 1.0 } else { -1.0 };
        let mut energy = self.constant;
        for (j, &hj) in self.h.iter().enumerate() {
            if hj != 0.0 {
                energy += hj * spin(j);
            }
        }
        for &(j, k, v) in terms {
            energy += v * spin(j) * spin(k);
        }
        energy
    }

    /// Energy of every computational basis state, indexed like a statevector.
    pub fn diagonal(&self) -> Vec<f64> {
        let terms = self.coupling_terms();
        (0..1usize << self.m)
            .map(|index| self.energy_of_index(index, &terms))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ising model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, EncodingError> {
        serde_json::from_str(text).map_err(|e| EncodingError::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }
}

/// Exchange format: `{"m": 2, "h": [..], "J": [[0, 1, 0.5], ..], "const": -0.5}`.
#[derive(Serialize, Deserialize)]
struct IsingJson {
    m: usize,
    h: Vec<f64>,
    #[serde(rename = "J")]
    couplings: Vec<(usize, usize, f64)>,
    #[serde(rename = "const")]
    constant: f64,
}

impl From<IsingModel> for IsingJson {
    fn from(model: IsingModel) -> Self {
        Self {
            m: model.m,
            couplings: model.coupling_terms(),
            h: model.h,
            constant: model.constant,
        }
    }
}

impl TryFrom<IsingJson> for IsingModel {
    type Error = String;

    fn try_from(json: IsingJson) -> Result<Self, Self::Error> {
        if json.h.len() != json.m {
            return Err(format!("h has {} entries, expected {}", json.h.len(), json.m));
        }
        let mut model = IsingModel::zeros(json.m);
        model.h = json.h;
        model.constant = json.constant;
        for (j, k, v) in json.couplings {
            if j >= k || k >= json.m {
                return Err(format!("coupling ({j}, {k}) must satisfy j < k < m"));
            }
            model.add_coupling(j, k, v);
        }
        Ok(model)
    }
}

/// Substitutes `x = (ω + 1) / 2` into `xᵀQx + offset`.
pub fn qubo_to_ising(qubo: &QuboInstance) -> IsingModel {
    let m = qubo.num_vars();
    let mut model = IsingModel::zeros(m);
    let mut constant = qubo.offset;
    for j in 0..m {
        let row_sum: f64 = (0..m).map(|k| qubo.get(j, k)).sum();
        model.h[j] = row_sum / 2.0;
        constant += row_sum / 4.0 + qubo.get(j, j) / 4.0;
        for k in j + 1..m {
            model.couplings[j * m + k] = qubo.get(j, k) / 2.0;
        }
    }
    model.constant = constant;
    model
}

/// Closed-form Ising coefficients of the exact-cover penalty objective:
/// `J_jk = (D/2) Σ_i b_ij b_ik`, `h_j = (D/2) Σ_i b_ij (Σ_k b_ik − 2) + c_j/2`,
/// `const = (D/4) Σ_i (Σ_j b_ij − 2)² + Σ_j c_j/2 + Σ_j J_jj/2`.
pub fn mcec_to_ising_direct(
    mcec: &McecInstance,
    penalty: Penalty,
) -> Result<IsingModel, EncodingError> {
    let d = penalty.resolve(mcec)?;
    let m = mcec.num_subsets();
    let b = mcec.membership();
    let mut model = IsingModel::zeros(m);
    let row_sums: Vec<f64> = b
        .iter()
        .map(|row| row.iter().filter(|&&x| x).count() as f64)
        .collect();

    let mut diagonal_half = 0.0;
    for j in 0..m {
        let mut hj = 0.0;
        let mut jjj = 0.0;
        for (i, row) in b.iter().enumerate() {
            if row[j] {
                hj += row_sums[i] - 2.0;
                jjj += 1.0;
            }
        }
        model.h[j] = d / 2.0 * hj + mcec.costs()[j] / 2.0;
        diagonal_half += d / 2.0 * jjj / 2.0;
        for k in j + 1..m {
            let shared = b.iter().filter(|row| row[j] && row[k]).count() as f64;
            model.couplings[j * m + k] = d / 2.0 * shared;
        }
    }
    let square_terms: f64 = row_sums.iter().map(|s| (s - 2.0).powi(2)).sum();
    model.constant = d / 4.0 * square_terms + mcec.total_cost() / 2.0 + diagonal_half;
    Ok(model)
}

fn check_cap(model: &IsingModel, cap: usize) -> Result<(), EncodingError> {
    if model.num_spins() > cap {
        return Err(EncodingError::TooLarge {
            m: model.num_spins(),
            cap,
        });
    }
    Ok(())
}

fn strictly_below(candidate: f64, best: f64) -> bool {
    candidate < best - 1e-12 * (1.0 + best.abs())
}

/// Exhaustive minimizer. Degenerate optima resolve to the smallest bitstring.
pub fn brute_force_ground_state(
    model: &IsingModel,
    cap: usize,
) -> Result<GroundState, EncodingError> {
    energy_extremes(model, cap).map(|e| e.ground)
}

/// Exhaustive minimum and maximum energy.
pub fn energy_extremes(model: &IsingModel, cap: usize) -> Result<Extremes, EncodingError> {
    check_cap(model, cap)?;
    let m = model.num_spins();
    let terms = model.coupling_terms();
    let mut best_index = 0;
    let mut best = model.energy_of_index(0, &terms);
    let mut worst = best;
    for index in 1..1usize << m {
        let e = model.energy_of_index(index, &terms);
        if strictly_below(e, best) {
            best = e;
            best_index = index;
        }
        worst = worst.max(e);
    }
    Ok(Extremes {
        ground: GroundState {
            bitstring: Bitstring::new(best_index, m),
            energy: best,
        },
        max_energy: worst,
    })
}
