use serde::{Deserialize, Serialize};

use super::{EncodingError, McecInstance};

/// Quadratic unconstrained binary optimization: minimize `xᵀQx + offset`.
///
/// `Q` is symmetric. Linear terms live on the diagonal (`x_j² = x_j`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuboInstance {
    m: usize,
    q: Vec<f64>,
    pub offset: f64,
}

/// Scale of the constraint penalty in the exact-cover QUBO.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub enum Penalty {
    /// `1 + Σ_j c_j`: a single violated constraint outweighs every cost.
    #[default]
    Auto,
    Fixed(f64),
}

impl Penalty {
    pub fn resolve(self, mcec: &McecInstance) -> Result<f64, EncodingError> {
        match self {
            Penalty::Auto => Ok(1.0 + mcec.total_cost()),
            Penalty::Fixed(d) if d > 0.0 && d.is_finite() => Ok(d),
            Penalty::Fixed(d) => Err(EncodingError::InvalidPenalty(d)),
        }
    }
}

impl QuboInstance {
    pub fn zeros(m: usize) -> Self {
        Self {
            m,
            q: vec![0.0; m * m],
            offset: 0.0,
        }
    }

    /// Builds from a dense row-major matrix; rejects asymmetric input.
    pub fn from_dense(m: usize, q: Vec<f64>, offset: f64) -> Result<Self, EncodingError> {
        if q.len() != m * m {
            return Err(EncodingError::DimensionMismatch {
                expected: m * m,
                actual: q.len(),
            });
        }
        for j in 0..m {
            for k in 0..j {
                if (q[j * m + k] - q[k * m + j]).abs() > 1e-12 {
                    return Err(EncodingError::Invalid(format!(
                        "Q is not symmetric at ({j}, {k})"
                    )));
                }
            }
        }
        Ok(Self { m, q, offset })
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.q[j * self.m + k]
    }

    /// Adds `value` to the `x_j x_k` term, split symmetrically.
    pub fn add_term(&mut self, j: usize, k: usize, value: f64) {
        if j == k {
            self.q[j * self.m + j] += value;
        } else {
            self.q[j * self.m + k] += value / 2.0;
            self.q[k * self.m + j] += value / 2.0;
        }
    }

    pub fn value(&self, x: &[bool]) -> f64 {
        assert_eq!(x.len(), self.m);
        let mut total = self.offset;
        for j in (0..self.m).filter(|&j| x[j]) {
            for k in (0..self.m).filter(|&k| x[k]) {
                total += self.q[j * self.m + k];
            }
        }
        total
    }
}

/// Penalty formulation of exact cover:
/// `D Σ_i (1 − Σ_j b_ij x_j)² + Σ_j c_j x_j`, expanded into `Q` and `offset`.
pub fn mcec_to_qubo(mcec: &McecInstance, penalty: Penalty) -> Result<QuboInstance, EncodingError> {
    let d = penalty.resolve(mcec)?;
    let m = mcec.num_subsets();
    let mut qubo = QuboInstance::zeros(m);
    qubo.offset = d * mcec.num_elements() as f64;
    for row in mcec.membership() {
        let members: Vec<usize> = (0..m).filter(|&j| row[j]).collect();
        for &j in &members {
            // 1 − 2x_j + x_j² contributes −x_j on the diagonal.
            qubo.q[j * m + j] -= d;
            for &k in &members {
                if k != j {
                    qubo.q[j * m + k] += d;
                }
            }
        }
    }
    for (j, &c) in mcec.costs().iter().enumerate() {
        qubo.q[j * m + j] += c;
    }
    Ok(qubo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> McecInstance {
        McecInstance::from_subsets(2, &[vec![0], vec![1], vec![0, 1]], vec![1.0, 1.0, 3.0]).unwrap()
    }

    fn eq5(mcec: &McecInstance, d: f64, x: &[bool]) -> f64 {
        let penalty: f64 = mcec
            .membership()
            .iter()
            .map(|row| {
                let s: f64 = row
                    .iter()
                    .zip(x)
                    .map(|(&b, &xj)| if b && xj { 1.0 } else { 0.0 })
                    .sum();
                (1.0 - s).powi(2)
            })
            .sum();
        d * penalty + mcec.selection_cost(x)
    }

    fn all_assignments(m: usize) -> impl Iterator<Item = Vec<bool>> {
        (0..1usize << m).map(move |bits| (0..m).map(|j| bits >> j & 1 == 1).collect())
    }

    #[test]
    fn matches_penalty_objective_exhaustively() {
        let mcec = example();
        let qubo = mcec_to_qubo(&mcec, Penalty::Fixed(10.0)).unwrap();
        for x in all_assignments(3) {
            assert!((qubo.value(&x) - eq5(&mcec, 10.0, &x)).abs() < 1e-9);
        }
    }

    #[test]
    fn argmin_of_example() {
        let qubo = mcec_to_qubo(&example(), Penalty::Fixed(10.0)).unwrap();
        let best = all_assignments(3)
            .min_by(|a, b| qubo.value(a).partial_cmp(&qubo.value(b)).unwrap())
            .unwrap();
        assert_eq!(best, vec![true, true, false]);
        assert_eq!(qubo.value(&best), 2.0);
    }

    #[test]
    fn empty_family_is_constant_penalty() {
        let mcec = McecInstance::from_subsets(1, &[], vec![]).unwrap();
        let qubo = mcec_to_qubo(&mcec, Penalty::Fixed(10.0)).unwrap();
        assert_eq!(qubo.num_vars(), 0);
        assert_eq!(qubo.value(&[]), 10.0);
    }

    #[test]
    fn single_subset_cover() {
        let mcec = McecInstance::from_subsets(2, &[vec![0, 1]], vec![5.0]).unwrap();
        let qubo = mcec_to_qubo(&mcec, Penalty::Fixed(10.0)).unwrap();
        assert_eq!(qubo.value(&[true]), 5.0);
        assert_eq!(qubo.value(&[false]), 20.0);
    }

    #[test]
    fn invalid_penalty() {
        assert_eq!(
            mcec_to_qubo(&example(), Penalty::Fixed(0.0)),
            Err(EncodingError::InvalidPenalty(0.0))
        );
        assert!(mcec_to_qubo(&example(), Penalty::Fixed(-2.0)).is_err());
    }

    #[test]
    fn auto_penalty_is_one_plus_total_cost() {
        assert_eq!(Penalty::Auto.resolve(&example()).unwrap(), 6.0);
    }

    #[test]
    fn symmetric_check() {
        assert!(QuboInstance::from_dense(2, vec![1.0, 2.0, 3.0, 4.0], 0.0).is_err());
        assert!(QuboInstance::from_dense(2, vec![1.0, 2.0, 2.0, 4.0], 0.0).is_ok());
    }
}
