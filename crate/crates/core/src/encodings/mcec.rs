use serde::{Deserialize, Serialize};

use super::EncodingError;

/// Minimum cost exact cover: pick subsets so that every element is covered
/// exactly once and the summed subset cost is minimal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McecInstance {
    /// `membership[i][j]` is true iff subset `j` contains element `i`.
    membership: Vec<Vec<bool>>,
    costs: Vec<f64>,
    /// Label of each element, e.g. the flight leg id it came from.
    pub element_labels: Vec<String>,
    /// Label of each subset, e.g. the pairing it came from.
    pub subset_labels: Vec<String>,
}

impl McecInstance {
    /// Builds an instance from explicit subsets of `0..n`.
    pub fn from_subsets(
        n: usize,
        subsets: &[Vec<usize>],
        costs: Vec<f64>,
    ) -> Result<Self, EncodingError> {
        if subsets.len() != costs.len() {
            return Err(EncodingError::DimensionMismatch {
                expected: subsets.len(),
                actual: costs.len(),
            });
        }
        let mut membership = vec![vec![false; subsets.len()]; n];
        for (j, subset) in subsets.iter().enumerate() {
            for &i in subset {
                if i >= n {
                    return Err(EncodingError::Invalid(format!(
                        "subset {j} references element {i} but n = {n}"
                    )));
                }
                membership[i][j] = true;
            }
        }
        Self::from_membership(membership, costs, subsets.len())
    }

    /// Builds an instance from an `n x m` membership matrix.
    pub fn from_membership(
        membership: Vec<Vec<bool>>,
        costs: Vec<f64>,
        m: usize,
    ) -> Result<Self, EncodingError> {
        if costs.len() != m {
            return Err(EncodingError::DimensionMismatch {
                expected: m,
                actual: costs.len(),
            });
        }
        if let Some(row) = membership.iter().find(|row| row.len() != m) {
            return Err(EncodingError::DimensionMismatch {
                expected: m,
                actual: row.len(),
            });
        }
        if let Some(c) = costs.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(EncodingError::Invalid(format!(
                "subset costs must be finite and nonnegative, got {c}"
            )));
        }
        let n = membership.len();
        Ok(Self {
            membership,
            costs,
            element_labels: (0..n).map(|i| format!("a{}", i + 1)).collect(),
            subset_labels: (0..m).map(|j| format!("s{}", j + 1)).collect(),
        })
    }

    pub fn with_labels(mut self, elements: Vec<String>, subsets: Vec<String>) -> Self {
        assert_eq!(elements.len(), self.num_elements());
        assert_eq!(subsets.len(), self.num_subsets());
        self.element_labels = elements;
        self.subset_labels = subsets;
        self
    }

    pub fn num_elements(&self) -> usize {
        self.membership.len()
    }

    pub fn num_subsets(&self) -> usize {
        self.costs.len()
    }

    pub fn contains(&self, element: usize, subset: usize) -> bool {
        self.membership[element][subset]
    }

    pub fn membership(&self) -> &[Vec<bool>] {
        &self.membership
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    /// Elements of subset `j`.
    pub fn subset(&self, j: usize) -> Vec<usize> {
        (0..self.num_elements())
            .filter(|&i| self.membership[i][j])
            .collect()
    }

    /// How many selected subsets cover each element.
    pub fn coverage(&self, selection: &[bool]) -> Vec<usize> {
        self.membership
            .iter()
            .map(|row| {
                row.iter()
                    .zip(selection)
                    .filter(|(&b, &x)| b && x)
                    .count()
            })
            .collect()
    }

    pub fn is_exact_cover(&self, selection: &[bool]) -> bool {
        selection.len() == self.num_subsets() && self.coverage(selection).iter().all(|&c| c == 1)
    }

    pub fn selection_cost(&self, selection: &[bool]) -> f64 {
        self.costs
            .iter()
            .zip(selection)
            .filter(|(_, &x)| x)
            .map(|(c, _)| c)
            .sum()
    }

    pub fn total_cost(&self) -> f64 {
        self.costs.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> McecInstance {
        McecInstance::from_subsets(2, &[vec![0], vec![1], vec![0, 1]], vec![1.0, 1.0, 3.0]).unwrap()
    }

    #[test]
    fn exact_cover_checks() {
        let mcec = example();
        assert!(mcec.is_exact_cover(&[true, true, false]));
        assert!(mcec.is_exact_cover(&[false, false, true]));
        assert!(!mcec.is_exact_cover(&[true, false, true]));
        assert!(!mcec.is_exact_cover(&[false, false, false]));
        assert_eq!(mcec.selection_cost(&[true, true, false]), 2.0);
    }

    #[test]
    fn rejects_out_of_range_elements() {
        assert!(McecInstance::from_subsets(1, &[vec![3]], vec![1.0]).is_err());
        assert!(McecInstance::from_subsets(1, &[vec![0]], vec![]).is_err());
        assert!(McecInstance::from_subsets(1, &[vec![0]], vec![-1.0]).is_err());
    }

    #[test]
    fn empty_family() {
        let mcec = McecInstance::from_subsets(1, &[], vec![]).unwrap();
        assert_eq!(mcec.num_subsets(), 0);
        assert!(!mcec.is_exact_cover(&[]));
    }
}
