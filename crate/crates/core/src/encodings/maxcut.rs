use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Bitstring, EncodingError, IsingModel};

/// Unweighted, undirected simple graph for MaxCut.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MaxCutInstance {
    nodes: usize,
    /// Normalized `(u, v)` with `u < v`, sorted.
    edges: Vec<(usize, usize)>,
}

impl MaxCutInstance {
    pub fn new(nodes: usize, edges: &[(usize, usize)]) -> Result<Self, EncodingError> {
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            if u == v {
                return Err(EncodingError::Invalid(format!("self-loop on node {u}")));
            }
            if u >= nodes || v >= nodes {
                return Err(EncodingError::Invalid(format!(
                    "edge ({u}, {v}) out of range for {nodes} nodes"
                )));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(EncodingError::Invalid(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(Self {
            nodes,
            edges: seen.into_iter().collect(),
        })
    }

    pub fn complete(nodes: usize) -> Self {
        let edges: Vec<_> = (0..nodes)
            .flat_map(|u| (u + 1..nodes).map(move |v| (u, v)))
            .collect();
        Self { nodes, edges }
    }

    pub fn path(nodes: usize) -> Self {
        let edges: Vec<_> = (1..nodes).map(|v| (v - 1, v)).collect();
        Self { nodes, edges }
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| u == node || v == node)
            .count()
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes == 0 {
            return true;
        }
        let mut seen = vec![false; self.nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(a, b) in &self.edges {
                let next = if a == u {
                    b
                } else if b == u {
                    a
                } else {
                    continue;
                };
                if !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Number of edges whose endpoints are measured differently.
    pub fn cut_value(&self, bits: Bitstring) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| bits.bit(u) != bits.bit(v))
            .count()
    }

    /// Exhaustive maximum cut.
    pub fn max_cut(&self) -> usize {
        (0..1usize << self.nodes)
            .map(|index| self.cut_value(Bitstring::new(index, self.nodes)))
            .max()
            .unwrap_or(0)
    }

    /// Parses the `n m` header / `u v` per line edge-list format.
    /// Blank lines and `#` comments are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self, EncodingError> {
        let mut rows = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_pair = |line: usize, l: &str| -> Result<(usize, usize), EncodingError> {
            let fields: Vec<&str> = l.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(EncodingError::Parse {
                    line,
                    message: format!("expected two integers, got {l:?}"),
                });
            }
            let num = |s: &str| {
                s.parse::<usize>().map_err(|e| EncodingError::Parse {
                    line,
                    message: format!("{s:?}: {e}"),
                })
            };
            Ok((num(fields[0])?, num(fields[1])?))
        };
        let (line, header) = rows.next().ok_or(EncodingError::Parse {
            line: 1,
            message: "missing `n m` header".into(),
        })?;
        let (nodes, count) = parse_pair(line, header)?;
        let mut edges = Vec::with_capacity(count);
        for (line, l) in rows {
            edges.push(parse_pair(line, l)?);
        }
        if edges.len() != count {
            return Err(EncodingError::Parse {
                line,
                message: format!("header declares {count} edges, found {}", edges.len()),
            });
        }
        Self::new(nodes, &edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.nodes, self.edges.len());
        for (u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Antiferromagnetic encoding: `J_uv = 1/2` per edge, `h = 0`,
/// `const = −|E|/2`, so the energy of a configuration is minus its cut.
pub fn maxcut_to_ising(graph: &MaxCutInstance) -> IsingModel {
    let mut model = IsingModel::zeros(graph.num_nodes());
    for &(u, v) in graph.edges() {
        model.set_coupling(u, v, 0.5);
    }
    model.constant = -(graph.num_edges() as f64) / 2.0;
    model
}
