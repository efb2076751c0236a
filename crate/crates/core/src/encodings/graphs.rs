//! Enumeration of simple graphs up to isomorphism.
//!
//! Graphs on `n` vertices are grown from every graph on `n − 1` vertices by
//! attaching a new vertex to each subset of the old ones, then deduplicated by
//! canonical code. The canonical code is the lexicographically largest
//! upper-triangle adjacency string over all relabelings that list vertices in
//! non-increasing degree order; degree classes are isomorphism invariant, so
//! restricting to them keeps the code canonical.

use std::collections::BTreeSet;

use super::MaxCutInstance;

/// Largest vertex count the `u64` canonical code supports.
pub const MAX_NODES: usize = 11;

fn pair_bit(n: usize, a: usize, b: usize) -> u32 {
    // Position of pair (a, b), a < b, in row-major upper-triangle order; the
    // first pair maps to the most significant used bit.
    let index = a * n - a * (a + 1) / 2 + (b - a - 1);
    let total = n * (n - 1) / 2;
    (total - 1 - index) as u32
}

fn adjacency(graph: &MaxCutInstance) -> Vec<Vec<bool>> {
    let n = graph.num_nodes();
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in graph.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    adj
}

fn code_of(adj: &[Vec<bool>], order: &[usize]) -> u64 {
    let n = order.len();
    let mut code = 0u64;
    for a in 0..n {
        for b in a + 1..n {
            if adj[order[a]][order[b]] {
                code |= 1 << pair_bit(n, a, b);
            }
        }
    }
    code
}

/// Canonical isomorphism code of `graph`.
pub fn canonical_code(graph: &MaxCutInstance) -> u64 {
    let n = graph.num_nodes();
    assert!(n <= MAX_NODES, "canonical codes support at most {MAX_NODES} nodes");
    let adj = adjacency(graph);
    let degree: Vec<usize> = adj.iter().map(|row| row.iter().filter(|&&x| x).count()).collect();
    let mut vertices: Vec<usize> = (0..n).collect();
    vertices.sort_by(|a, b| degree[*b].cmp(&degree[*a]));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in vertices {
        match classes.last_mut() {
            Some(class) if degree[class[0]] == degree[v] => class.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let mut best = 0u64;
    let mut order = Vec::with_capacity(n);
    search(&adj, &classes, 0, &mut order, &mut vec![false; n], &mut best);
    best
}

fn search(
    adj: &[Vec<bool>],
    classes: &[Vec<usize>],
    class: usize,
    order: &mut Vec<usize>,
    used: &mut Vec<bool>,
    best: &mut u64,
) {
    if class == classes.len() {
        *best = (*best).max(code_of(adj, order));
        return;
    }
    let members = &classes[class];
    let placed_in_class = members.iter().filter(|&&v| used[v]).count();
    if placed_in_class == members.len() {
        search(adj, classes, class + 1, order, used, best);
        return;
    }
    for &v in members {
        if used[v] {
            continue;
        }
        used[v] = true;
        order.push(v);
        search(adj, classes, class, order, used, best);
        order.pop();
        used[v] = false;
    }
}

/// Rebuilds the graph whose canonical labelling has the given code.
pub fn from_code(n: usize, code: u64) -> MaxCutInstance {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if code >> pair_bit(n, a, b) & 1 == 1 {
                edges.push((a, b));
            }
        }
    }
    MaxCutInstance::new(n, &edges).expect("decoded edges are simple")
}

/// All graphs on `n` vertices up to isomorphism, connected or not, ordered
/// by canonical code.
pub fn all_graphs(n: usize) -> Vec<MaxCutInstance> {
    assert!(n <= MAX_NODES);
    let mut codes: BTreeSet<u64> = BTreeSet::new();
    if n <= 1 {
        codes.insert(0);
    } else {
        for base in all_graphs(n - 1) {
            for mask in 0..1usize << (n - 1) {
                let mut edges: Vec<(usize, usize)> = base.edges().to_vec();
                edges.extend((0..n - 1).filter(|v| mask >> v & 1 == 1).map(|v| (v, n - 1)));
                let graph = MaxCutInstance::new(n, &edges).expect("extension is simple");
                codes.insert(canonical_code(&graph));
            }
        }
    }
    codes.into_iter().map(|code| from_code(n, code)).collect()
}

/// All connected graphs on `n` vertices up to isomorphism.
pub fn connected_graphs(n: usize) -> Vec<MaxCutInstance> {
    all_graphs(n).into_iter().filter(|g| g.is_connected()).collect()
}

/// Connected non-isomorphic graphs for every size in `min..=max`.
pub fn connected_graphs_between(min: usize, max: usize) -> Vec<MaxCutInstance> {
    (min..=max).flat_map(connected_graphs).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21]);
        let all: Vec<usize> = (1..=5).map(|n| all_graphs(n).len()).collect();
        assert_eq!(all, vec![1, 2, 4, 11, 34]);
    }

    #[test]
    fn relabeling_preserves_code() {
        let a = MaxCutInstance::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = MaxCutInstance::new(4, &[(3, 0), (0, 2), (2, 1)]).unwrap();
        assert_eq!(canonical_code(&a), canonical_code(&b));
        let star = MaxCutInstance::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_ne!(canonical_code(&a), canonical_code(&star));
    }

    #[test]
    fn decoded_graph_has_same_code() {
        for g in all_graphs(5) {
            let code = canonical_code(&g);
            assert_eq!(canonical_code(&from_code(5, code)), code);
        }
    }
}
