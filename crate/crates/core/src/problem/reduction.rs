use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use super::{Form, ProblemError, ProblemInstance, ACP, ISING, MAXCUT, MCEC, QUBO};
use crate::acp::acp_to_mcec;
use crate::encodings::{maxcut_to_ising, mcec_to_ising_direct, mcec_to_qubo, qubo_to_ising, Penalty};

pub type Transform = Arc<dyn Fn(&Form) -> Result<Form, String> + Send + Sync>;

/// One-way conversion between two forms.
#[derive(Clone)]
pub struct ReductionEdge {
    pub name: String,
    pub source: String,
    pub target: String,
    transform: Transform,
}

impl fmt::Debug for ReductionEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.name, self.source, self.target)
    }
}

impl ReductionEdge {
    pub fn new(
        name: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
        transform: impl Fn(&Form) -> Result<Form, String> + Send + Sync + 'static,
    ) -> Result<Self, ProblemError> {
        let (source, target) = (source.into(), target.into());
        if source == target {
            return Err(ProblemError::SameForm(source));
        }
        Ok(Self {
            name: name.into(),
            source,
            target,
            transform: Arc::new(transform),
        })
    }

    pub fn apply(&self, form: &Form) -> Result<Form, ProblemError> {
        if form.name() != self.source {
            return Err(ProblemError::Reduction {
                reduction: self.name.clone(),
                message: format!("expected a `{}` form, got `{}`", self.source, form.name()),
            });
        }
        (self.transform)(form).map_err(|message| ProblemError::Reduction {
            reduction: self.name.clone(),
            message,
        })
    }

    pub fn acp_to_mcec() -> Self {
        Self::new("acp-mcec", ACP, MCEC, |form| match form {
            Form::Acp(acp) => Ok(Form::Mcec(acp_to_mcec(acp))),
            _ => unreachable!("source checked by apply"),
        })
        .expect("distinct forms")
    }

    pub fn mcec_to_qubo(penalty: Penalty) -> Self {
        Self::new("mcec-qubo", MCEC, QUBO, move |form| match form {
            Form::Mcec(mcec) => mcec_to_qubo(mcec, penalty).map(Form::Qubo).map_err(|e| e.to_string()),
            _ => unreachable!("source checked by apply"),
        })
        .expect("distinct forms")
    }

    pub fn qubo_to_ising() -> Self {
        Self::new("qubo-ising", QUBO, ISING, |form| match form {
            Form::Qubo(qubo) => Ok(Form::Ising(qubo_to_ising(qubo))),
            _ => unreachable!("source checked by apply"),
        })
        .expect("distinct forms")
    }

    pub fn mcec_to_ising_direct(penalty: Penalty) -> Self {
        Self::new("mcec-ising-direct", MCEC, ISING, move |form| match form {
            Form::Mcec(mcec) => mcec_to_ising_direct(mcec, penalty)
                .map(Form::Ising)
                .map_err(|e| e.to_string()),
            _ => unreachable!("source checked by apply"),
        })
        .expect("distinct forms")
    }

    pub fn maxcut_to_ising() -> Self {
        Self::new("maxcut-ising", MAXCUT, ISING, |form| match form {
            Form::MaxCut(graph) => Ok(Form::Ising(maxcut_to_ising(graph))),
            _ => unreachable!("source checked by apply"),
        })
        .expect("distinct forms")
    }
}

/// The reductions active without any configuration.
pub fn builtin_reductions() -> Vec<ReductionEdge> {
    vec![
        ReductionEdge::acp_to_mcec(),
        ReductionEdge::mcec_to_qubo(Penalty::Auto),
        ReductionEdge::qubo_to_ising(),
        ReductionEdge::maxcut_to_ising(),
    ]
}

/// Minimum-hop path by breadth-first search. Outgoing edges are expanded in
/// order of target form name (then reduction name), so equal-length
/// alternatives always resolve the same way.
pub fn find_reduction_path(
    from: &str,
    to: &str,
    edges: &[ReductionEdge],
) -> Result<Vec<ReductionEdge>, ProblemError> {
    if from == to {
        return Ok(Vec::new());
    }
    let mut outgoing: BTreeMap<&str, Vec<&ReductionEdge>> = BTreeMap::new();
    for edge in edges {
        outgoing.entry(edge.source.as_str()).or_default().push(edge);
    }
    for list in outgoing.values_mut() {
        list.sort_by(|a, b| (&a.target, &a.name).cmp(&(&b.target, &b.name)));
    }
    let mut parent: BTreeMap<&str, &ReductionEdge> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    while let Some(node) = queue.pop_front() {
        for edge in outgoing.get(node).into_iter().flatten() {
            let next = edge.target.as_str();
            if next == from || parent.contains_key(next) {
                continue;
            }
            parent.insert(next, edge);
            if next == to {
                let mut path = vec![(*edge).clone()];
                let mut cursor = node;
                while cursor != from {
                    let e = parent[cursor];
                    path.push(e.clone());
                    cursor = &e.source;
                }
                path.reverse();
                return Ok(path);
            }
            queue.push_back(next);
        }
    }
    Err(ProblemError::NoPath {
        from: from.into(),
        to: to.into(),
    })
}

/// Adds the target form, and every intermediate form on the shortest path
/// from the instance's original form, to a copy of `instance`. Forms that
/// are already present are reused rather than recomputed.
pub fn convert(
    instance: &ProblemInstance,
    to: &str,
    edges: &[ReductionEdge],
) -> Result<ProblemInstance, ProblemError> {
    let mut out = instance.clone();
    if out.has_form(to) {
        return Ok(out);
    }
    for edge in find_reduction_path(instance.original_form(), to, edges)? {
        if out.has_form(&edge.target) {
            continue;
        }
        let source = out
            .form(&edge.source)
            .ok_or_else(|| ProblemError::MissingForm(edge.source.clone()))?;
        let produced = edge.apply(source)?;
        out.add_form(produced)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acp::{AcpInstance, CostModel, RuleConfig, Schedule};
    use crate::encodings::{IsingModel, MaxCutInstance};

    fn stub(source: &str, target: &str) -> ReductionEdge {
        let t = target.to_string();
        ReductionEdge::new(format!("{source}-{target}"), source, target, move |_| {
            Err(format!("stub {t}"))
        })
        .unwrap()
    }

    fn names(path: &[ReductionEdge]) -> Vec<String> {
        path.iter().map(|e| e.name.clone()).collect()
    }

    #[test]
    fn acp_to_ising_takes_three_hops() {
        let path = find_reduction_path(ACP, ISING, &builtin_reductions()).unwrap();
        assert_eq!(names(&path), vec!["acp-mcec", "mcec-qubo", "qubo-ising"]);
        assert!(find_reduction_path(ISING, ISING, &builtin_reductions()).unwrap().is_empty());
    }

    #[test]
    fn one_way_edges() {
        let edges = [stub("a", "b")];
        assert!(matches!(
            find_reduction_path("b", "a", &edges),
            Err(ProblemError::NoPath { .. })
        ));
        assert!(ReductionEdge::new("x", "a", "a", |f| Ok(f.clone())).is_err());
    }

    #[test]
    fn ties_break_on_target_name() {
        // a -> c -> z and a -> b -> z are both two hops; b sorts first.
        let edges = [stub("a", "c"), stub("c", "z"), stub("a", "b"), stub("b", "z")];
        assert_eq!(names(&find_reduction_path("a", "z", &edges).unwrap()), vec!["a-b", "b-z"]);
    }

    #[test]
    fn direct_reduction_shortens_the_path() {
        let mut edges = builtin_reductions();
        edges.push(ReductionEdge::mcec_to_ising_direct(Penalty::Auto));
        let path = find_reduction_path(ACP, ISING, &edges).unwrap();
        assert_eq!(names(&path), vec!["acp-mcec", "mcec-ising-direct"]);
    }

    #[test]
    fn convert_keeps_every_form() {
        let acp = AcpInstance::from_schedule(Schedule::toy(), RuleConfig::default(), CostModel::default()).unwrap();
        let instance = ProblemInstance::new("toy", Form::Acp(acp.clone())).unwrap();
        let converted = convert(&instance, ISING, &builtin_reductions()).unwrap();
        assert_eq!(converted.form_names().collect::<Vec<_>>(), vec![ACP, ISING, MCEC, QUBO]);
        assert_eq!(converted.acp(), Some(&acp));
        assert_eq!(converted.ising().unwrap().num_spins(), acp.pairings.len());
        assert_eq!(convert(&converted, ISING, &[]).unwrap(), converted);
    }

    #[test]
    fn maxcut_converts_with_zero_fields() {
        let graph = MaxCutInstance::path(3);
        let instance = ProblemInstance::new("p3", Form::MaxCut(graph)).unwrap();
        let model: IsingModel = convert(&instance, ISING, &builtin_reductions()).unwrap().ising().unwrap().clone();
        assert!(model.fields().iter().all(|&h| h == 0.0));
        assert_eq!(model.coupling(0, 1), 0.5);
        assert_eq!(model.coupling(1, 2), 0.5);
        assert_eq!(model.coupling(0, 2), 0.0);
        assert_eq!(model.constant, -1.0);
    }

    #[test]
    fn apply_rejects_wrong_source() {
        let err = ReductionEdge::qubo_to_ising()
            .apply(&Form::Ising(IsingModel::zeros(1)))
            .unwrap_err();
        assert!(matches!(err, ProblemError::Reduction { .. }));
    }
}
