use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{generate_duties, generate_pairings, AcpError, CostModel, FlightLeg, Pairing, RuleConfig, Schedule};
use crate::encodings::McecInstance;

/// A crew pairing instance: the legs to cover and the priced candidate pairings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcpInstance {
    pub legs: Vec<FlightLeg>,
    pub home_bases: BTreeSet<String>,
    pub rules: RuleConfig,
    pub cost_model: CostModel,
    pub pairings: Vec<Pairing>,
}

impl AcpInstance {
    /// Enumerates duties and pairings for `schedule` under `rules`.
    pub fn from_schedule(schedule: Schedule, rules: RuleConfig, cost_model: CostModel) -> Result<Self, AcpError> {
        rules.validate()?;
        let duties = generate_duties(&schedule.legs, &rules);
        let pairings = generate_pairings(&duties, &schedule.home_bases, &rules, &cost_model);
        let instance = Self {
            legs: schedule.legs,
            home_bases: schedule.home_bases,
            rules,
            cost_model,
            pairings,
        };
        instance.validate()?;
        Ok(instance)
    }

    pub fn validate(&self) -> Result<(), AcpError> {
        let ids: BTreeSet<&str> = self.legs.iter().map(|l| l.id.as_str()).collect();
        if ids.len() != self.legs.len() {
            return Err(AcpError::Invalid("duplicate leg ids".into()));
        }
        for (j, pairing) in self.pairings.iter().enumerate() {
            if let Some(missing) = pairing.leg_ids().into_iter().find(|id| !ids.contains(id)) {
                return Err(AcpError::Invalid(format!(
                    "pairing {j} references unknown leg {missing}"
                )));
            }
        }
        Ok(())
    }

    /// Self-contained JSON: legs, bases, rules, cost model and pairings.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, AcpError> {
        let instance: Self = serde_json::from_str(text).map_err(|e| AcpError::Parse {
            line: e.line(),
            field: "json".into(),
            message: e.to_string(),
        })?;
        instance.validate()?;
        Ok(instance)
    }

    pub fn pairing_label(j: usize) -> String {
        format!("P{}", j + 1)
    }
}

/// Legs become elements, pairings become subsets priced at the pairing cost.
pub fn acp_to_mcec(instance: &AcpInstance) -> McecInstance {
    let index: HashMap<&str, usize> = instance
        .legs
        .iter()
        .enumerate()
        .map(|(i, l)| (l.id.as_str(), i))
        .collect();
    let subsets: Vec<Vec<usize>> = instance
        .pairings
        .iter()
        .map(|p| p.leg_ids().into_iter().map(|id| index[id]).collect())
        .collect();
    let costs = instance.pairings.iter().map(|p| p.cost).collect();
    McecInstance::from_subsets(instance.legs.len(), &subsets, costs)
        .expect("validated pairings reference known legs")
        .with_labels(
            instance.legs.iter().map(|l| l.id.clone()).collect(),
            (0..instance.pairings.len()).map(AcpInstance::pairing_label).collect(),
        )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_instance_structure() {
        let instance =
            AcpInstance::from_schedule(Schedule::toy(), RuleConfig::default(), CostModel::default()).unwrap();
        assert!(!instance.pairings.is_empty());
        assert!(instance.pairings.len() <= 10);
        let mcec = acp_to_mcec(&instance);
        assert_eq!(mcec.num_elements(), 6);
        assert_eq!(mcec.num_subsets(), instance.pairings.len());
        for (j, pairing) in instance.pairings.iter().enumerate() {
            assert_eq!(mcec.subset(j).len(), pairing.leg_ids().len());
            assert_eq!(mcec.costs()[j], pairing.cost);
        }
    }

    #[test]
    fn json_round_trip() {
        let instance =
            AcpInstance::from_schedule(Schedule::toy(), RuleConfig::default(), CostModel::default()).unwrap();
        assert_eq!(AcpInstance::from_json(&instance.to_json()).unwrap(), instance);
    }

    #[test]
    fn empty_pairing_list() {
        let instance = AcpInstance {
            legs: Schedule::toy().legs,
            home_bases: BTreeSet::new(),
            rules: RuleConfig::default(),
            cost_model: CostModel::default(),
            pairings: vec![],
        };
        let mcec = acp_to_mcec(&instance);
        assert_eq!(mcec.num_subsets(), 0);
        assert_eq!(mcec.num_elements(), 6);
    }
}
