use std::collections::{BTreeMap, BTreeSet};

use super::{CostModel, Duty, FlightLeg, Pairing, RuleConfig};

/// Every rule-valid duty over the given legs.
///
/// Legs are grouped by departure date and chained depth-first; duty length,
/// duration and block time only grow along a chain, so a chain is abandoned
/// as soon as one of them exceeds its cap.
pub fn generate_duties(legs: &[FlightLeg], rules: &RuleConfig) -> Vec<Duty> {
    let mut by_day: BTreeMap<i64, Vec<&FlightLeg>> = BTreeMap::new();
    for leg in legs {
        by_day.entry(leg.departure.day()).or_default().push(leg);
    }
    let mut duties = Vec::new();
    for day_legs in by_day.values_mut() {
        day_legs.sort_by(|a, b| (a.departure, &a.id).cmp(&(b.departure, &b.id)));
        for start in 0..day_legs.len() {
            let mut chain = vec![start];
            extend_duty(day_legs, rules, &mut chain, &mut duties);
        }
    }
    duties.sort_by(|a, b| a.leg_ids().cmp(&b.leg_ids()));
    duties
}

fn extend_duty(legs: &[&FlightLeg], rules: &RuleConfig, chain: &mut Vec<usize>, out: &mut Vec<Duty>) {
    let first = legs[chain[0]];
    let last = legs[*chain.last().expect("nonempty chain")];
    let duration = (last.arrival.minutes() - first.departure.minutes()) as f64;
    let work: i64 = chain.iter().map(|&i| legs[i].block_minutes()).sum();
    if chain.len() > rules.max_flights || duration > rules.max_duty() || work as f64 > rules.max_work() {
        return;
    }
    out.push(Duty::new(chain.iter().map(|&i| legs[i].clone()).collect()));
    for next in 0..legs.len() {
        let candidate = legs[next];
        let gap = (candidate.departure.minutes() - last.arrival.minutes()) as f64;
        if candidate.departure_airport == last.arrival_airport && gap >= rules.min_connect() {
            chain.push(next);
            extend_duty(legs, rules, chain, out);
            chain.pop();
        }
    }
}

/// Every rule-valid pairing built from `duties`, priced by `cost`.
pub fn generate_pairings(
    duties: &[Duty],
    home_bases: &BTreeSet<String>,
    rules: &RuleConfig,
    cost: &CostModel,
) -> Vec<Pairing> {
    let mut order: Vec<&Duty> = duties.iter().collect();
    order.sort_by(|a, b| (a.start(), a.leg_ids()).cmp(&(b.start(), b.leg_ids())));
    let mut pairings = Vec::new();
    for (start, duty) in order.iter().enumerate() {
        if home_bases.contains(duty.origin()) {
            let mut chain = vec![start];
            extend_pairing(&order, rules, &mut chain, &mut pairings);
        }
    }
    for pairing in &mut pairings {
        pairing.cost = cost.pairing_cost(pairing);
    }
    pairings.sort_by(|a, b| a.leg_ids().cmp(&b.leg_ids()));
    pairings
}

fn extend_pairing(duties: &[&Duty], rules: &RuleConfig, chain: &mut Vec<usize>, out: &mut Vec<Pairing>) {
    let first = duties[chain[0]];
    let last = duties[*chain.last().expect("nonempty chain")];
    let span = (last.end().minutes() - first.start().minutes()) as f64;
    if chain.len() > rules.max_duties || span > rules.max_pairing() {
        return;
    }
    if last.destination() == first.origin() {
        out.push(Pairing {
            duties: chain.iter().map(|&i| duties[i].clone()).collect(),
            home_base: first.origin().to_string(),
            cost: 0.0,
        });
    }
    for next in 0..duties.len() {
        let candidate = duties[next];
        let rest = (candidate.start().minutes() - last.end().minutes()) as f64;
        if candidate.origin() == last.destination() && rest >= rules.min_rest() {
            chain.push(next);
            extend_pairing(duties, rules, chain, out);
            chain.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::Timestamp;
    use super::*;

    fn leg(id: &str, from: &str, to: &str, dep: (u32, u32, u32), arr: (u32, u32, u32)) -> FlightLeg {
        FlightLeg::new(
            id,
            from,
            to,
            Timestamp::from_ymd_hm(2024, 3, dep.0, dep.1, dep.2),
            Timestamp::from_ymd_hm(2024, 3, arr.0, arr.1, arr.2),
        )
        .unwrap()
    }

    fn ids(duties: &[Duty]) -> Vec<Vec<&str>> {
        duties.iter().map(|d| d.leg_ids()).collect()
    }

    #[test]
    fn short_connection_blocks_chain() {
        let legs = vec![
            leg("1", "A", "B", (4, 8, 0), (4, 9, 0)),
            leg("2", "B", "A", (4, 9, 20), (4, 10, 20)),
        ];
        let strict = generate_duties(&legs, &RuleConfig::default());
        assert_eq!(ids(&strict), vec![vec!["1"], vec!["2"]]);
        let relaxed = RuleConfig {
            min_connect_minutes: 15.0,
            ..RuleConfig::default()
        };
        assert_eq!(
            ids(&generate_duties(&legs, &relaxed)),
            vec![vec!["1"], vec!["1", "2"], vec!["2"]]
        );
    }

    #[test]
    fn empty_schedule() {
        assert!(generate_duties(&[], &RuleConfig::default()).is_empty());
    }

    #[test]
    fn round_trip_duty_is_a_pairing() {
        let legs = vec![
            leg("1", "A", "B", (4, 8, 0), (4, 9, 0)),
            leg("2", "B", "A", (4, 10, 0), (4, 11, 0)),
        ];
        let rules = RuleConfig::default();
        let duties = generate_duties(&legs, &rules);
        let bases = BTreeSet::from(["A".to_string()]);
        let pairings = generate_pairings(&duties, &bases, &rules, &CostModel::default());
        assert_eq!(pairings.len(), 1);
        assert_eq!(pairings[0].leg_ids(), vec!["1", "2"]);
        assert_eq!(pairings[0].duties.len(), 1);
        assert_eq!(pairings[0].cost, 0.0);
    }

    #[test]
    fn overnight_rest_threshold() {
        // 20:00 arrival, 06:00 departure: a 10 hour rest away from base.
        let legs = vec![
            leg("1", "A", "B", (4, 18, 0), (4, 20, 0)),
            leg("2", "B", "A", (5, 6, 0), (5, 8, 0)),
        ];
        let bases = BTreeSet::from(["A".to_string()]);
        let rules = RuleConfig::default();
        let duties = generate_duties(&legs, &rules);
        let pairings = generate_pairings(&duties, &bases, &rules, &CostModel::default());
        assert_eq!(pairings.len(), 1);
        assert_eq!(pairings[0].duties.len(), 2);
        assert_eq!(pairings[0].cost, 100.0);

        let strict = RuleConfig {
            min_rest_hours: 11.0,
            ..RuleConfig::default()
        };
        assert!(generate_pairings(&duties, &bases, &strict, &CostModel::default()).is_empty());
    }

    #[test]
    fn outstation_duty_without_return_yields_nothing() {
        let legs = vec![leg("1", "B", "C", (4, 8, 0), (4, 9, 0))];
        let rules = RuleConfig::default();
        let duties = generate_duties(&legs, &rules);
        let bases = BTreeSet::from(["A".to_string()]);
        assert!(generate_pairings(&duties, &bases, &rules, &CostModel::default()).is_empty());
    }

    #[test]
    fn outputs_satisfy_every_rule() {
        let legs = vec![
            leg("1", "A", "B", (4, 7, 0), (4, 8, 30)),
            leg("2", "B", "A", (4, 9, 15), (4, 10, 45)),
            leg("3", "A", "C", (4, 12, 0), (4, 12, 50)),
            leg("4", "C", "A", (4, 13, 30), (4, 14, 20)),
            leg("5", "A", "D", (4, 18, 30), (4, 19, 30)),
            leg("6", "D", "A", (5, 7, 0), (5, 8, 0)),
        ];
        let rules = RuleConfig::default();
        let bases = BTreeSet::from(["A".to_string()]);
        let duties = generate_duties(&legs, &rules);
        for duty in &duties {
            assert!(rules.check_duty(duty).is_empty(), "{:?}", duty.leg_ids());
        }
        for pairing in generate_pairings(&duties, &bases, &rules, &CostModel::default()) {
            assert!(rules.check_pairing(&pairing.duties, &bases).is_empty());
        }
    }
}
