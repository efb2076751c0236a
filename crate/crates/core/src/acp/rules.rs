use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{AcpError, Duty};

/// The seven parametric duty and pairing rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RuleConfig {
    /// Most legs in one duty.
    pub max_flights: usize,
    /// Minimum connection between legs of a duty, minutes.
    pub min_connect_minutes: f64,
    /// First departure to last arrival of a duty, hours.
    pub max_duty_hours: f64,
    /// Most duties in one pairing.
    pub max_duties: usize,
    /// Minimum rest between consecutive duties, hours.
    pub min_rest_hours: f64,
    /// First departure to last arrival of a pairing, days.
    pub max_pairing_days: f64,
    /// Summed block time of a duty, hours.
    pub max_work_hours: f64,
}

impl Default for RuleConfig {
    fn default() -> Self {
        Self {
            max_flights: 4,
            min_connect_minutes: 30.0,
            max_duty_hours: 12.0,
            max_duties: 5,
            min_rest_hours: 9.5,
            max_pairing_days: 4.0,
            max_work_hours: 8.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleViolation {
    AirportMismatch { after_leg: String },
    ShortConnection { after_leg: String },
    DifferentDays,
    TooManyFlights,
    DutyTooLong,
    TooMuchWork,
    NotAtHomeBase,
    TooManyDuties,
    ShortRest { after_duty: usize },
    PairingTooLong,
}

impl RuleConfig {
    pub fn validate(&self) -> Result<(), AcpError> {
        let positive = |rule: &'static str, value: f64| {
            if value > 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(AcpError::InvalidRule {
                    rule,
                    message: format!("must be strictly positive, got {value}"),
                })
            }
        };
        positive("max_flights", self.max_flights as f64)?;
        positive("min_connect_minutes", self.min_connect_minutes)?;
        positive("max_duty_hours", self.max_duty_hours)?;
        positive("max_duties", self.max_duties as f64)?;
        positive("min_rest_hours", self.min_rest_hours)?;
        positive("max_pairing_days", self.max_pairing_days)?;
        positive("max_work_hours", self.max_work_hours)
    }

    pub(crate) fn min_connect(&self) -> f64 {
        self.min_connect_minutes
    }

    pub(crate) fn max_duty(&self) -> f64 {
        self.max_duty_hours * 60.0
    }

    pub(crate) fn max_work(&self) -> f64 {
        self.max_work_hours * 60.0
    }

    pub(crate) fn min_rest(&self) -> f64 {
        self.min_rest_hours * 60.0
    }

    pub(crate) fn max_pairing(&self) -> f64 {
        self.max_pairing_days * 24.0 * 60.0
    }

    /// Every duty rule the legs break.
    pub fn check_duty(&self, duty: &Duty) -> Vec<RuleViolation> {
        let mut out = Vec::new();
        for pair in duty.legs.windows(2) {
            if pair[0].arrival_airport != pair[1].departure_airport {
                out.push(RuleViolation::AirportMismatch {
                    after_leg: pair[0].id.clone(),
                });
            }
            let gap = (pair[1].departure.minutes() - pair[0].arrival.minutes()) as f64;
            if gap < self.min_connect() {
                out.push(RuleViolation::ShortConnection {
                    after_leg: pair[0].id.clone(),
                });
            }
        }
        let day = duty.start().day();
        if duty.legs.iter().any(|l| l.departure.day() != day) {
            out.push(RuleViolation::DifferentDays);
        }
        if duty.legs.len() > self.max_flights {
            out.push(RuleViolation::TooManyFlights);
        }
        if duty.duration_minutes() as f64 > self.max_duty() {
            out.push(RuleViolation::DutyTooLong);
        }
        if duty.work_minutes() as f64 > self.max_work() {
            out.push(RuleViolation::TooMuchWork);
        }
        out
    }

    /// Every pairing rule the duty sequence breaks, including the duty rules
    /// of each member.
    pub fn check_pairing(&self, duties: &[Duty], home_bases: &BTreeSet<String>) -> Vec<RuleViolation> {
        let mut out: Vec<RuleViolation> = duties.iter().flat_map(|d| self.check_duty(d)).collect();
        let (Some(first), Some(last)) = (duties.first(), duties.last()) else {
            out.push(RuleViolation::NotAtHomeBase);
            return out;
        };
        if !home_bases.contains(first.origin()) || first.origin() != last.destination() {
            out.push(RuleViolation::NotAtHomeBase);
        }
        if duties.len() > self.max_duties {
            out.push(RuleViolation::TooManyDuties);
        }
        for (k, pair) in duties.windows(2).enumerate() {
            if pair[0].destination() != pair[1].origin() {
                out.push(RuleViolation::AirportMismatch {
                    after_leg: pair[0].last().id.clone(),
                });
            }
            let rest = (pair[1].start().minutes() - pair[0].end().minutes()) as f64;
            if rest < self.min_rest() {
                out.push(RuleViolation::ShortRest { after_duty: k });
            }
        }
        let span = (last.end().minutes() - first.start().minutes()) as f64;
        if span > self.max_pairing() {
            out.push(RuleViolation::PairingTooLong);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::{FlightLeg, Timestamp};
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

    #[test]
    fn defaults_are_valid() {
        RuleConfig::default().validate().unwrap();
        let bad = RuleConfig {
            min_rest_hours: 0.0,
            ..RuleConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn duty_violations() {
        let rules = RuleConfig::default();
        let a = leg("1", "A", "B", (4, 8, 0), (4, 9, 0));
        let b = leg("2", "B", "A", (4, 9, 20), (4, 10, 20));
        let c = leg("3", "C", "A", (4, 11, 0), (4, 12, 0));
        assert_eq!(
            rules.check_duty(&Duty::new(vec![a.clone(), b.clone()])),
            vec![RuleViolation::ShortConnection { after_leg: "1".into() }]
        );
        assert!(rules
            .check_duty(&Duty::new(vec![b, c]))
            .contains(&RuleViolation::AirportMismatch { after_leg: "2".into() }));
        let long = leg("4", "A", "B", (4, 8, 0), (4, 17, 0));
        assert_eq!(rules.check_duty(&Duty::new(vec![long])), vec![RuleViolation::TooMuchWork]);
    }
}
