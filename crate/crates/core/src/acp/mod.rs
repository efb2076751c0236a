//! Airline crew pairing: flight legs, rule-constrained duty and pairing
//! enumeration, the pairing cost model, schedule files and a seeded
//! schedule generator.
//!
//! Pairings are enumerated in full, which is only practical for the small
//! schedules a statevector simulation can handle afterwards.

mod cost;
mod enumerate;
mod generator;
mod instance;
mod rules;
mod schedule;
mod time;

pub use cost::CostModel;
pub use enumerate::{generate_duties, generate_pairings};
pub use generator::{generate_schedule, GeneratorConfig};
pub use instance::{acp_to_mcec, AcpInstance};
pub use rules::{RuleConfig, RuleViolation};
pub use schedule::{parse_schedule, write_schedule, Schedule, TOY_SCHEDULE};
pub use time::{Timestamp, MINUTES_PER_DAY};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AcpError {
    #[error("line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },
    #[error("invalid rule `{rule}`: {message}")]
    InvalidRule { rule: &'static str, message: String },
    #[error("invalid instance: {0}")]
    Invalid(String),
}

/// One flight from a departure airport to an arrival airport.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlightLeg {
    pub id: String,
    pub departure_airport: String,
    pub arrival_airport: String,
    pub departure: Timestamp,
    pub arrival: Timestamp,
}

impl FlightLeg {
    pub fn new(
        id: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        departure: Timestamp,
        arrival: Timestamp,
    ) -> Result<Self, AcpError> {
        let leg = Self {
            id: id.into(),
            departure_airport: from.into(),
            arrival_airport: to.into(),
            departure,
            arrival,
        };
        if leg.arrival <= leg.departure {
            return Err(AcpError::Invalid(format!(
                "leg {} arrives at {} before departing at {}",
                leg.id, leg.arrival, leg.departure
            )));
        }
        Ok(leg)
    }

    /// Block time in minutes.
    pub fn block_minutes(&self) -> i64 {
        self.arrival.minutes() - self.departure.minutes()
    }
}

/// Same-day sequence of connected legs flown by one crew.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Duty {
    pub legs: Vec<FlightLeg>,
}

impl Duty {
    pub fn new(legs: Vec<FlightLeg>) -> Self {
        assert!(!legs.is_empty(), "a duty has at least one leg");
        Self { legs }
    }

    pub fn first(&self) -> &FlightLeg {
        &self.legs[0]
    }

    pub fn last(&self) -> &FlightLeg {
        self.legs.last().expect("nonempty duty")
    }

    pub fn start(&self) -> Timestamp {
        self.first().departure
    }

    pub fn end(&self) -> Timestamp {
        self.last().arrival
    }

    pub fn origin(&self) -> &str {
        &self.first().departure_airport
    }

    pub fn destination(&self) -> &str {
        &self.last().arrival_airport
    }

    pub fn duration_minutes(&self) -> i64 {
        self.end().minutes() - self.start().minutes()
    }

    pub fn work_minutes(&self) -> i64 {
        self.legs.iter().map(FlightLeg::block_minutes).sum()
    }

    pub fn leg_ids(&self) -> Vec<&str> {
        self.legs.iter().map(|l| l.id.as_str()).collect()
    }
}

/// Sequence of duties that leaves from and returns to a crew home base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    pub duties: Vec<Duty>,
    pub home_base: String,
    pub cost: f64,
}

impl Pairing {
    pub fn legs(&self) -> impl Iterator<Item = &FlightLeg> {
        self.duties.iter().flat_map(|d| d.legs.iter())
    }

    pub fn leg_ids(&self) -> Vec<&str> {
        self.legs().map(|l| l.id.as_str()).collect()
    }

    pub fn start(&self) -> Timestamp {
        self.duties[0].start()
    }

    pub fn end(&self) -> Timestamp {
        self.duties.last().expect("nonempty pairing").end()
    }

    pub fn duration_minutes(&self) -> i64 {
        self.end().minutes() - self.start().minutes()
    }
}
