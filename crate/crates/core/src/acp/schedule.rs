use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{AcpError, FlightLeg, Timestamp};

/// Bundled six-leg, two-day schedule for crews based at `YUL` and `YYZ`.
pub const TOY_SCHEDULE: &str = include_str!("../../data/toy_schedule.csv");

/// Flight legs plus the airports crews are based at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub legs: Vec<FlightLeg>,
    pub home_bases: BTreeSet<String>,
}

impl Schedule {
    pub fn toy() -> Self {
        Self {
            legs: parse_schedule(TOY_SCHEDULE).expect("bundled schedule parses"),
            home_bases: BTreeSet::from(["YUL".to_string(), "YYZ".to_string()]),
        }
    }
}

const COLUMNS: [&str; 5] = ["id", "departure_airport", "arrival_airport", "departure", "arrival"];

/// Parses the comma-separated leg format:
/// `id,departure_airport,arrival_airport,departure,arrival` with times as
/// `YYYY-MM-DDTHH:MM`. A header row starting with `id`, blank lines and `#`
/// comments are skipped.
pub fn parse_schedule(text: &str) -> Result<Vec<FlightLeg>, AcpError> {
    let mut legs = Vec::new();
    let mut ids = HashSet::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let row = raw.split('#').next().unwrap_or("").trim();
        if row.is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').map(str::trim).collect();
        if fields[0].eq_ignore_ascii_case("id") {
            continue;
        }
        let error = |field: &str, message: String| AcpError::Parse {
            line,
            field: field.to_string(),
            message,
        };
        if fields.len() != COLUMNS.len() {
            return Err(error(
                "row",
                format!("expected {} fields, found {}", COLUMNS.len(), fields.len()),
            ));
        }
        for (name, value) in COLUMNS.iter().zip(&fields).take(3) {
            if value.is_empty() {
                return Err(error(name, "empty value".into()));
            }
        }
        let time = |pos: usize| -> Result<Timestamp, AcpError> {
            fields[pos]
                .parse()
                .map_err(|e| error(COLUMNS[pos], format!("{:?}: {e}", fields[pos])))
        };
        let (departure, arrival) = (time(3)?, time(4)?);
        if arrival <= departure {
            return Err(error(
                "arrival",
                format!("arrival {arrival} is not after departure {departure}"),
            ));
        }
        if !ids.insert(fields[0].to_string()) {
            return Err(error("id", format!("duplicate leg id {:?}", fields[0])));
        }
        legs.push(FlightLeg {
            id: fields[0].to_string(),
            departure_airport: fields[1].to_string(),
            arrival_airport: fields[2].to_string(),
            departure,
            arrival,
        });
    }
    Ok(legs)
}

pub fn write_schedule(legs: &[FlightLeg]) -> String {
    let mut out = COLUMNS.join(",");
    out.push('\n');
    for leg in legs {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            leg.id, leg.departure_airport, leg.arrival_airport, leg.departure, leg.arrival
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_schedule_parses() {
        let toy = Schedule::toy();
        assert_eq!(toy.legs.len(), 6);
    }

    #[test]
    fn round_trip() {
        let legs = Schedule::toy().legs;
        assert_eq!(parse_schedule(&write_schedule(&legs)).unwrap(), legs);
    }

    #[test]
    fn rejects_arrival_before_departure() {
        let err = parse_schedule("L1,A,B,2024-03-04T10:00,2024-03-04T09:00\n").unwrap_err();
        assert!(matches!(err, AcpError::Parse { line: 1, ref field, .. } if field == "arrival"));
        let err = parse_schedule("L1,A,B,2024-03-04T10:00,2024-03-04T10:00\n").unwrap_err();
        assert!(matches!(err, AcpError::Parse { .. }));
    }

    #[test]
    fn reports_line_and_field() {
        let text = "id,departure_airport,arrival_airport,departure,arrival\n\
                    L1,A,B,2024-03-04T08:00,2024-03-04T09:00\n\
                    L2,B,A,2024-03-04 10:00,2024-03-04T11:00\n";
        match parse_schedule(text).unwrap_err() {
            AcpError::Parse { line, field, .. } => {
                assert_eq!(line, 3);
                assert_eq!(field, "departure");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_schedule("L1,A,B\n").is_err());
        assert!(parse_schedule(
            "L1,A,B,2024-03-04T08:00,2024-03-04T09:00\nL1,B,A,2024-03-04T10:00,2024-03-04T11:00\n"
        )
        .is_err());
    }
}
