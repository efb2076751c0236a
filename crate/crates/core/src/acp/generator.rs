use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{FlightLeg, Schedule, Timestamp};

const AIRPORTS: [&str; 12] = [
    "YUL", "YYZ", "YOW", "YQB", "YHZ", "YYC", "YVR", "YWG", "YEG", "YQM", "YSJ", "YXU",
];

/// Size parameters of a generated hub-and-spoke schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub legs: usize,
    pub days: usize,
    pub airports: usize,
    pub home_bases: usize,
    /// First day of the schedule, `YYYY-MM-DD`.
    pub start_date: String,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            legs: 8,
            days: 2,
            airports: 4,
            home_bases: 1,
            start_date: "2024-03-04".into(),
        }
    }
}

/// Generates crew-style rotations: each rotation starts at a hub (or at the
/// outstation where an earlier rotation stopped overnight), flies one to
/// three legs with realistic block and connection times and usually heads
/// back to a hub.
pub fn generate_schedule(config: &GeneratorConfig) -> Schedule {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let airports = config.airports.clamp(2, AIRPORTS.len());
    let hubs = config.home_bases.clamp(1, airports - 1);
    let start = format!("{}T00:00", config.start_date)
        .parse::<Timestamp>()
        .unwrap_or_else(|_| Timestamp::from_ymd_hm(2024, 3, 4, 0, 0));
    let days = config.days.max(1);
    let per_day = config.legs.div_ceil(days);

    let mut legs: Vec<FlightLeg> = Vec::new();
    let mut overnight: Vec<&str> = Vec::new();
    for day in 0..days {
        let midnight = start.plus_minutes(day as i64 * 24 * 60);
        let mut today = 0;
        let mut stranded = std::mem::take(&mut overnight);
        while today < per_day && legs.len() < config.legs {
            let mut here = stranded
                .pop()
                .unwrap_or_else(|| AIRPORTS[rng.random_range(0..hubs)]);
            let mut clock = midnight.plus_minutes(rng.random_range(5 * 12..=14 * 12) * 5);
            let hops = rng.random_range(1..=3);
            for hop in 0..hops {
                if today >= per_day || legs.len() >= config.legs {
                    break;
                }
                let at_hub = AIRPORTS[..hubs].contains(&here);
                let last_hop = hop + 1 == hops;
                let spokes = airports - hubs;
                let to = if !at_hub && (last_hop || spokes < 2 || rng.random_bool(0.7)) {
                    AIRPORTS[rng.random_range(0..hubs)]
                } else {
                    loop {
                        let candidate = AIRPORTS[rng.random_range(hubs..airports)];
                        if candidate != here {
                            break candidate;
                        }
                    }
                };
                let block = rng.random_range(9..=30) * 5;
                let arrival = clock.plus_minutes(block);
                legs.push(FlightLeg {
                    id: format!("L{}", legs.len() + 1),
                    departure_airport: here.to_string(),
                    arrival_airport: to.to_string(),
                    departure: clock,
                    arrival,
                });
                today += 1;
                here = to;
                clock = arrival.plus_minutes(rng.random_range(7..=18) * 5);
            }
            if !AIRPORTS[..hubs].contains(&here) {
                overnight.push(here);
            }
        }
    }
    Schedule {
        legs,
        home_bases: AIRPORTS[..hubs].iter().map(|s| s.to_string()).collect(),
    }
}
