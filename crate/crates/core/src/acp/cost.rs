use serde::{Deserialize, Serialize};

use super::{FlightLeg, Pairing, MINUTES_PER_DAY};

/// Cost of a pairing: nights spent away from the home base plus block time
/// flown in the off-hour windows `[00:00, 05:00)` and `[20:00, 24:00)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CostModel {
    pub night_penalty: f64,
    pub offhour_penalty_per_minute: f64,
    /// End of the early window, minutes after midnight.
    pub early_end_minute: i64,
    /// Start of the late window, minutes after midnight.
    pub late_start_minute: i64,
}

impl Default for CostModel {
    fn default() -> Self {
        Self {
            night_penalty: 100.0,
            offhour_penalty_per_minute: 1.0,
            early_end_minute: 5 * 60,
            late_start_minute: 20 * 60,
        }
    }
}

impl CostModel {
    /// Nights away: one per midnight crossed while resting somewhere other
    /// than the home base.
    pub fn away_nights(&self, pairing: &Pairing) -> i64 {
        pairing
            .duties
            .windows(2)
            .filter(|pair| pair[0].destination() != pairing.home_base)
            .map(|pair| pair[1].start().day() - pair[0].end().day())
            .sum()
    }

    /// Minutes of block time inside the off-hour windows.
    pub fn offhour_minutes(&self, pairing: &Pairing) -> i64 {
        pairing.legs().map(|leg| self.leg_offhour_minutes(leg)).sum()
    }

    pub fn leg_offhour_minutes(&self, leg: &FlightLeg) -> i64 {
        let (start, end) = (leg.departure.minutes(), leg.arrival.minutes());
        let mut total = 0;
        for day in leg.departure.day()..=leg.arrival.day() {
            let base = day * MINUTES_PER_DAY;
            for (lo, hi) in [
                (base, base + self.early_end_minute),
                (base + self.late_start_minute, base + MINUTES_PER_DAY),
            ] {
                total += (end.min(hi) - start.max(lo)).max(0);
            }
        }
        total
    }

    pub fn pairing_cost(&self, pairing: &Pairing) -> f64 {
        self.away_nights(pairing) as f64 * self.night_penalty
            + self.offhour_minutes(pairing) as f64 * self.offhour_penalty_per_minute
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Duty, Timestamp};
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

    fn pairing(duties: Vec<Vec<FlightLeg>>) -> Pairing {
        Pairing {
            home_base: duties[0][0].departure_airport.clone(),
            duties: duties.into_iter().map(Duty::new).collect(),
            cost: 0.0,
        }
    }

    #[test]
    fn daytime_round_trip_is_free() {
        let p = pairing(vec![vec![
            leg("1", "A", "B", (4, 9, 0), (4, 12, 0)),
            leg("2", "B", "A", (4, 14, 0), (4, 17, 0)),
        ]]);
        assert_eq!(CostModel::default().pairing_cost(&p), 0.0);
    }

    #[test]
    fn one_night_away() {
        let p = pairing(vec![
            vec![leg("1", "A", "B", (4, 9, 0), (4, 12, 0))],
            vec![leg("2", "B", "A", (5, 9, 0), (5, 12, 0))],
        ]);
        let model = CostModel::default();
        assert_eq!(model.away_nights(&p), 1);
        assert_eq!(model.pairing_cost(&p), 100.0);
    }

    #[test]
    fn early_work_is_penalized_per_minute() {
        let p = pairing(vec![vec![
            leg("1", "A", "B", (4, 4, 0), (4, 6, 0)),
            leg("2", "B", "A", (4, 7, 0), (4, 8, 0)),
        ]]);
        assert_eq!(CostModel::default().pairing_cost(&p), 60.0);
    }

    #[test]
    fn window_boundaries() {
        let model = CostModel::default();
        // [05:00, 20:00) is free, 20:00 onwards is not.
        assert_eq!(model.leg_offhour_minutes(&leg("1", "A", "B", (4, 5, 0), (4, 20, 0))), 0);
        assert_eq!(model.leg_offhour_minutes(&leg("1", "A", "B", (4, 19, 30), (4, 20, 15))), 15);
        // Crossing midnight hits both windows.
        assert_eq!(model.leg_offhour_minutes(&leg("1", "A", "B", (4, 23, 0), (5, 1, 0))), 120);
    }

    #[test]
    fn resting_at_home_is_not_a_night_away() {
        let p = pairing(vec![
            vec![leg("1", "A", "B", (4, 9, 0), (4, 10, 0)), leg("2", "B", "A", (4, 11, 0), (4, 12, 0))],
            vec![leg("3", "A", "B", (5, 9, 0), (5, 10, 0)), leg("4", "B", "A", (5, 11, 0), (5, 12, 0))],
        ]);
        assert_eq!(CostModel::default().away_nights(&p), 0);
    }
}
