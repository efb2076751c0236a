//! Enumerates duties and pairings for the bundled toy schedule and prints
//! the resulting exact-cover matrix.

use vqaopt::acp::{acp_to_mcec, generate_duties, AcpInstance, CostModel, RuleConfig, Schedule};

fn main() {
    let schedule = Schedule::toy();
    let rules = RuleConfig::default();
    println!("{} legs, {} duties", schedule.legs.len(), generate_duties(&schedule.legs, &rules).len());

    let instance = AcpInstance::from_schedule(schedule, rules, CostModel::default()).expect("toy schedule is valid");
    for (j, pairing) in instance.pairings.iter().enumerate() {
        let legs: Vec<Vec<&str>> = pairing.duties.iter().map(|d| d.leg_ids()).collect();
        println!("{:>4}  cost {:>6.1}  {:?}", AcpInstance::pairing_label(j), pairing.cost, legs);
    }

    let mcec = acp_to_mcec(&instance);
    println!("\nmembership ({} legs x {} pairings):", mcec.num_elements(), mcec.num_subsets());
    for row in mcec.membership() {
        println!("  {}", row.iter().map(|&b| if b { '1' } else { '.' }).collect::<String>());
    }
}
