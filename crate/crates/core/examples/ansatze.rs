//! Builds each ansatz for a small Ising model and prints parameter and
//! gate counts.

use vqaopt::ansatze::{build, AnsatzKind, AnsatzOptions};
use vqaopt::encodings::{maxcut_to_ising, MaxCutInstance};
use vqaopt::simulator::GateKind;

fn main() {
    let model = maxcut_to_ising(&MaxCutInstance::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).expect("valid graph"));
    let m = model.num_spins();
    println!("ansatz     p  params  formula  rzz  rx  ry  rz");
    for kind in AnsatzKind::ALL {
        for p in 1..=2 {
            let circuit = build(kind, &model, p, &AnsatzOptions::default()).expect("buildable");
            println!(
                "{:<9} {p:>2}  {:>6}  {:>7}  {:>3} {:>3} {:>3} {:>3}",
                kind.name(),
                circuit.parameters.len(),
                kind.parameter_count(p, m),
                circuit.count(GateKind::RZZ),
                circuit.count(GateKind::RX),
                circuit.count(GateKind::RY),
                circuit.count(GateKind::RZ),
            );
        }
    }
}
