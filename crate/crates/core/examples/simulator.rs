//! One QAOA layer on a single edge, then a small parametric circuit bound
//! by name, both on the statevector simulator.

use std::collections::BTreeMap;

use vqaopt::simulator::{BoundCircuit, GateKind, ParameterTable, ParametricCircuit, Statevector};

fn main() {
    // these angles put all weight on the two cut states
    let (gamma, beta) = (std::f64::consts::FRAC_PI_2, -std::f64::consts::FRAC_PI_4);
    let edge = BoundCircuit::new(2)
        .gate(GateKind::H, &[0], 0.0)
        .gate(GateKind::H, &[1], 0.0)
        .gate(GateKind::RZZ, &[0, 1], gamma)
        .gate(GateKind::RX, &[0], beta)
        .gate(GateKind::RX, &[1], beta);
    let state = Statevector::simulate(&edge);
    println!("probabilities {:.4?}", state.probabilities());
    for (bits, count) in state.sample(1000, 3).expect("nonzero shots") {
        println!("{bits}  {count}");
    }
    println!();

    let mut table = ParameterTable::new();
    table.declare("theta", 2, 0.0, std::f64::consts::PI).expect("fresh name");
    let mut circuit = ParametricCircuit::with_parameters(3, table);
    for q in 0..3 {
        circuit.h(q).expect("qubit in range");
    }
    let theta0 = circuit.param("theta", 0, 1.0).expect("declared");
    let theta1 = circuit.param("theta", 1, 2.0).expect("declared");
    circuit.rzz(0, 1, theta0).expect("qubits in range");
    circuit.rx(2, theta1).expect("qubit in range");

    let values = BTreeMap::from([("theta".to_string(), vec![0.7, 0.4])]);
    let state = Statevector::simulate(&circuit.bind(&values).expect("values match the table"));
    for (bits, p) in state.top_k(4) {
        println!("{bits}  {p:.4}");
    }
}
