//! Walks one exact-cover instance through QUBO and Ising form and checks
//! that every assignment keeps its value.

use vqaopt::encodings::{
    brute_force_ground_state, mcec_to_ising_direct, mcec_to_qubo, qubo_to_ising, Bitstring, McecInstance, Penalty,
    DEFAULT_BRUTE_FORCE_CAP,
};

fn main() {
    // elements {0,1,2}; A={0,1} B={2} C={0} D={1,2}
    let mcec = McecInstance::from_subsets(3, &[vec![0, 1], vec![2], vec![0], vec![1, 2]], vec![3.0, 1.0, 1.0, 2.5])
        .expect("valid instance");
    let qubo = mcec_to_qubo(&mcec, Penalty::Auto).expect("penalty resolves");
    let ising = qubo_to_ising(&qubo);
    let direct = mcec_to_ising_direct(&mcec, Penalty::Auto).expect("penalty resolves");

    println!("assignment  cover  cost  qubo      ising");
    for z in 0..1 << mcec.num_subsets() {
        let bits = Bitstring::new(z, mcec.num_subsets());
        let x = bits.assignment();
        let e = ising.evaluate_bitstring(bits);
        assert!((e - qubo.value(&x)).abs() < 1e-9);
        assert!((e - direct.evaluate_bitstring(bits)).abs() < 1e-9);
        println!(
            "{bits}        {:<5}  {:<4}  {:<8.2}  {e:.2}",
            mcec.is_exact_cover(&x),
            mcec.selection_cost(&x) + 0.0,
            qubo.value(&x)
        );
    }
    let ground = brute_force_ground_state(&ising, DEFAULT_BRUTE_FORCE_CAP).expect("small model");
    println!("ground state {} with energy {}", ground.bitstring, ground.energy);
}
