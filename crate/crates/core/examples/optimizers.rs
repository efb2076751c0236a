//! Runs the three optimizers on a bounded Rosenbrock function from the
//! same start.

use vqaopt::optimizers::{
    GeneticAlgorithm, GeneticSettings, LocalSettings, LocalTrustRegion, Objective, Optimizer, Spsa, SpsaSettings,
};

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2).map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2)).sum()
}

fn main() {
    let optimizers: Vec<Box<dyn Optimizer>> = vec![
        Box::new(LocalTrustRegion::new(LocalSettings::default())),
        Box::new(Spsa::new(SpsaSettings::default())),
        Box::new(GeneticAlgorithm::new(GeneticSettings::default())),
    ];
    let x0 = [-1.2, 1.0, 0.5];
    for optimizer in optimizers {
        let objective = Objective::new(vec![(-2.0, 2.0); 3], rosenbrock);
        let result = optimizer.optimize(&objective, &x0, 5).expect("start is in bounds");
        println!(
            "{:<8} f={:<12.6e} evaluations={:<5} {} x={:.3?}",
            optimizer.name(),
            result.best_value,
            result.evaluations,
            result.termination,
            result.best_x
        );
    }
}
