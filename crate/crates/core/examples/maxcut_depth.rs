//! Approximation ratio against circuit depth over all connected graphs
//! with 2 to 5 nodes.

use vqaopt::builtin_registry;
use vqaopt::config::ExperimentConfig;
use vqaopt::pipeline::run_experiment;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/maxcut_depth.toml");
    let config = ExperimentConfig::load(path)
        .and_then(|c| c.with_overrides(&["loader.max_nodes=5".into(), "run.restarts=3".into()]))
        .expect("bundled config");
    let experiment = run_experiment(&config, &builtin_registry()).expect("graphs solve");
    for (name, text) in experiment.files() {
        if name == "ratio_table.csv" {
            print!("{text}");
        }
    }
}
