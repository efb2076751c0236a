//! Solves the toy crew pairing instance end to end and writes the results
//! under a temporary directory.

use vqaopt::builtin_registry;
use vqaopt::config::ExperimentConfig;
use vqaopt::pipeline::run_experiment;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/toy_acp.toml");
    let config = ExperimentConfig::load(path).expect("bundled config");
    let experiment = run_experiment(&config, &builtin_registry()).expect("toy instance solves");
    for (name, text) in experiment.files() {
        if name == "pairing_report.txt" {
            print!("{text}");
        }
    }
    let dir = std::env::temp_dir().join("vqaopt-example").join(&config.run.name);
    experiment.write(&dir).expect("writable temp dir");
    println!("wrote {}", dir.display());
}
