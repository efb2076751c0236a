//! Drives the configuration wizard from a scripted answer list and prints
//! the transcript and the resulting file.

use vqaopt::builtin_registry;
use vqaopt::config::wizard;

fn main() {
    let answers = ["maxcut-graphs", "max_nodes", "4", "", "", "", "xqaoa", "", "", "spsa", "", "ratio-table", "", "name", "scripted", ""];
    let input = answers.join("\n") + "\n";
    let mut transcript = Vec::new();
    let config = wizard(&builtin_registry(), input.as_bytes(), &mut transcript).expect("script completes");
    println!("{}", String::from_utf8_lossy(&transcript));
    println!("---\n{}", config.to_toml_string());
}
