use proptest::prelude::*;

use vqaopt::builtin_registry;
use vqaopt::config::{wizard, ConfigError, ExperimentConfig};
use vqaopt::pipeline::run_experiment;

fn session(lines: &[&str]) -> (Result<ExperimentConfig, ConfigError>, String) {
    let input = lines.iter().map(|l| format!("{l}\n")).collect::<String>();
    let mut output = Vec::new();
    let result = wizard(&builtin_registry(), input.as_bytes(), &mut output);
    (result, String::from_utf8(output).unwrap())
}

#[test]
fn maxcut_qaoa_spsa_session_runs_unchanged() {
    let (result, transcript) = session(&[
        "maxcut-graphs",
        "max_nodes",
        "3",
        "",
        "",
        "",
        "qaoa",
        "1",
        "1",
        "",
        "",
        "spsa",
        "iterations",
        "20",
        "",
        "ratio-table",
        "",
        "name",
        "wizard-run",
        "restarts",
        "2",
        "",
    ]);
    let config = result.unwrap();
    assert!(transcript.contains("? Select a field to configure (platform statevector):"));
    assert!(transcript.contains("D Simulation method: statevector"));
    assert_eq!(config.loader.name, "maxcut-graphs");
    assert_eq!(config.ansatz.name, "qaoa");
    assert_eq!(config.optimizer.name, "spsa");
    assert_eq!(config.run.name, "wizard-run");

    // what the wizard writes is what `run` reads
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wizard.toml");
    config.save(&path).unwrap();
    let loaded = ExperimentConfig::load(&path).unwrap();
    assert_eq!(loaded, config);
    let experiment = run_experiment(&loaded, &builtin_registry()).unwrap();
    assert_eq!(experiment.records.len(), 3);
    assert!(experiment.records.iter().all(|r| r.restarts.len() == 2));
}

#[test]
fn accepting_every_default() {
    let (result, _) = session(&[""; 12]);
    let config = result.unwrap();
    config.validate(&builtin_registry()).unwrap();
    assert_eq!(config.loader.name, "acp");
    assert_eq!(config.ansatz.name, "qaoa");
    assert_eq!(config.optimizer.name, "local");
    assert!(config.processors.is_empty());
    assert!(config.loader.settings.is_empty(), "defaults are not written out");
}

#[test]
fn text_for_a_number_reprompts() {
    let (result, transcript) = session(&[
        "", "", "", "", "", "", "", "", "budget", "lots", "-3", "50", "", "", "",
    ]);
    let config = result.unwrap();
    assert!(transcript.contains("invalid: `lots` is not an integer"), "{transcript}");
    assert_eq!(config.optimizer.settings["budget"].as_integer(), Some(50));
}

#[test]
fn unknown_answers_reprompt() {
    let (result, transcript) = session(&["quantum-annealer", "2", "", "", "", "", "", "", "", "", "", ""]);
    assert!(transcript.contains("not an option: `quantum-annealer`"));
    assert_eq!(result.unwrap().loader.name, "maxcut-file");
}

#[test]
fn plugin_level_errors_reopen_the_menu() {
    // a tournament larger than the population passes field checks but
    // not the optimizer itself
    let (result, transcript) = session(&[
        "", "", "", "", "", "", "", "genetic", "population", "4", "tournament", "9", "", "tournament", "2", "", "", "",
    ]);
    let config = result.unwrap();
    assert!(transcript.matches("? Select a field to configure (optimizer genetic):").count() >= 3);
    config.validate(&builtin_registry()).unwrap();
}

#[test]
fn bad_run_name_reprompts() {
    let (result, transcript) = session(&["", "", "", "", "", "", "", "", "", "", "name", "a/b", "", "name", "ok", ""]);
    assert!(transcript.contains("not a plain directory name"));
    assert_eq!(result.unwrap().run.name, "ok");
}

#[test]
fn quitting_aborts() {
    assert_eq!(session(&["", ":q"]).0, Err(ConfigError::Aborted));
    assert_eq!(session(&["", ""]).0, Err(ConfigError::Aborted), "end of input aborts");
}

fn answer() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => Just(String::new()),
        3 => (1usize..12).prop_map(|i| i.to_string()),
        1 => prop::sample::select(vec![
            "maxcut-graphs", "acp", "qaoa", "ma-qaoa", "xqaoa", "qaoa-plus", "spsa", "genetic", "local",
            "constant", "perturbed-constant", "ratio-table", "angle-pattern", "pairing-report", "mcec-ising-direct",
        ])
        .prop_map(String::from),
        1 => prop::sample::select(vec![
            "-1", "0", "0.5", "7", "1e9", "pi", "true", "no", "1,2", "0,1", "gamma=0:1", "beta=1:0", "auto",
            "abc", "generate", "3", "x/y", "shots", "mcec-ising-direct", "depth", "seed", "name",
        ])
        .prop_map(String::from),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn scripted_sessions_only_emit_valid_configs(script in prop::collection::vec(answer(), 0..60)) {
        let mut lines: Vec<&str> = script.iter().map(String::as_str).collect();
        lines.extend([""; 40]);
        let (result, _) = session(&lines);
        match result {
            Ok(config) => {
                prop_assert!(config.validate(&builtin_registry()).is_ok());
                let again = ExperimentConfig::from_toml_str(&config.to_toml_string()).unwrap();
                prop_assert_eq!(again, config);
            }
            Err(e) => prop_assert_eq!(e, ConfigError::Aborted),
        }
    }
}
