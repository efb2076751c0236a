use std::path::{Path, PathBuf};
use std::process::Command;

use vqaopt::builtin_registry;
use vqaopt::cli::{main_with, Io, EXIT_ABORTED, EXIT_CONFIG, EXIT_OK, OUT_DIR_VAR};
use vqaopt::config::ExperimentConfig;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn vqaopt(args: &[&str], stdin: &str, out_env: Option<&Path>) -> Outcome {
    let mut input = stdin.as_bytes();
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let code = main_with(
        std::iter::once("vqaopt").chain(args.iter().copied()),
        &builtin_registry(),
        Io {
            stdin: &mut input,
            stdout: &mut stdout,
            stderr: &mut stderr,
            out_env: out_env.map(Path::to_path_buf),
        },
    );
    Outcome {
        code,
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn toy() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/toy_acp.toml").display().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn toy_run_writes_results() {
    let root = tempfile::tempdir().unwrap();
    let r = vqaopt(&["run", &toy(), "--out", s(root.path()), "--set", "run.restarts=2"], "", None);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.contains("most-likely="), "{}", r.stdout);
    let dir = root.path().join("toy-acp");
    assert!(r.stdout.contains(&format!("wrote {}", dir.display())));
    let report = std::fs::read_to_string(dir.join("pairing_report.txt")).unwrap();
    assert!(report.contains("exact cover"));

    let listed = vqaopt(&["list-results", "--out", s(root.path())], "", None);
    assert_eq!(listed.code, EXIT_OK);
    assert!(listed.stdout.starts_with("toy-acp  seed 7  1 instances  1 records"), "{}", listed.stdout);
}

#[test]
fn dry_run_writes_nothing() {
    let root = tempfile::tempdir().unwrap();
    let r = vqaopt(&["run", &toy(), "--dry-run", "--out", s(root.path())], "", None);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.contains("experiment `toy-acp` (seed 7)"));
    assert!(r.stdout.contains("1 instances, 1 tasks"));
    assert!(r.stdout.contains("acp-mcec -> mcec-qubo -> qubo-ising"), "{}", r.stdout);
    assert!(r.stdout.contains("would write"));
    assert_eq!(std::fs::read_dir(root.path()).unwrap().count(), 0);
}

#[test]
fn environment_variable_sets_results_root() {
    let root = tempfile::tempdir().unwrap();
    let r = vqaopt(&["run", &toy(), "--set", "run.restarts=1", "--set", "run.name=env"], "", Some(root.path()));
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(root.path().join("env/manifest.json").is_file());
    let flag = tempfile::tempdir().unwrap();
    let r = vqaopt(
        &["run", &toy(), "--set", "run.restarts=1", "--out", s(flag.path())],
        "",
        Some(root.path()),
    );
    assert_eq!(r.code, EXIT_OK);
    assert!(flag.path().join("toy-acp").is_dir(), "--out wins over the environment");
}

#[test]
fn config_errors_exit_two() {
    let r = vqaopt(&["run", "/no/such/config.toml"], "", None);
    assert_eq!(r.code, EXIT_CONFIG);
    assert!(r.stderr.contains("/no/such/config.toml"), "{}", r.stderr);

    let r = vqaopt(&["run", &toy(), "--set", "ansatz.name=\"qaoa-9000\"", "--dry-run"], "", None);
    assert_eq!(r.code, EXIT_CONFIG);
    assert!(r.stderr.contains("qaoa-9000"), "{}", r.stderr);

    assert_eq!(vqaopt(&["run"], "", None).code, EXIT_CONFIG);
    assert_eq!(vqaopt(&["frobnicate"], "", None).code, EXIT_CONFIG);
    assert_eq!(vqaopt(&["--help"], "", None).code, EXIT_OK);
}

#[test]
fn validate_and_plugins() {
    let r = vqaopt(&["config", "validate", &toy()], "", None);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.ends_with("is valid\n"));

    let r = vqaopt(&["config", "plugins", "--kind", "reduction"], "", None);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.starts_with("reduction:\n"));
    assert!(r.stdout.contains("  mcec-ising-direct [optional]"), "{}", r.stdout);
    assert!(!r.stdout.contains("optimizer:"));

    let all = vqaopt(&["config", "plugins"], "", None).stdout;
    for kind in ["loader:", "platform:", "ansatz:", "initializer:", "optimizer:", "processor:"] {
        assert!(all.contains(kind), "{kind}");
    }
}

#[test]
fn wizard_from_answers_file() {
    let dir = tempfile::tempdir().unwrap();
    let answers = dir.path().join("answers.txt");
    std::fs::write(&answers, "\n".repeat(12)).unwrap();
    let out = dir.path().join("made.toml");
    let r = vqaopt(&["config", "wizard", "--out", s(&out), "--answers", s(&answers)], "", None);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let config = ExperimentConfig::load(&out).unwrap();
    config.validate(&builtin_registry()).unwrap();

    let aborted = dir.path().join("aborted.toml");
    let r = vqaopt(&["config", "wizard", "--out", s(&aborted)], "\n:q\n", None);
    assert_eq!(r.code, EXIT_ABORTED);
    assert!(!aborted.exists());
}

#[test]
fn binary_end_to_end() {
    let root = tempfile::tempdir().unwrap();
    let bin = PathBuf::from(env!("CARGO_BIN_EXE_vqaopt"));
    let output = Command::new(&bin)
        .args(["run", &toy(), "--set", "run.restarts=1"])
        .env(OUT_DIR_VAR, root.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    assert!(root.path().join("toy-acp/records.csv").is_file());

    let missing = Command::new(&bin).args(["config", "validate", "nope.toml"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(EXIT_CONFIG));
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error: "));
}
