use std::collections::BTreeSet;
use std::path::Path;

use vqaopt::ansatze::build_qaoa;
use vqaopt::builtin_registry;
use vqaopt::config::{ConfigError, ExperimentConfig, PluginSection};
use vqaopt::encodings::{maxcut_to_ising, Bitstring, MaxCutInstance};
use vqaopt::pipeline::{
    cut_ratio, expected_cut_ratio, list_results, plan, run_experiment, MetricStatus, PipelineError,
};
use vqaopt::problem::ProblemError;
use vqaopt::simulator::Statevector;

fn maxcut(min: i64, max: i64, ansatz: &str, extra: &[&str]) -> ExperimentConfig {
    let mut config = ExperimentConfig::new(
        PluginSection::new("maxcut-graphs").with("min_nodes", min).with("max_nodes", max),
        PluginSection::new(ansatz),
        PluginSection::new("local").with("budget", 150),
    );
    config.run.restarts = 2;
    config.with_overrides(&extra.iter().map(|s| s.to_string()).collect::<Vec<_>>()).unwrap()
}

/// Connected graphs up to relabelling, by minimum edge mask over all
/// node permutations.
fn connected_classes(n: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut perms = vec![(0..n).collect::<Vec<_>>()];
    for k in 1..n {
        perms = perms
            .into_iter()
            .flat_map(|p| (0..=k).map(move |i| {
                let mut q = p.clone();
                q.swap(i, k);
                q
            }))
            .collect();
    }
    let mut classes = BTreeSet::new();
    for mask in 0u32..1 << pairs.len() {
        let edges: Vec<(usize, usize)> = (0..pairs.len()).filter(|&b| mask >> b & 1 == 1).map(|b| pairs[b]).collect();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(a, b) in &edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == u && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            continue;
        }
        let canonical = perms
            .iter()
            .map(|p| {
                edges
                    .iter()
                    .map(|&(a, b)| {
                        let (a, b) = (p[a].min(p[b]), p[a].max(p[b]));
                        1u32 << pairs.iter().position(|&q| q == (a, b)).unwrap()
                    })
                    .sum::<u32>()
            })
            .min()
            .unwrap();
        classes.insert(canonical);
    }
    classes.len()
}

#[test]
fn one_record_per_graph() {
    let expected: usize = (2..=5).map(connected_classes).sum();
    assert_eq!(expected, 30);
    let experiment = run_experiment(&maxcut(2, 5, "qaoa", &[]), &builtin_registry()).unwrap();
    assert_eq!(experiment.records.len(), expected);
    let names: BTreeSet<&str> = experiment.records.iter().map(|r| r.problem.as_str()).collect();
    assert_eq!(names.len(), expected);
    for (k, r) in experiment.records.iter().enumerate() {
        assert_eq!(r.index, k);
        assert_eq!(r.depth, 1);
        assert_eq!(r.metrics.status, MetricStatus::Ok);
        for v in [r.metrics.approximation_ratio.unwrap(), r.metrics.expected_approximation_ratio.unwrap()] {
            assert!((0.0..=1.0).contains(&v), "{v}");
        }
        assert_eq!(r.restarts.len(), 2);
        let best = r.restarts.iter().map(|s| s.best_value).fold(f64::INFINITY, f64::min);
        assert_eq!(r.result.best_value, best);
        assert_eq!(r.restarts[r.best_restart].parameters, r.parameters);
    }
}

#[test]
fn unknown_ansatz_fails_before_solving() {
    let err = run_experiment(&maxcut(2, 3, "qaoa-9000", &[]), &builtin_registry()).err().unwrap();
    assert!(matches!(
        err,
        PipelineError::Config(ConfigError::Plugin(ProblemError::UnknownPlugin { .. }))
    ));
}

#[test]
fn ratio_examples() {
    let edge = MaxCutInstance::new(2, &[(0, 1)]).unwrap();
    assert_eq!(cut_ratio(&edge, Bitstring::new(0b00, 2)).unwrap(), 0.0);
    assert_eq!(expected_cut_ratio(&edge, &[0.25; 4]).unwrap(), 0.5);
    let k3 = MaxCutInstance::complete(3);
    for z in 1..7 {
        assert_eq!(cut_ratio(&k3, Bitstring::new(z, 3)).unwrap(), 1.0);
    }
    assert!((expected_cut_ratio(&k3, &[0.125; 8]).unwrap() - 0.75).abs() < 1e-15);
    let mut basis = vec![0.0; 8];
    basis[0b011] = 1.0;
    assert_eq!(expected_cut_ratio(&k3, &basis).unwrap(), 1.0);
    assert!(matches!(
        cut_ratio(&MaxCutInstance::new(3, &[]).unwrap(), Bitstring::new(0, 3)),
        Err(PipelineError::DegenerateInstance(_))
    ));
}

#[test]
fn shot_estimate_within_four_sigma() {
    let graph = MaxCutInstance::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
    let circuit = build_qaoa(&maxcut_to_ising(&graph), 2).unwrap();
    let state = Statevector::simulate(&circuit.bind_flat(&[0.4, 0.9, 1.1, 0.3]).unwrap());
    let exact = expected_cut_ratio(&graph, &state.probabilities()).unwrap();
    let shots = 100_000;
    let histogram = state.sample(shots, 17).unwrap();
    let ratios: Vec<(f64, usize)> = histogram
        .iter()
        .map(|(z, &c)| (cut_ratio(&graph, *z).unwrap(), c))
        .collect();
    let mean = ratios.iter().map(|(r, c)| r * *c as f64).sum::<f64>() / shots as f64;
    let var = ratios.iter().map(|(r, c)| (r - mean).powi(2) * *c as f64).sum::<f64>() / shots as f64;
    let sigma = (var / shots as f64).sqrt();
    assert!((mean - exact).abs() <= 4.0 * sigma, "{mean} vs {exact} (sigma {sigma})");
}

#[test]
fn shot_metrics_stay_close_to_exact() {
    let exact = run_experiment(&maxcut(4, 4, "qaoa", &[]), &builtin_registry()).unwrap();
    let shots = run_experiment(&maxcut(4, 4, "qaoa", &["run.metrics=shots", "run.shots=20000"]), &builtin_registry()).unwrap();
    for (a, b) in exact.records.iter().zip(&shots.records) {
        assert_eq!(a.parameters, b.parameters, "metrics mode does not change optimization");
        let (x, y) = (a.metrics.expected_approximation_ratio.unwrap(), b.metrics.expected_approximation_ratio.unwrap());
        assert!((x - y).abs() < 0.03, "{x} vs {y}");
    }
}

#[test]
fn single_record_aggregates_equal_its_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("triangle.txt");
    std::fs::write(&graph, "3 3\n0 1\n1 2\n0 2\n").unwrap();
    let mut config = ExperimentConfig::new(
        PluginSection::new("maxcut-file").with("path", graph.display().to_string()),
        PluginSection::new("qaoa"),
        PluginSection::new("local"),
    );
    for name in ["ratio-table", "size-distribution", "angle-pattern"] {
        config.processors.push(PluginSection::new(name));
    }
    let experiment = run_experiment(&config, &builtin_registry()).unwrap();
    assert_eq!(experiment.records.len(), 1);
    let m = &experiment.records[0].metrics;
    let files: std::collections::BTreeMap<String, String> = experiment.files().into_iter().collect();
    let table = &files["ratio_table.csv"];
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "metric,p=1");
    assert_eq!(lines[1], format!("Avg. approx. ratio,{:.6}", m.approximation_ratio.unwrap()));
    assert_eq!(lines[2], format!("Avg. exp. approx. ratio,{:.6}", m.expected_approximation_ratio.unwrap()));
    let e = m.expected_approximation_ratio.unwrap();
    let sizes = &files["size_distribution.csv"];
    assert_eq!(sizes.lines().nth(1).unwrap(), format!("1,3,1,{e:.6},{e:.6},{e:.6},{e:.6},{e:.6}"));
    assert!(files["angle_pattern.csv"].lines().nth(1).unwrap().starts_with("1,0,1,"));
}

#[test]
fn toy_acp_end_to_end() {
    let config = ExperimentConfig::load(Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/toy_acp.toml")).unwrap();
    let experiment = run_experiment(&config, &builtin_registry()).unwrap();
    assert_eq!(experiment.records.len(), 1);
    let m = &experiment.records[0].metrics;
    assert_eq!(m.feasible, Some(true));
    assert_eq!(m.cover_cost, m.optimal_cover_cost);
    let report = experiment.files().into_iter().find(|f| f.0 == "pairing_report.txt").unwrap().1;
    assert!(report.contains("exact cover"), "{report}");
    assert!(report.lines().any(|l| l.trim_start().starts_with("L1 ")), "{report}");
}

#[test]
fn explicit_direct_reduction_path() {
    let config = ExperimentConfig::load(Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/toy_acp.toml"))
        .unwrap()
        .with_overrides(&[
            r#"reductions.path=["acp-mcec", "mcec-ising-direct"]"#.into(),
            r#"run.plugins=["mcec-ising-direct"]"#.into(),
            "run.restarts=1".into(),
        ])
        .unwrap();
    let registry = builtin_registry();
    config.validate(&registry).unwrap();
    let p = plan(&config, &registry).unwrap();
    assert_eq!(p.instances[0].reductions, ["acp-mcec", "mcec-ising-direct"]);
    let direct = run_experiment(&config, &registry).unwrap();
    let composed = run_experiment(&config.with_overrides(&["reductions.path=[]".into()]).unwrap(), &registry).unwrap();
    let (a, b) = (&direct.records[0].metrics, &composed.records[0].metrics);
    assert!((a.optimal_energy.unwrap() - b.optimal_energy.unwrap()).abs() < 1e-9);
    assert_eq!(a.optimal_cover_cost, b.optimal_cover_cost);
}

#[test]
fn plan_lists_tasks_without_solving() {
    let p = plan(&maxcut(2, 4, "qaoa", &["ansatz.depth=[1, 2]"]), &builtin_registry()).unwrap();
    assert_eq!(p.instances.len(), 9);
    assert_eq!(p.tasks, 18);
    assert_eq!(p.instances[0].reductions, ["maxcut-ising"]);
}

#[test]
fn output_directory_layout() {
    let mut config = maxcut(2, 3, "qaoa", &["ansatz.depth=[1, 2]"]);
    config.processors = ["ratio-table", "size-distribution", "angle-pattern"].map(PluginSection::new).to_vec();
    config.run.name = "layout".into();
    let experiment = run_experiment(&config, &builtin_registry()).unwrap();
    let root = tempfile::tempdir().unwrap();
    let dir = root.path().join("layout");
    experiment.write(&dir).unwrap();

    let mut on_disk = Vec::new();
    for entry in walk(&dir) {
        on_disk.push(entry.strip_prefix(&dir).unwrap().to_string_lossy().replace('\\', "/"));
    }
    on_disk.sort();
    let want = [
        "angle_pattern.csv",
        "config.toml",
        "manifest.json",
        "ratio_table.csv",
        "records.csv",
        "records.json",
        "rows/angle-pattern.csv",
        "rows/ratio-table.csv",
        "rows/size-distribution.csv",
        "size_distribution.csv",
    ];
    assert_eq!(on_disk, want);

    let records = std::fs::read_to_string(dir.join("records.csv")).unwrap();
    assert!(records.starts_with("index,problem,size,ansatz,depth,optimizer,seed,best_restart,best_value,"));
    assert_eq!(records.lines().count(), 1 + 6);
    assert_eq!(
        ExperimentConfig::load(dir.join("config.toml")).unwrap(),
        config,
        "snapshot is the resolved config"
    );

    let listed = list_results(root.path()).unwrap();
    assert_eq!(listed.len(), 1);
    assert_eq!(listed[0].manifest.records, 6);
    assert_eq!(listed[0].manifest.files, want);
    assert_eq!(listed[0].manifest.task_seeds, experiment.tasks.iter().map(|t| t.seed).collect::<Vec<_>>());

    let empty = vqaopt::pipeline::Experiment {
        records: Vec::new(),
        ..experiment
    };
    assert_eq!(empty.write(root.path().join("empty")), Err(PipelineError::NoRecords));
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            out.extend(walk(&path));
        } else {
            out.push(path);
        }
    }
    out
}

#[test]
fn every_ansatz_runs_on_maxcut() {
    for ansatz in ["ma-qaoa", "qaoa-plus", "xqaoa"] {
        let experiment = run_experiment(&maxcut(3, 3, ansatz, &["run.restarts=1"]), &builtin_registry()).unwrap();
        assert_eq!(experiment.records.len(), 2, "{ansatz}");
        for r in &experiment.records {
            assert!(r.metrics.approximation_ratio.unwrap() > 0.0, "{ansatz}");
        }
    }
}
