//! The `vqaopt` command line.
//!
//! ```text
//! vqaopt config wizard [--out PATH] [--answers FILE]
//! vqaopt config validate PATH
//! vqaopt config plugins [--kind K]
//! vqaopt run PATH [--set key=value]... [--dry-run] [--out DIR]
//! vqaopt list-results [--out DIR]
//! ```
//!
//! Results go to `<root>/<run.name>`, where the root is `--out`, else
//! `$VQAOPT_OUT_DIR`, else the config's `run.out`.

use std::ffi::OsString;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::{wizard, ConfigError, ExperimentConfig};
use crate::pipeline::{list_results, plan, run_experiment, PipelineError};
use crate::problem::{PluginKind, PluginRegistry};

pub const OUT_DIR_VAR: &str = "VQAOPT_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ABORTED: i32 = 1;
/// Bad arguments, unreadable or invalid configs.
pub const EXIT_CONFIG: i32 = 2;
/// Loader input or result files that cannot be read or written.
pub const EXIT_IO: i32 = 3;
pub const EXIT_SOLVE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "vqaopt", version, about = "Variational quantum optimization experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write, check and inspect configurations.
    #[command(subcommand)]
    Config(ConfigCommand),
    /// Run an experiment.
    Run {
        path: PathBuf,
        /// Dotted override, e.g. `ansatz.depth=[1,2]`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Validate and print the plan without solving.
        #[arg(long)]
        dry_run: bool,
        /// Results root directory.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// List experiment directories under the results root.
    ListResults {
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConfigCommand {
    /// Build a configuration interactively.
    Wizard {
        #[arg(long, value_name = "PATH", default_value = "vqaopt.toml")]
        out: PathBuf,
        /// Read answers from a file instead of the terminal.
        #[arg(long, value_name = "FILE")]
        answers: Option<PathBuf>,
    },
    /// Check a configuration file.
    Validate { path: PathBuf },
    /// List registered plugins and their fields.
    Plugins {
        #[arg(long, value_name = "KIND")]
        kind: Option<PluginKind>,
    },
}

/// Streams and environment a command runs against.
pub struct Io<'a> {
    pub stdin: &'a mut dyn BufRead,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
    /// Value of `VQAOPT_OUT_DIR`, if set.
    pub out_env: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        let code = match e {
            ConfigError::Write { .. } => EXIT_IO,
            ConfigError::Aborted => EXIT_ABORTED,
            _ => EXIT_CONFIG,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Config(c) => c.into(),
            PipelineError::Load(_) | PipelineError::Write { .. } => Failure {
                code: EXIT_IO,
                message: e.to_string(),
            },
            _ => Failure {
                code: EXIT_SOLVE,
                message: e.to_string(),
            },
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: e.to_string(),
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn main_with<I, T>(args: I, registry: &PluginRegistry, io: Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let stream = if e.use_stderr() { &mut *io.stderr } else { &mut *io.stdout };
            let _ = write!(stream, "{text}");
            return code;
        }
    };
    execute(cli.command, registry, io)
}

pub fn execute(command: Command, registry: &PluginRegistry, io: Io<'_>) -> i32 {
    let Io {
        stdin,
        stdout,
        stderr,
        out_env,
    } = io;
    let result = match command {
        Command::Config(ConfigCommand::Wizard { out, answers }) => config_wizard(registry, &out, answers, stdin, stdout),
        Command::Config(ConfigCommand::Validate { path }) => validate(registry, &path, stdout),
        Command::Config(ConfigCommand::Plugins { kind }) => show_plugins(registry, kind, stdout),
        Command::Run {
            path,
            overrides,
            dry_run,
            out,
        } => run(registry, &path, &overrides, dry_run, out.or(out_env), stdout),
        Command::ListResults { out } => show_results(&out.or(out_env).unwrap_or_else(|| "results".into()), stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn config_wizard(
    registry: &PluginRegistry,
    out: &Path,
    answers: Option<PathBuf>,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let config = match answers {
        Some(path) => {
            let file = std::fs::File::open(&path).map_err(|e| {
                Failure::from(ConfigError::Read {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })
            })?;
            wizard(registry, BufReader::new(file), &mut *stdout)?
        }
        None => wizard(registry, stdin, &mut *stdout)?,
    };
    config.save(out)?;
    writeln!(stdout, "wrote {}", out.display()).map_err(io_failure)
}

fn validate(registry: &PluginRegistry, path: &Path, stdout: &mut dyn Write) -> Result<(), Failure> {
    let config = ExperimentConfig::load(path)?;
    config.validate(registry)?;
    writeln!(stdout, "{} is valid", path.display()).map_err(io_failure)
}

fn show_plugins(registry: &PluginRegistry, kind: Option<PluginKind>, out: &mut dyn Write) -> Result<(), Failure> {
    for k in PluginKind::ALL.into_iter().filter(|k| kind.map_or(true, |want| want == *k)) {
        writeln!(out, "{k}:").map_err(io_failure)?;
        for name in registry.names(k) {
            let entry = registry.lookup(k, name).map_err(ConfigError::from)?;
            let flag = if entry.default_active { "" } else { " [optional]" };
            writeln!(out, "  {name}{flag}  {}", entry.summary).map_err(io_failure)?;
            for field in &entry.fields {
                writeln!(out, "      {field}").map_err(io_failure)?;
            }
        }
    }
    Ok(())
}

fn run(
    registry: &PluginRegistry,
    path: &Path,
    overrides: &[String],
    dry_run: bool,
    root: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let config = ExperimentConfig::load(path)?.with_overrides(overrides)?;
    config.validate(registry)?;
    let dir = root.unwrap_or_else(|| config.run.out.clone().into()).join(&config.run.name);
    if dry_run {
        let p = plan(&config, registry)?;
        let w = |out: &mut dyn Write, line: String| writeln!(out, "{line}").map_err(io_failure);
        w(out, format!("experiment `{}` (seed {})", config.run.name, config.run.seed))?;
        w(out, format!("  platform {}, ansatz {} at depths {:?}", p.platform, p.ansatz, p.depths))?;
        w(out, format!("  initializer {}, optimizer {}, {} restarts", p.initializer, p.optimizer, p.restarts))?;
        w(out, format!("  processors: {}", p.processors.join(", ")))?;
        w(out, format!("  {} instances, {} tasks", p.instances.len(), p.tasks))?;
        for i in &p.instances {
            w(out, format!("    {} ({}): {}", i.name, i.form, i.reductions.join(" -> ")))?;
        }
        return w(out, format!("  would write {}", dir.display()));
    }
    let experiment = run_experiment(&config, registry)?;
    for r in &experiment.records {
        let ratio = r
            .metrics
            .approximation_ratio
            .map_or("-".to_string(), |v| format!("{v:.4}"));
        writeln!(
            out,
            "{} p={} best={:.6} ratio={ratio} most-likely={}",
            r.problem, r.depth, r.result.best_value, r.most_likely
        )
        .map_err(io_failure)?;
    }
    experiment.write(&dir)?;
    writeln!(out, "wrote {}", dir.display()).map_err(io_failure)
}

fn show_results(root: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    for s in list_results(root)? {
        let m = &s.manifest;
        writeln!(
            out,
            "{}  seed {}  {} instances  {} records  {}",
            m.name,
            m.seed,
            m.instances,
            m.records,
            s.directory.display()
        )
        .map_err(io_failure)?;
    }
    Ok(())
}
