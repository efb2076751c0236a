use std::io::{BufRead, Write};

use toml::Value;

use super::{ConfigError, ExperimentConfig, FieldDescriptor, PluginSection, RunSection};
use crate::problem::{PluginKind, PluginRegistry};

struct Session<'r, R, W> {
    registry: &'r PluginRegistry,
    input: R,
    output: W,
}

fn io(e: std::io::Error) -> ConfigError {
    ConfigError::Write {
        path: "<terminal>".into(),
        message: e.to_string(),
    }
}

impl<R: BufRead, W: Write> Session<'_, R, W> {
    fn say(&mut self, text: &str) -> Result<(), ConfigError> {
        writeln!(self.output, "{text}").map_err(io)
    }

    /// One trimmed answer. End of input and `:q` abort the session.
    fn ask(&mut self, prompt: &str) -> Result<String, ConfigError> {
        write!(self.output, "{prompt}").map_err(io)?;
        self.output.flush().map_err(io)?;
        let mut line = String::new();
        if self.input.read_line(&mut line).map_err(io)? == 0 {
            return Err(ConfigError::Aborted);
        }
        let answer = line.trim().to_string();
        if answer == ":q" {
            return Err(ConfigError::Aborted);
        }
        Ok(answer)
    }

    /// Picks from `options` by number or name; empty picks `default`, if any.
    fn choose(&mut self, title: &str, options: &[(String, String)], default: Option<&str>) -> Result<Option<String>, ConfigError> {
        loop {
            self.say(&format!("? {title}"))?;
            for (i, (name, summary)) in options.iter().enumerate() {
                let line = if summary.is_empty() {
                    format!("  {}) {name}", i + 1)
                } else {
                    format!("  {}) {name}  {summary}", i + 1)
                };
                self.say(&line)?;
            }
            let prompt = match default {
                Some(d) => format!("[{d}] > "),
                None => "[done] > ".to_string(),
            };
            let answer = self.ask(&prompt)?;
            if answer.is_empty() {
                return Ok(default.map(String::from));
            }
            let picked = match answer.parse::<usize>() {
                Ok(i) if (1..=options.len()).contains(&i) => Some(options[i - 1].0.clone()),
                _ => options.iter().find(|(n, _)| *n == answer).map(|(n, _)| n.clone()),
            };
            match picked {
                Some(name) => return Ok(Some(name)),
                None => self.say(&format!("  not an option: `{answer}`"))?,
            }
        }
    }

    fn plugin_options(&self, kind: PluginKind) -> Vec<(String, String)> {
        self.registry
            .entries()
            .filter(|e| e.kind() == kind && e.default_active)
            .map(|e| (e.name.clone(), e.summary.clone()))
            .collect()
    }

    /// Field menu: pick a field by number, enter a value, repeat; an empty
    /// answer finishes. Only changed fields end up in `table`.
    fn edit_fields(&mut self, title: &str, fields: &[FieldDescriptor], table: &mut toml::Table) -> Result<(), ConfigError> {
        if fields.is_empty() {
            return Ok(());
        }
        loop {
            self.say(&format!("? Select a field to configure ({title}):"))?;
            for (i, f) in fields.iter().enumerate() {
                let (mark, value) = match table.get(&f.key) {
                    Some(v) => ("*", v),
                    None => ("D", &f.default),
                };
                self.say(&format!("  {}) {mark} {}: {}", i + 1, f.label, show(value)))?;
            }
            let answer = self.ask("[done] > ")?;
            if answer.is_empty() {
                return Ok(());
            }
            let Some(field) = answer
                .parse::<usize>()
                .ok()
                .and_then(|i| i.checked_sub(1))
                .and_then(|i| fields.get(i))
                .or_else(|| fields.iter().find(|f| f.key == answer))
            else {
                self.say(&format!("  not a field: `{answer}`"))?;
                continue;
            };
            self.edit_one(field, table)?;
        }
    }

    fn edit_one(&mut self, field: &FieldDescriptor, table: &mut toml::Table) -> Result<(), ConfigError> {
        if !field.help.is_empty() {
            self.say(&format!("  {}", field.help))?;
        }
        loop {
            let current = table.get(&field.key).unwrap_or(&field.default).clone();
            let answer = self.ask(&format!("  {} ({}) [{}]: ", field.label, field.constraint(), show(&current)))?;
            if answer.is_empty() {
                return Ok(());
            }
            match field.parse_input(&answer).and_then(|v| field.validate(&v).map(|_| v)) {
                Ok(value) => {
                    if value == field.default {
                        table.remove(&field.key);
                    } else {
                        table.insert(field.key.clone(), value);
                    }
                    return Ok(());
                }
                Err(message) => self.say(&format!("  invalid: {message}"))?,
            }
        }
    }

    /// Chooses and configures one plugin, re-opening the field menu until
    /// the plugin accepts its settings.
    fn section(&mut self, kind: PluginKind, default: &str) -> Result<PluginSection, ConfigError> {
        let options = self.plugin_options(kind);
        let name = self
            .choose(&format!("Select a {kind} plugin:"), &options, Some(default))?
            .expect("a default is given");
        let fields = self.registry.lookup(kind, &name)?.fields.clone();
        let mut section = PluginSection::new(&name);
        loop {
            self.edit_fields(&format!("{kind} {name}"), &fields, &mut section.settings)?;
            match build(self.registry, kind, &section) {
                Ok(()) => return Ok(section),
                Err(e) => self.say(&format!("  {e}"))?,
            }
        }
    }

    fn run_section(&mut self) -> Result<RunSection, ConfigError> {
        let fields = RunSection::fields();
        let mut table = toml::Table::new();
        loop {
            self.edit_fields("run", &fields, &mut table)?;
            let mut run = table.clone();
            if let Some(Value::String(list)) = run.remove("plugins") {
                let names: Vec<Value> = list
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| Value::String(s.into()))
                    .collect();
                run.insert("plugins".into(), Value::Array(names));
            }
            match Value::Table(run).try_into::<RunSection>() {
                Ok(section) => {
                    let unknown: Vec<&String> = section
                        .plugins
                        .iter()
                        .filter(|p| self.registry.kinds_of(p).is_empty())
                        .collect();
                    if unknown.is_empty() {
                        return Ok(section);
                    }
                    self.say(&format!("  unknown plugins: {unknown:?}"))?;
                }
                Err(e) => self.say(&format!("  invalid: {e}"))?,
            }
        }
    }
}

fn build(registry: &PluginRegistry, kind: PluginKind, section: &PluginSection) -> Result<(), ConfigError> {
    let (name, settings) = (section.name.as_str(), &section.settings);
    match kind {
        PluginKind::Loader => registry.loader(name, settings).map(drop),
        PluginKind::Platform => registry.platform(name, settings).map(drop),
        PluginKind::Ansatz => registry.ansatz(name, settings).map(drop),
        PluginKind::Reduction => registry.reduction(name, settings).map(drop),
        PluginKind::Initializer => registry.initializer(name, settings).map(drop),
        PluginKind::Optimizer => registry.optimizer(name, settings).map(drop),
        PluginKind::Processor => registry.processor(name, settings).map(drop),
    }
    .map_err(ConfigError::from)
}

fn show(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Table(t) if t.is_empty() => "(none)".into(),
        other => other.to_string(),
    }
}

/// Interactive session walking loader, platform, ansatz, initializer,
/// optimizer, processors and run settings. Returns a validated config;
/// `:q` or end of input aborts with `ConfigError::Aborted`.
pub fn wizard<R: BufRead, W: Write>(registry: &PluginRegistry, input: R, output: W) -> Result<ExperimentConfig, ConfigError> {
    let mut s = Session { registry, input, output };
    let loader = s.section(PluginKind::Loader, "acp")?;
    let platform = s.section(PluginKind::Platform, "statevector")?;
    let ansatz = s.section(PluginKind::Ansatz, "qaoa")?;
    let initializer = s.section(PluginKind::Initializer, "uniform-random")?;
    let optimizer = s.section(PluginKind::Optimizer, "local")?;

    let mut processors = Vec::new();
    let options = s.plugin_options(PluginKind::Processor);
    while let Some(name) = s.choose("Add a result processor:", &options, None)? {
        let fields = registry.lookup(PluginKind::Processor, &name)?.fields.clone();
        let mut section = PluginSection::new(&name);
        loop {
            s.edit_fields(&format!("processor {name}"), &fields, &mut section.settings)?;
            match build(registry, PluginKind::Processor, &section) {
                Ok(()) => break,
                Err(e) => s.say(&format!("  {e}"))?,
            }
        }
        processors.push(section);
    }

    let mut config = ExperimentConfig {
        platform,
        initializer,
        processors,
        ..ExperimentConfig::new(loader, ansatz, optimizer)
    };
    loop {
        config.run = s.run_section()?;
        match config.validate(registry) {
            Ok(()) => break,
            Err(e) => s.say(&format!("  {e}"))?,
        }
    }
    s.say("configuration complete")?;
    Ok(config)
}
