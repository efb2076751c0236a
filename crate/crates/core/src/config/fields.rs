use std::fmt;

use serde::Serialize;
use toml::Value;

/// Kind of value a configurable field holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "type", content = "choices")]
pub enum FieldKind {
    Text,
    Integer,
    Number,
    Boolean,
    Choice(Vec<String>),
    /// A number or the string `"auto"`.
    NumberOrAuto,
    IntegerList,
    /// Table of `name = [lower, upper]` pairs.
    Bounds,
}

/// Metadata attached to one configurable plugin field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldDescriptor {
    pub key: String,
    pub label: String,
    pub kind: FieldKind,
    pub default: Value,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub help: String,
}

impl FieldDescriptor {
    fn new(key: &str, label: &str, kind: FieldKind, default: Value) -> Self {
        Self {
            key: key.into(),
            label: label.into(),
            kind,
            default,
            min: None,
            max: None,
            help: String::new(),
        }
    }

    pub fn text(key: &str, label: &str, default: &str) -> Self {
        Self::new(key, label, FieldKind::Text, Value::String(default.into()))
    }

    pub fn integer(key: &str, label: &str, default: i64) -> Self {
        Self::new(key, label, FieldKind::Integer, Value::Integer(default))
    }

    pub fn number(key: &str, label: &str, default: f64) -> Self {
        Self::new(key, label, FieldKind::Number, Value::Float(default))
    }

    pub fn boolean(key: &str, label: &str, default: bool) -> Self {
        Self::new(key, label, FieldKind::Boolean, Value::Boolean(default))
    }

    pub fn choice(key: &str, label: &str, choices: &[&str], default: &str) -> Self {
        Self::new(
            key,
            label,
            FieldKind::Choice(choices.iter().map(|c| c.to_string()).collect()),
            Value::String(default.into()),
        )
    }

    pub fn number_or_auto(key: &str, label: &str) -> Self {
        Self::new(key, label, FieldKind::NumberOrAuto, Value::String("auto".into()))
    }

    pub fn integer_list(key: &str, label: &str, default: &[i64]) -> Self {
        Self::new(
            key,
            label,
            FieldKind::IntegerList,
            Value::Array(default.iter().map(|&v| Value::Integer(v)).collect()),
        )
    }

    pub fn bounds(key: &str, label: &str) -> Self {
        Self::new(key, label, FieldKind::Bounds, Value::Table(Default::default()))
    }

    /// Inclusive numeric range for numbers, integers and list entries.
    pub fn range(mut self, min: f64, max: f64) -> Self {
        self.min = Some(min);
        self.max = Some(max);
        self
    }

    pub fn min(mut self, min: f64) -> Self {
        self.min = Some(min);
        self
    }

    pub fn help(mut self, help: &str) -> Self {
        self.help = help.into();
        self
    }

    /// Human-readable statement of what `validate` accepts.
    pub fn constraint(&self) -> String {
        let range = match (self.min, self.max) {
            (Some(lo), Some(hi)) => format!(" in [{lo}, {hi}]"),
            (Some(lo), None) => format!(" >= {lo}"),
            (None, Some(hi)) => format!(" <= {hi}"),
            (None, None) => String::new(),
        };
        match &self.kind {
            FieldKind::Text => "text".into(),
            FieldKind::Integer => format!("integer{range}"),
            FieldKind::Number => format!("number{range}"),
            FieldKind::Boolean => "true or false".into(),
            FieldKind::Choice(choices) => format!("one of {}", choices.join(", ")),
            FieldKind::NumberOrAuto => format!("\"auto\" or a number{range}"),
            FieldKind::IntegerList => format!("list of integers{range}"),
            FieldKind::Bounds => "table of name = [lower, upper] with lower < upper".into(),
        }
    }

    fn check_range(&self, v: f64) -> Result<(), String> {
        if !v.is_finite() {
            return Err(format!("{}: {v} is not finite", self.key));
        }
        if self.min.is_some_and(|lo| v < lo) || self.max.is_some_and(|hi| v > hi) {
            return Err(format!("{}: {v} is not {}", self.key, self.constraint()));
        }
        Ok(())
    }

    pub fn validate(&self, value: &Value) -> Result<(), String> {
        let wrong = || format!("{}: expected {}, got {value}", self.key, self.constraint());
        match (&self.kind, value) {
            (FieldKind::Text, Value::String(_)) => Ok(()),
            (FieldKind::Integer, Value::Integer(i)) => self.check_range(*i as f64),
            (FieldKind::Number, Value::Float(f)) => self.check_range(*f),
            (FieldKind::Number, Value::Integer(i)) => self.check_range(*i as f64),
            (FieldKind::Boolean, Value::Boolean(_)) => Ok(()),
            (FieldKind::Choice(choices), Value::String(s)) if choices.contains(s) => Ok(()),
            (FieldKind::NumberOrAuto, Value::String(s)) if s == "auto" => Ok(()),
            (FieldKind::NumberOrAuto, Value::Float(f)) => self.check_range(*f),
            (FieldKind::NumberOrAuto, Value::Integer(i)) => self.check_range(*i as f64),
            (FieldKind::IntegerList, Value::Array(items)) if !items.is_empty() => {
                for item in items {
                    match item {
                        Value::Integer(i) => self.check_range(*i as f64)?,
                        _ => return Err(wrong()),
                    }
                }
                Ok(())
            }
            (FieldKind::Bounds, Value::Table(table)) => {
                for (name, pair) in table {
                    let pair = pair.as_array().filter(|p| p.len() == 2).ok_or_else(wrong)?;
                    let num = |v: &Value| v.as_float().or_else(|| v.as_integer().map(|i| i as f64));
                    match (num(&pair[0]), num(&pair[1])) {
                        (Some(lo), Some(hi)) if lo < hi && lo.is_finite() && hi.is_finite() => {}
                        _ => return Err(format!("{}: bounds for `{name}` must be [lower, upper] with lower < upper", self.key)),
                    }
                }
                Ok(())
            }
            _ => Err(wrong()),
        }
    }

    /// Parses one line of interactive input into a value of this kind.
    pub fn parse_input(&self, input: &str) -> Result<Value, String> {
        let input = input.trim();
        let value = match &self.kind {
            FieldKind::Text => Value::String(input.into()),
            FieldKind::Integer => Value::Integer(input.parse().map_err(|_| format!("`{input}` is not an integer"))?),
            FieldKind::Number => Value::Float(parse_number(input)?),
            FieldKind::Boolean => match input.to_ascii_lowercase().as_str() {
                "true" | "yes" | "y" => Value::Boolean(true),
                "false" | "no" | "n" => Value::Boolean(false),
                _ => return Err(format!("`{input}` is not true or false")),
            },
            FieldKind::Choice(choices) => {
                let chosen = match input.parse::<usize>() {
                    Ok(i) if (1..=choices.len()).contains(&i) => choices[i - 1].clone(),
                    _ => input.to_string(),
                };
                Value::String(chosen)
            }
            FieldKind::NumberOrAuto if input == "auto" => Value::String("auto".into()),
            FieldKind::NumberOrAuto => Value::Float(parse_number(input)?),
            FieldKind::IntegerList => Value::Array(
                input
                    .split(',')
                    .map(|s| s.trim().parse().map(Value::Integer).map_err(|_| format!("`{s}` is not an integer")))
                    .collect::<Result<_, _>>()?,
            ),
            FieldKind::Bounds => {
                let mut table = toml::Table::new();
                for part in input.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let (name, range) = part
                        .split_once('=')
                        .ok_or_else(|| format!("`{part}` is not name=lower:upper"))?;
                    let (lo, hi) = range
                        .split_once(':')
                        .ok_or_else(|| format!("`{range}` is not lower:upper"))?;
                    table.insert(
                        name.trim().into(),
                        Value::Array(vec![Value::Float(parse_number(lo)?), Value::Float(parse_number(hi)?)]),
                    );
                }
                Value::Table(table)
            }
        };
        self.validate(&value)?;
        Ok(value)
    }
}

fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    match s {
        "pi" => Ok(std::f64::consts::PI),
        "-pi" => Ok(-std::f64::consts::PI),
        _ => s.parse().map_err(|_| format!("`{s}` is not a number")),
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}): {} [default {}]", self.label, self.key, self.constraint(), self.default)
    }
}

/// Rejects keys of `table` that no descriptor accepts, then validates the rest.
pub fn check_table(table: &toml::Table, fields: &[FieldDescriptor]) -> Result<(), String> {
    for (key, value) in table {
        let field = fields
            .iter()
            .find(|f| &f.key == key)
            .ok_or_else(|| {
                let known: Vec<&str> = fields.iter().map(|f| f.key.as_str()).collect();
                format!("unknown field `{key}` (accepted: {})", known.join(", "))
            })?;
        field.validate(value)?;
    }
    Ok(())
}

/// Deserializes plugin settings after checking keys against `fields`.
pub fn settings_from<T: serde::de::DeserializeOwned>(
    table: &toml::Table,
    fields: &[FieldDescriptor],
) -> Result<T, String> {
    check_table(table, fields)?;
    Value::Table(table.clone())
        .try_into()
        .map_err(|e: toml::de::Error| e.message().to_string())
}
