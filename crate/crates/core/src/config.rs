//! Run manifests and the line-oriented config format.
//!
//! ```text
//! # comments start with '#'
//! [eprb]
//! phi1 = 0
//! phi2 = 120
//! entangled = true
//! beta = probability
//!
//! [output]
//! format = csv
//! verify = true
//! tol = 1e-10
//! ```
//!
//! Exactly one command section is allowed, plus an optional `[output]`
//! section. Angles are in degrees; lists are space-separated. Unknown
//! sections and keys are errors.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl ConfigError {
    fn at(line: Option<usize>, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Command {
    Eprb,
    BellQ,
    Ghzm,
    GhzTable,
    Lhv,
    Analyze,
    Sweep,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Eprb,
        Command::BellQ,
        Command::Ghzm,
        Command::GhzTable,
        Command::Lhv,
        Command::Analyze,
        Command::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Eprb => "eprb",
            Command::BellQ => "bell-q",
            Command::Ghzm => "ghzm",
            Command::GhzTable => "ghz-table",
            Command::Lhv => "lhv",
            Command::Analyze => "analyze",
            Command::Sweep => "sweep",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Keys accepted in this command's section.
    pub fn keys(self) -> &'static [(&'static str, ValueKind)] {
        use ValueKind::*;
        match self {
            Command::Eprb => &[
                ("theta1", Angle),
                ("phi1", Angle),
                ("theta2", Angle),
                ("phi2", Angle),
                ("entangled", Bool),
                ("beta", Beta),
            ],
            Command::BellQ => &[("angles", AngleTriple), ("theta", Angle)],
            Command::Ghzm => &[
                ("theta1", Angle),
                ("phi1", Angle),
                ("theta2", Angle),
                ("phi2", Angle),
                ("theta3", Angle),
                ("phi3", Angle),
                ("entangled", Bool),
                ("gamma", Gamma),
            ],
            Command::GhzTable => &[],
            Command::Lhv => &[("which", Choice(&["eprb", "ghz", "all"]))],
            Command::Analyze => &[
                ("theta1", Angle),
                ("phi1", Angle),
                ("theta2", Angle),
                ("phi2", Angle),
                ("ghzm", Bool),
            ],
            Command::Sweep => &[
                ("experiment", Choice(&["eprb", "ghzm"])),
                ("theta1", AngleList),
                ("phi1", AngleList),
                ("theta2", AngleList),
                ("phi2", AngleList),
                ("theta3", AngleList),
                ("phi3", AngleList),
                ("entangled", Bool),
                ("beta", Beta),
                ("gamma", Gamma),
            ],
        }
    }

    fn kind_of(self, key: &str) -> Option<ValueKind> {
        self.keys().iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Angle,
    AngleTriple,
    AngleList,
    Bool,
    /// `spin`, `probability`, or three distinct numbers.
    Beta,
    /// `even`, `odd`, or three distinct numbers.
    Gamma,
    Choice(&'static [&'static str]),
}

pub fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

fn parse_numbers(s: &str) -> Result<Vec<f64>, String> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("'{t}' is not a finite number"))
        })
        .collect()
}

fn parse_triple(s: &str, presets: &[&str]) -> Result<(), String> {
    if presets.contains(&s) {
        return Ok(());
    }
    let v = parse_numbers(s)?;
    if v.len() != 3 {
        return Err(format!(
            "expected one of {presets:?} or three numbers, got '{s}'"
        ));
    }
    if v[0] == v[1] || v[0] == v[2] || v[1] == v[2] {
        return Err(format!("eigenvalues must be distinct, got '{s}'"));
    }
    Ok(())
}

impl ValueKind {
    fn validate(self, value: &str) -> Result<(), String> {
        match self {
            ValueKind::Angle => {
                let v = parse_numbers(value)?;
                if v.len() != 1 {
                    return Err(format!("expected one angle in degrees, got '{value}'"));
                }
                Ok(())
            }
            ValueKind::AngleTriple => {
                if parse_numbers(value)?.len() != 3 {
                    return Err(format!("expected three angles, got '{value}'"));
                }
                Ok(())
            }
            ValueKind::AngleList => {
                if parse_numbers(value)?.is_empty() {
                    return Err("expected at least one angle".into());
                }
                Ok(())
            }
            ValueKind::Bool => parse_bool(value)
                .map(|_| ())
                .ok_or_else(|| format!("expected true or false, got '{value}'")),
            ValueKind::Beta => parse_triple(value, &["spin", "probability"]),
            ValueKind::Gamma => parse_triple(value, &["even", "odd"]),
            ValueKind::Choice(options) => {
                if options.contains(&value) {
                    Ok(())
                } else {
                    Err(format!("expected one of {options:?}, got '{value}'"))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Table => "table",
            OutputFormat::Csv => "csv",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "table" => Some(OutputFormat::Table),
            "csv" => Some(OutputFormat::Csv),
            _ => None,
        }
    }
}

/// A fully validated request: which pipeline to run and with what inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: Command,
    /// Validated values as written, keyed by parameter name.
    pub parameters: BTreeMap<String, String>,
    pub output_format: OutputFormat,
    pub verify: bool,
    pub tol: Option<f64>,
}

impl RunManifest {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            parameters: BTreeMap::new(),
            output_format: OutputFormat::Table,
            verify: false,
            tol: None,
        }
    }

    /// Set a command parameter after validating it.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        self.set_at(None, key, value)
    }

    fn set_at(&mut self, line: Option<usize>, key: &str, value: &str) -> Result<(), ConfigError> {
        let kind = self.command.kind_of(key).ok_or_else(|| {
            ConfigError::at(
                line,
                format!("unknown key '{key}' for command '{}'", self.command),
            )
        })?;
        let value = normalize(value);
        kind.validate(&value)
            .map_err(|m| ConfigError::at(line, format!("{key}: {m}")))?;
        self.parameters.insert(key.to_string(), value);
        Ok(())
    }

    /// Set an `[output]` key.
    pub fn set_output(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        self.set_output_at(None, key, value)
    }

    fn set_output_at(
        &mut self,
        line: Option<usize>,
        key: &str,
        value: &str,
    ) -> Result<(), ConfigError> {
        let value = value.trim();
        match key {
            "format" => {
                self.output_format = OutputFormat::from_name(value).ok_or_else(|| {
                    ConfigError::at(line, format!("format: expected table or csv, got '{value}'"))
                })?
            }
            "verify" => {
                self.verify = parse_bool(value).ok_or_else(|| {
                    ConfigError::at(line, format!("verify: expected true or false, got '{value}'"))
                })?
            }
            "tol" => {
                let t: f64 = value
                    .parse()
                    .ok()
                    .filter(|t: &f64| t.is_finite() && *t > 0.0)
                    .ok_or_else(|| {
                        ConfigError::at(line, format!("tol: expected a positive number, got '{value}'"))
                    })?;
                self.tol = Some(t);
            }
            _ => {
                return Err(ConfigError::at(
                    line,
                    format!("unknown key '{key}' in section [output]"),
                ))
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.parameters.get(key).map(String::as_str)
    }

    pub fn angle_deg(&self, key: &str, default: f64) -> f64 {
        self.numbers(key).map(|v| v[0]).unwrap_or(default)
    }

    pub fn numbers(&self, key: &str) -> Option<Vec<f64>> {
        self.get(key).map(|s| parse_numbers(s).expect("validated on insert"))
    }

    pub fn flag(&self, key: &str, default: bool) -> bool {
        self.get(key)
            .map(|s| parse_bool(s).expect("validated on insert"))
            .unwrap_or(default)
    }

    /// `β` triple: the `beta` value, defaulting to the spin preset.
    pub fn beta(&self) -> [f64; 3] {
        use crate::measurement::BetaPreset;
        self.triple("beta", |s| BetaPreset::from_name(s).map(BetaPreset::values))
            .unwrap_or(BetaPreset::Spin.values())
    }

    /// `γ` triple: the `gamma` value, defaulting to the even preset.
    pub fn gamma(&self) -> [f64; 3] {
        use crate::ghzm::GammaPreset;
        self.triple("gamma", |s| GammaPreset::from_name(s).map(GammaPreset::values))
            .unwrap_or(GammaPreset::Even.values())
    }

    fn triple(&self, key: &str, preset: impl Fn(&str) -> Option<[f64; 3]>) -> Option<[f64; 3]> {
        let s = self.get(key)?;
        preset(s).or_else(|| {
            let v = parse_numbers(s).expect("validated on insert");
            Some([v[0], v[1], v[2]])
        })
    }

    /// Render back to config text; [`parse_config`] of the result yields an
    /// identical manifest.
    pub fn to_config_text(&self) -> String {
        let mut out = format!("[{}]\n", self.command);
        for (k, v) in &self.parameters {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out.push_str("\n[output]\n");
        out.push_str(&format!("format = {}\n", self.output_format.name()));
        out.push_str(&format!("verify = {}\n", self.verify));
        if let Some(t) = self.tol {
            out.push_str(&format!("tol = {t:e}\n"));
        }
        out
    }
}

fn normalize(value: &str) -> String {
    value.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn is_key(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '-')
}

enum Section {
    Command,
    Output,
}

pub fn parse_config(text: &str) -> Result<RunManifest, ConfigError> {
    let mut manifest: Option<RunManifest> = None;
    let mut pending_output: Vec<(usize, String, String)> = Vec::new();
    let mut section: Option<Section> = None;
    let mut seen_output = false;
    let mut seen_keys: Vec<(bool, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = Some(idx + 1);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::at(line_no, format!("malformed section header '{line}'")))?
                .trim();
            if name == "output" {
                if seen_output {
                    return Err(ConfigError::at(line_no, "duplicate section [output]"));
                }
                seen_output = true;
                section = Some(Section::Output);
            } else if let Some(cmd) = Command::from_name(name) {
                if let Some(m) = &manifest {
                    return Err(ConfigError::at(
                        line_no,
                        format!("section [{name}] after [{}]: only one command section is allowed", m.command),
                    ));
                }
                manifest = Some(RunManifest::new(cmd));
                section = Some(Section::Command);
            } else {
                return Err(ConfigError::at(line_no, format!("unknown section [{name}]")));
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::at(line_no, format!("expected 'key = value', got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if !is_key(key) {
            return Err(ConfigError::at(line_no, format!("invalid key '{key}'")));
        }
        if value.is_empty() || value.contains('=') {
            return Err(ConfigError::at(line_no, format!("malformed value for '{key}'")));
        }
        let in_output = match section {
            None => {
                return Err(ConfigError::at(line_no, "key outside of any section"));
            }
            Some(Section::Output) => true,
            Some(Section::Command) => false,
        };
        if seen_keys.iter().any(|(o, k)| *o == in_output && k == key) {
            return Err(ConfigError::at(line_no, format!("duplicate key '{key}'")));
        }
        seen_keys.push((in_output, key.to_string()));
        if in_output {
            pending_output.push((idx + 1, key.to_string(), value.to_string()));
        } else {
            manifest
                .as_mut()
                .expect("command section open")
                .set_at(line_no, key, value)?;
        }
    }

    let mut manifest = manifest.ok_or_else(|| ConfigError::at(None, "no command section found"))?;
    for (line, key, value) in pending_output {
        manifest.set_output_at(Some(line), &key, &value)?;
    }
    Ok(manifest)
}
