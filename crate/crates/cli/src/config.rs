use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{HarnessError, Result};

pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    Grover,
    Fisher,
    AnandanAharonov,
    Gravity,
    Thermal,
    Jacobi,
    Phases,
    Table1,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 8] = [
        ExperimentId::Grover,
        ExperimentId::Fisher,
        ExperimentId::AnandanAharonov,
        ExperimentId::Gravity,
        ExperimentId::Thermal,
        ExperimentId::Jacobi,
        ExperimentId::Phases,
        ExperimentId::Table1,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentId::Grover => "grover",
            ExperimentId::Fisher => "fisher",
            ExperimentId::AnandanAharonov => "anandan-aharonov",
            ExperimentId::Gravity => "gravity",
            ExperimentId::Thermal => "thermal",
            ExperimentId::Jacobi => "jacobi",
            ExperimentId::Phases => "phases",
            ExperimentId::Table1 => "table1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    pub h: Option<f64>,
    pub end: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Record real wall-clock times; off by default so reruns are byte-identical.
    #[serde(default)]
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

const TOP_LEVEL: [&str; 5] = ["experiment", "parameters", "integrator", "output", "seed"];

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_with_overrides(text, &[])
    }

    /// Parses `text` after applying `key=value` overrides. Dotted keys address
    /// nested fields (`integrator.h`, `output.format`); a bare key that is not a
    /// top-level field is taken as a parameter. Values parse as JSON when they
    /// can, and as strings otherwise.
    pub fn from_json_with_overrides(text: &str, overrides: &[String]) -> Result<Self> {
        let located = |e: serde_json::Error| HarnessError::Config(e.to_string());
        let mut doc: Value = serde_json::from_str(text).map_err(located)?;
        if !doc.is_object() {
            return Err(HarnessError::Config("top level must be a JSON object".into()));
        }
        if overrides.is_empty() {
            return serde_json::from_str(text).map_err(located);
        }
        for item in overrides {
            apply_override(&mut doc, item)?;
        }
        // Values carry no positions; if the file alone is invalid, report it with its line.
        serde_json::from_value(doc).map_err(|e| match serde_json::from_str::<Self>(text) {
            Err(file_error) if file_error.to_string().contains(&e.to_string()) => located(file_error),
            _ => HarnessError::Config(e.to_string()),
        })
    }
}

fn apply_override(doc: &mut Value, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| HarnessError::Config(format!("override `{item}` is not key=value")))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(HarnessError::Config(format!("override `{item}` has an empty key")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut path: Vec<&str> = key.split('.').collect();
    if path.len() == 1 && !TOP_LEVEL.contains(&path[0]) {
        path.insert(0, "parameters");
    }
    let mut node = doc;
    for part in &path[..path.len() - 1] {
        let map = node
            .as_object_mut()
            .ok_or_else(|| HarnessError::Config(format!("override `{key}` descends into a non-object")))?;
        node = map.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    node.as_object_mut()
        .ok_or_else(|| HarnessError::Config(format!("override `{key}` descends into a non-object")))?
        .insert(path[path.len() - 1].to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let c = ExperimentConfig::from_json(r#"{"experiment": "grover"}"#).unwrap();
        assert_eq!(c.experiment, ExperimentId::Grover);
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.output.format, Format::Csv);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        for bad in [
            r#"{"experiment": "grover", "sead": 3}"#,
            r#"{"experiment": "grover", "output": {"fromat": "csv"}}"#,
            r#"{"experiment": "grover", "integrator": {"step": 0.1}}"#,
            r#"{"experiment": "grovr"}"#,
        ] {
            assert!(matches!(ExperimentConfig::from_json(bad), Err(HarnessError::Config(_))), "{bad}");
        }
    }

    #[test]
    fn errors_carry_location() {
        let err = ExperimentConfig::from_json("{\n  \"experiment\": \"grover\",\n  \"bogus\": 1\n}").unwrap_err();
        let text = err.to_string();
        assert!(text.contains("bogus") && text.contains("line 3"), "{text}");
    }

    #[test]
    fn overrides_take_precedence() {
        let c = ExperimentConfig::from_json_with_overrides(
            r#"{"experiment": "grover", "parameters": {"N": 4}, "seed": 1}"#,
            &["N=16".into(), "seed=9".into(), "output.format=json".into(), "integrator.h=0.5".into()],
        )
        .unwrap();
        assert_eq!(c.parameters["N"], 16.0);
        assert_eq!(c.seed, 9);
        assert_eq!(c.output.format, Format::Json);
        assert_eq!(c.integrator.h, Some(0.5));
    }
}
