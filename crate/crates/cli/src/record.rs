use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// How `measured` is judged against `reference`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    /// `|measured - reference| <= tolerance`.
    Abs,
    /// `measured >= reference`.
    Min,
    /// `measured <= reference`.
    Max,
}

impl Check {
    pub fn as_str(&self) -> &'static str {
        match self {
            Check::Abs => "abs",
            Check::Min => "min",
            Check::Max => "max",
        }
    }
}

/// One measured value with its reference, tolerance and verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub experiment: String,
    pub parameters: BTreeMap<String, f64>,
    pub quantity: String,
    pub check: Check,
    pub measured: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub abs_err: f64,
    /// `abs_err / |reference|`, or `abs_err` when the reference is zero.
    pub rel_err: f64,
    pub pass: bool,
    pub wall_ms: u64,
}

impl ResultRecord {
    fn build(
        experiment: &str,
        parameters: &[(&str, f64)],
        quantity: &str,
        check: Check,
        measured: f64,
        reference: f64,
        tolerance: f64,
    ) -> Self {
        let abs_err = (measured - reference).abs();
        let rel_err = if reference != 0.0 { abs_err / reference.abs() } else { abs_err };
        let pass = measured.is_finite()
            && match check {
                Check::Abs => abs_err <= tolerance,
                Check::Min => measured >= reference,
                Check::Max => measured <= reference,
            };
        Self {
            experiment: experiment.to_string(),
            parameters: parameters.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            quantity: quantity.to_string(),
            check,
            measured,
            reference,
            tolerance,
            abs_err,
            rel_err,
            pass,
            wall_ms: 0,
        }
    }

    pub fn within(
        experiment: &str,
        parameters: &[(&str, f64)],
        quantity: &str,
        measured: f64,
        reference: f64,
        tolerance: f64,
    ) -> Self {
        Self::build(experiment, parameters, quantity, Check::Abs, measured, reference, tolerance)
    }

    pub fn at_least(experiment: &str, parameters: &[(&str, f64)], quantity: &str, measured: f64, bound: f64) -> Self {
        Self::build(experiment, parameters, quantity, Check::Min, measured, bound, 0.0)
    }

    pub fn at_most(experiment: &str, parameters: &[(&str, f64)], quantity: &str, measured: f64, bound: f64) -> Self {
        Self::build(experiment, parameters, quantity, Check::Max, measured, bound, 0.0)
    }
}

pub fn all_pass(records: &[ResultRecord]) -> bool {
    records.iter().all(|r| r.pass)
}
