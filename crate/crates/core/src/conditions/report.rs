//! Condition reports.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::sample::{SampleSpec, TInterval};
use crate::extended::Extended;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    A0,
    A1,
    #[serde(rename = "A1prime")]
    A1Prime,
    A2,
    #[serde(rename = "aInc")]
    AInc,
    #[serde(rename = "aDec")]
    ADec,
    Equiv,
    WeakEquiv,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::A0 => "A0",
            Condition::A1 => "A1",
            Condition::A1Prime => "A1'",
            Condition::A2 => "A2",
            Condition::AInc => "aInc",
            Condition::ADec => "aDec",
            Condition::Equiv => "equiv",
            Condition::WeakEquiv => "weak-equiv",
        };
        f.write_str(s)
    }
}

/// The sample attaining the extremal value of a check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<f64>>,
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    /// The extremal quantity at this sample (ratio, β or violation factor; see the report's condition).
    pub value: Extended,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub holds: bool,
    /// Set when no admissible sample existed and `holds` is vacuous.
    #[serde(default)]
    pub inconclusive: bool,
    pub constants: BTreeMap<String, Extended>,
    pub sample_spec: SampleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_range: Option<TInterval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn new(condition: Condition, sample_spec: &SampleSpec) -> Self {
        ConditionReport {
            condition,
            holds: false,
            inconclusive: false,
            constants: BTreeMap::new(),
            sample_spec: sample_spec.clone(),
            t_range: None,
            worst_witness: None,
            notes: Vec::new(),
        }
    }

    pub fn set(&mut self, name: &str, value: impl Into<Extended>) -> &mut Self {
        self.constants.insert(name.to_string(), value.into());
        self
    }

    /// A named constant; `None` when the check did not produce it.
    pub fn constant(&self, name: &str) -> Option<Extended> {
        self.constants.get(name).copied()
    }

    /// A named constant as a float (`+∞` for infinite values, NaN when absent).
    pub fn value(&self, name: &str) -> f64 {
        self.constant(name).map_or(f64::NAN, Extended::to_f64)
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    /// Fixed-width one-line summary.
    pub fn table_row(&self) -> String {
        let verdict = match (self.holds, self.inconclusive) {
            (_, true) => "vacuous",
            (true, _) => "holds",
            (false, _) => "fails",
        };
        let consts: Vec<String> = self
            .constants
            .iter()
            .map(|(k, v)| match v {
                Extended::Finite(x) => format!("{k}={x:.6}"),
                Extended::Infinite => format!("{k}=inf"),
            })
            .collect();
        format!("{:<11} {:<8} {}", self.condition.to_string(), verdict, consts.join(" "))
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.table_row())
    }
}
