//! Machine-readable command reports.

use std::collections::BTreeMap;

use coxsurf_core::classify::Justification;
use coxsurf_core::num::fmt_rat;
use coxsurf_core::{DivisorClass, Rat};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub results: Value,
    pub justification: Vec<JustificationEntry>,
    pub bounds: BTreeMap<String, u64>,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JustificationEntry {
    pub rule: String,
    pub detail: String,
}

impl From<&Justification> for JustificationEntry {
    fn from(j: &Justification) -> Self {
        Self { rule: j.rule.id().to_string(), detail: j.detail.clone() }
    }
}

impl Report {
    pub fn new(command: &[String]) -> Self {
        Self {
            command: command.to_vec(),
            input_digest: None,
            results: Value::Null,
            justification: Vec::new(),
            bounds: BTreeMap::new(),
            exit_code: 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

pub fn rat(q: &Rat) -> Value {
    Value::String(fmt_rat(q))
}

pub fn class(d: &DivisorClass) -> Value {
    Value::Array(d.coords().iter().map(rat).collect())
}

pub fn classes(ds: &[DivisorClass]) -> Value {
    Value::Array(ds.iter().map(class).collect())
}

/// `(a, b, c)` with fractions written `p/q`.
pub fn class_text(d: &DivisorClass) -> String {
    let parts: Vec<String> = d.coords().iter().map(fmt_rat).collect();
    format!("({})", parts.join(", "))
}

/// `3H - E0 - 2E1` style, dropping zero terms.
pub fn class_named(d: &DivisorClass, labels: &[String]) -> String {
    use num_traits::{One, Signed, Zero};
    let mut out = String::new();
    for (x, label) in d.coords().iter().zip(labels) {
        if x.is_zero() {
            continue;
        }
        let neg = x.is_negative();
        let a = x.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            out.push_str(&fmt_rat(&a));
        }
        out.push_str(label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
