//! Check outcomes and their text and JSON renderings.

use gcmirror::{BracketVerdict, Report};
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Value {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessOut {
    pub check: String,
    pub left: String,
    pub right: String,
    pub value: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub command: String,
    pub section: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub values: Vec<Value>,
    pub witnesses: Vec<WitnessOut>,
}

impl Outcome {
    pub fn new(command: &str, section: &str) -> Self {
        Outcome { command: command.into(), section: section.into(), pass: true, checks: vec![], values: vec![], witnesses: vec![] }
    }

    pub fn check(&mut self, label: impl Into<String>, pass: bool, detail: Option<String>) {
        self.pass &= pass;
        self.checks.push(Check { label: label.into(), pass, detail });
    }

    pub fn value(&mut self, name: impl Into<String>, value: impl Into<String>) {
        self.values.push(Value { name: name.into(), value: value.into() });
    }

    /// One check per label of `r`, in the order checked, with `prefix` prepended.
    pub fn report(&mut self, prefix: &str, r: &Report) {
        let mut labels: Vec<&str> = r.checked.iter().map(String::as_str).collect();
        for v in &r.violations {
            if !labels.contains(&v.label.as_str()) {
                labels.push(&v.label);
            }
        }
        for l in labels {
            let v = r.violations.iter().find(|v| v.label == l);
            let detail = v.map(|v| format!("entry ({}, {}) = {}", v.row + 1, v.col + 1, v.value));
            self.check(format!("{prefix}{l}"), v.is_none(), detail);
        }
    }

    pub fn bracket(&mut self, label: &str, v: &BracketVerdict) {
        let detail = format!("{} pairs", v.pairs_checked);
        self.check(label, v.integrable, Some(detail));
        if let Some(w) = &v.witness {
            self.witnesses.push(WitnessOut { check: label.into(), left: w.left.clone(), right: w.right.clone(), value: w.value.clone() });
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} [{}]", self.command, self.section);
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            match &c.detail {
                Some(d) => {
                    let _ = writeln!(out, "{tag}  {}  ({d})", c.label);
                }
                None => {
                    let _ = writeln!(out, "{tag}  {}", c.label);
                }
            }
        }
        for w in &self.witnesses {
            let _ = writeln!(out, "witness  {}: [{}, {}] = ({})", w.check, w.left, w.right, w.value.join(", "));
        }
        for v in &self.values {
            if v.value.contains('\n') {
                let _ = writeln!(out, "{}:", v.name);
                for line in v.value.lines() {
                    let _ = writeln!(out, "  {line}");
                }
            } else {
                let _ = writeln!(out, "{} = {}", v.name, v.value);
            }
        }
        let _ = writeln!(out, "result: {}", if self.pass { "pass" } else { "fail" });
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("outcome serializes");
        s.push('\n');
        s
    }
}
