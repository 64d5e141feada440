use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    /// Asserted checks decide the exit code; the others are informational.
    pub asserted: bool,
    pub passed: bool,
}

/// Verdicts and data of one run. JSON and text render the same content;
/// timing appears only in text so that JSON is byte-stable.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: Vec<String>,
    pub checks: Vec<Check>,
    pub sections: Vec<(String, Value)>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            command,
            ..Report::default()
        }
    }

    pub fn assert(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check {
            name: name.into(),
            asserted: true,
            passed,
        });
    }

    pub fn note(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check {
            name: name.into(),
            asserted: false,
            passed,
        });
    }

    pub fn section(&mut self, name: impl Into<String>, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report data serializes");
        self.sections.push((name.into(), v));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().filter(|c| c.asserted).all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let data: serde_json::Map<String, Value> = self.sections.iter().cloned().collect();
        let v = json!({
            "command": self.command,
            "passed": self.passed(),
            "checks": self.checks,
            "data": data,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("json");
        s.push('\n');
        s
    }

    pub fn to_text(&self, elapsed: Option<Duration>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command.join(" "));
        for c in &self.checks {
            let tag = match (c.passed, c.asserted) {
                (true, true) => "PASS",
                (false, true) => "FAIL",
                (true, false) => "yes ",
                (false, false) => "no  ",
            };
            let kind = if c.asserted { "" } else { "  (informational)" };
            let _ = writeln!(out, "[{tag}] {}{kind}", c.name);
        }
        for (name, v) in &self.sections {
            let _ = writeln!(out, "{name}:");
            flatten(&mut out, "  ", "", v);
        }
        let _ = writeln!(out, "overall: {}", if self.passed() { "pass" } else { "fail" });
        if let Some(t) = elapsed {
            let _ = writeln!(out, "time: {:.3} s", t.as_secs_f64());
        }
        out
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

fn is_leafy(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn flatten(out: &mut String, indent: &str, path: &str, v: &Value) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                flatten(out, indent, &p, x);
            }
        }
        Value::Array(a) if !is_leafy(v) => {
            for (i, x) in a.iter().enumerate() {
                flatten(out, indent, &format!("{path}[{i}]"), x);
            }
        }
        Value::Array(a) => {
            let items: Vec<String> = a.iter().map(scalar_text).collect();
            let _ = writeln!(out, "{indent}{path} = [{}]", items.join(", "));
        }
        Value::Object(_) => {
            let _ = writeln!(out, "{indent}{path} = {{}}");
        }
        _ => {
            let _ = writeln!(out, "{indent}{path} = {}", scalar_text(v));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_follows_asserted_checks_only() {
        let mut r = Report::new(vec!["x".into()]);
        r.note("info", false);
        assert!(r.passed());
        r.assert("claim", false);
        assert!(!r.passed());
    }

    #[test]
    fn text_carries_every_json_leaf() {
        let mut r = Report::new(vec!["x".into()]);
        r.assert("claim", true);
        r.section("dims", json!({"0": 1, "1": [4, 3], "w": {"a": null}}));
        let t = r.to_text(None);
        assert!(t.contains("[PASS] claim"));
        assert!(t.contains("dims:\n  0 = 1\n  1 = [4, 3]\n  w.a = none\n"), "{t}");
        assert!(!r.to_json().contains("time"));
    }
}
