//! Run reports: echo, inputs, results and verdicts. Timing goes to stderr only, so
//! the same command and seed always print the same bytes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            inputs: Map::new(),
            results: Map::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.into(), v.into());
        self
    }

    pub fn result(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.results.insert(key.into(), v.into());
        self
    }

    pub fn verdict(&mut self, name: impl Into<String>, pass: bool) -> &mut Self {
        self.verdicts.push(Verdict {
            name: name.into(),
            pass,
            detail: None,
        });
        self
    }

    pub fn verdict_with(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> &mut Self {
        self.verdicts.push(Verdict {
            name: name.into(),
            pass,
            detail: Some(detail.into()),
        });
        self
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One `path: value` line per leaf, then the verdicts.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for (section, map) in [("inputs", &self.inputs), ("results", &self.results)] {
            for (k, v) in map {
                flatten(&mut out, &format!("{section}.{k}"), v);
            }
        }
        for v in &self.verdicts {
            let tag = if v.pass { "PASS" } else { "FAIL" };
            match &v.detail {
                Some(d) => {
                    let _ = writeln!(out, "{tag} {} ({d})", v.name);
                }
                None => {
                    let _ = writeln!(out, "{tag} {}", v.name);
                }
            }
        }
        out
    }
}

fn is_scalar_array(v: &Value) -> bool {
    v.as_array().is_some_and(|a| a.iter().all(|x| x.is_string() || x.is_number()))
}

fn flatten(out: &mut String, path: &str, v: &Value) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(out, &format!("{path}.{k}"), x);
            }
        }
        Value::Array(a) if is_scalar_array(v) => {
            let items: Vec<String> = a.iter().map(leaf).collect();
            let _ = writeln!(out, "{path}: ({})", items.join(", "));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(out, &format!("{path}[{i}]"), x);
            }
        }
        _ => {
            let _ = writeln!(out, "{path}: {}", leaf(v));
        }
    }
}

fn leaf(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Report {
        let mut r = Report::new("gseries");
        r.input("n", 2).result("g1", json!([["1", "1"], ["1/2", "3/2"]]));
        r.verdict("ok", true).verdict_with("other", false, "because");
        r
    }

    #[test]
    fn round_trip() {
        let r = sample();
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(!r.passed());
    }

    #[test]
    fn table_lines() {
        let t = sample().to_table();
        assert!(t.contains("results.g1[1]: (1/2, 3/2)"), "{t}");
        assert!(t.contains("FAIL other (because)"));
        assert!(t.contains("PASS ok"));
    }
}
