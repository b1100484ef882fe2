use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::series::fmt17;

/// How a metric is judged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "threshold")]
pub enum Check {
    /// Reported, not judged.
    Info,
    /// Passes when `value < threshold`.
    Below(f64),
    /// Passes when `value ≤ threshold`.
    AtMost(f64),
    /// Passes when `value > threshold`.
    Above(f64),
    /// Passes when `value ≥ threshold`.
    AtLeast(f64),
}

impl Check {
    fn judge(self, v: f64) -> Option<bool> {
        match self {
            Check::Info => None,
            Check::Below(t) => Some(v < t),
            Check::AtMost(t) => Some(v <= t),
            Check::Above(t) => Some(v > t),
            Check::AtLeast(t) => Some(v >= t),
        }
    }

    fn describe(self) -> String {
        match self {
            Check::Info => String::new(),
            Check::Below(t) => format!("< {t:e}"),
            Check::AtMost(t) => format!("<= {t:e}"),
            Check::Above(t) => format!("> {t:e}"),
            Check::AtLeast(t) => format!(">= {t:e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub check: Check,
    /// `None` for informational metrics.
    pub pass: Option<bool>,
}

/// Named metrics of one experiment run, with parameters and provenance.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub metrics: Vec<Metric>,
    /// Boolean checks that are not tied to one number.
    pub conditions: BTreeMap<String, bool>,
    pub pass: bool,
    pub duration_secs: f64,
    #[serde(skip)]
    started: Option<Instant>,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: BTreeMap::new(),
            metrics: Vec::new(),
            conditions: BTreeMap::new(),
            pass: true,
            duration_secs: 0.0,
            started: Some(Instant::now()),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.params.insert(key.to_string(), v);
        self
    }

    pub fn metric(&mut self, name: impl Into<String>, value: f64, check: Check) -> &mut Self {
        let pass = check.judge(value);
        if pass == Some(false) || (pass.is_some() && value.is_nan()) {
            self.pass = false;
        }
        self.metrics.push(Metric {
            name: name.into(),
            value,
            check,
            pass,
        });
        self
    }

    pub fn info(&mut self, name: impl Into<String>, value: f64) -> &mut Self {
        self.metric(name, value, Check::Info)
    }

    pub fn condition(&mut self, name: impl Into<String>, ok: bool) -> &mut Self {
        self.pass &= ok;
        self.conditions.insert(name.into(), ok);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.name == name).map(|m| m.value)
    }

    /// Stamps the wall-clock duration since creation.
    pub fn finish(mut self) -> Self {
        if let Some(t) = self.started.take() {
            self.duration_secs = t.elapsed().as_secs_f64();
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{}  [{verdict}]  {:.3}s", self.name, self.duration_secs);
        for (k, v) in &self.params {
            let _ = writeln!(out, "  {k:<24} {v}");
        }
        let width = self.metrics.iter().map(|m| m.name.len()).max().unwrap_or(0);
        for m in &self.metrics {
            let mark = match m.pass {
                None => "    ",
                Some(true) => "ok  ",
                Some(false) => "FAIL",
            };
            let _ = writeln!(
                out,
                "  {mark} {:<width$}  {:>24}  {}",
                m.name,
                fmt17(m.value),
                m.check.describe()
            );
        }
        for (k, ok) in &self.conditions {
            let _ = writeln!(out, "  {} {k}", if *ok { "ok  " } else { "FAIL" });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        let mut r = ExperimentReport::new("demo");
        r.param("seed", 7u64).info("x", 1.0).metric("y", 0.5, Check::Below(1.0));
        assert!(r.pass);
        r.metric("z", 2.0, Check::AtMost(1.0));
        assert!(!r.pass);
        let r = r.finish();
        let json: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["name"], "demo");
        assert_eq!(json["params"]["seed"], 7);
        assert_eq!(json["metrics"][2]["pass"], false);
        assert!(r.to_text().contains("FAIL"));
    }

    #[test]
    fn nan_fails_a_check() {
        let mut r = ExperimentReport::new("nan");
        r.metric("v", f64::NAN, Check::Below(1.0));
        assert!(!r.pass);
    }

    #[test]
    fn conditions_count() {
        let mut r = ExperimentReport::new("c");
        r.condition("monotone", false);
        assert!(!r.pass);
    }
}
