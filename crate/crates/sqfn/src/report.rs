//! Experiment reports with their parameters and declared tolerances.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sqfn_core::{GridSpec, ScaleGrid};

use crate::error::{Result, SqfnError};

/// Direction of a tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

/// A measured quantity against its threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, bound: Bound, limit: f64) -> Self {
        let pass = match bound {
            Bound::AtMost => value <= limit,
            Bound::AtLeast => value >= limit,
        };
        Self { name: name.into(), value, bound, limit, pass }
    }
}

/// One corpus member (or member × p) and the numbers it produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportItem {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub values: BTreeMap<String, f64>,
}

impl ReportItem {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), params: BTreeMap::new(), values: BTreeMap::new() }
    }

    pub fn param(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.params.insert(key.into(), v.into());
        self
    }

    pub fn value(mut self, key: &str, v: f64) -> Self {
        self.values.insert(key.into(), v);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub params: BTreeMap<String, Value>,
    pub items: Vec<ReportItem>,
    pub constants: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_s: Option<f64>,
}

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>) -> Self {
        Self {
            experiment: experiment.into(),
            params: BTreeMap::new(),
            items: Vec::new(),
            constants: BTreeMap::new(),
            checks: Vec::new(),
            pass: true,
            wall_clock_s: None,
        }
    }

    pub fn param(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.params.insert(key.into(), v.into());
        self
    }

    pub fn grid(&mut self, g: &GridSpec) -> &mut Self {
        self.param("dim", g.dim())
            .param("size", g.size())
            .param("box", g.length())
            .param("spacing", g.spacing())
    }

    pub fn scales(&mut self, s: &ScaleGrid) -> &mut Self {
        self.param("tmin", s.t_min())
            .param("tmax", s.t_max())
            .param("scales_per_octave", s.per_octave())
            .param("nodes", s.len())
    }

    pub fn item(&mut self, item: ReportItem) -> &mut Self {
        self.items.push(item);
        self
    }

    pub fn constant(&mut self, key: &str, v: f64) -> &mut Self {
        self.constants.insert(key.into(), v);
        self
    }

    pub fn check(&mut self, name: impl Into<String>, value: f64, bound: Bound, limit: f64) -> &mut Self {
        let c = Check::new(name, value, bound, limit);
        self.pass &= c.pass;
        self.checks.push(c);
        self
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// One row per item; columns are the experiment, the item name and the
    /// sorted union of item parameter and value keys.
    pub fn to_csv(&self) -> Result<String> {
        let params: BTreeSet<&String> = self.items.iter().flat_map(|i| i.params.keys()).collect();
        let values: BTreeSet<&String> = self.items.iter().flat_map(|i| i.values.keys()).collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["experiment".to_string(), "item".to_string()];
        header.extend(params.iter().map(|k| k.to_string()));
        header.extend(values.iter().map(|k| k.to_string()));
        w.write_record(&header)?;
        for item in &self.items {
            let mut row = vec![self.experiment.clone(), item.name.clone()];
            row.extend(params.iter().map(|k| match item.params.get(*k) {
                Some(Value::String(s)) => s.clone(),
                Some(v) => v.to_string(),
                None => String::new(),
            }));
            row.extend(values.iter().map(|k| item.values.get(*k).map(|v| format!("{v:?}")).unwrap_or_default()));
            w.write_record(&row)?;
        }
        let bytes = w.into_inner().map_err(|e| SqfnError::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| SqfnError::Format(e.to_string()))
    }
}

/// max/min − 1 over positive values.
pub fn relative_spread(values: &[f64]) -> f64 {
    let (lo, hi) = min_max(values);
    hi / lo - 1.0
}

/// max/min over positive values.
pub fn spread_factor(values: &[f64]) -> f64 {
    let (lo, hi) = min_max(values);
    hi / lo
}

fn min_max(values: &[f64]) -> (f64, f64) {
    values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_fails_every_check() {
        assert!(!Check::new("x", f64::NAN, Bound::AtMost, 1.0).pass);
        assert!(!Check::new("x", f64::NAN, Bound::AtLeast, 1.0).pass);
    }

    #[test]
    fn pass_tracks_checks() {
        let mut r = ExperimentReport::new("demo");
        r.check("a", 0.5, Bound::AtMost, 1.0);
        assert!(r.pass);
        r.check("b", 0.5, Bound::AtLeast, 1.0);
        assert!(!r.pass);
        assert_eq!(r.failed_checks().count(), 1);
    }

    #[test]
    fn csv_has_union_columns() {
        let mut r = ExperimentReport::new("demo");
        r.item(ReportItem::new("a").param("p", 2.0).value("ratio", 1.5));
        r.item(ReportItem::new("b").param("gen", "gaussian:1").value("other", 0.25));
        let csv = r.to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "experiment,item,gen,p,other,ratio");
        assert_eq!(lines.next().unwrap(), "demo,a,,2.0,,1.5");
        assert_eq!(lines.next().unwrap(), "demo,b,gaussian:1,,0.25,");
    }

    #[test]
    fn spreads() {
        assert!((relative_spread(&[1.0, 1.01, 1.005]) - 0.01).abs() < 1e-12);
        assert_eq!(spread_factor(&[2.0, 8.0]), 4.0);
    }
}
