use std::collections::BTreeMap;

use serde::Serialize;

use super::config::{ExperimentConfig, ExperimentKind};
use super::stats::Estimate;
use super::ExperimentError;
use crate::linalg::CokernelClass;

/// How a row's gate compares the estimate with the limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateRule {
    /// `|estimate − limit| ≤ z·SE + drift`.
    TwoSided,
    /// `estimate ≥ limit − (z·SE + drift)`.
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub n: usize,
    pub statistic: String,
    pub trials: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(flatten)]
    pub estimate: Estimate,
    pub limit: Option<f64>,
    pub abs_diff: Option<f64>,
    pub drift: f64,
    pub tolerance: f64,
    pub gate_rule: GateRule,
    pub gate: Option<bool>,
}

impl ReportRow {
    pub(crate) fn new(n: usize, statistic: impl Into<String>, trials: u64, estimate: Estimate, limit: Option<f64>, drift: f64) -> Self {
        let tolerance = estimate.half_width() + drift;
        let abs_diff = limit.map(|l| (estimate.estimate - l).abs());
        ReportRow {
            n,
            statistic: statistic.into(),
            trials,
            alpha: None,
            beta: None,
            estimate,
            limit,
            abs_diff,
            drift,
            tolerance,
            gate_rule: GateRule::TwoSided,
            gate: abs_diff.map(|d| d <= tolerance),
        }
    }

    pub(crate) fn at_least(mut self) -> Self {
        self.gate_rule = GateRule::AtLeast;
        self.gate = self.limit.map(|l| self.estimate.estimate >= l - self.tolerance);
        self
    }

    pub(crate) fn with_alpha(mut self, alpha: Option<f64>) -> Self {
        self.alpha = alpha;
        self
    }

    pub(crate) fn with_beta(mut self, beta: Option<f64>) -> Self {
        self.beta = beta;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    /// Absent for disconnected graphs.
    pub class: Option<CokernelClass>,
    pub count: u64,
}

/// Raw per-size tallies.
#[derive(Clone, Debug, PartialEq, Default, Serialize)]
pub struct SizeSummary {
    pub n: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<ClassCount>,
    /// Corank or zero-column histogram.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub histogram: BTreeMap<usize, u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub kind: ExperimentKind,
    pub config: ExperimentConfig,
    pub level: u32,
    pub rows: Vec<ReportRow>,
    pub sizes: Vec<SizeSummary>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, f64>,
}

const CSV_HEADER: [&str; 19] = [
    "n",
    "statistic",
    "trials",
    "alpha",
    "beta",
    "estimate",
    "standard_error",
    "z",
    "ci_low",
    "ci_high",
    "wilson_low",
    "wilson_high",
    "limit",
    "abs_diff",
    "drift",
    "tolerance",
    "gate_rule",
    "gate",
    "kind",
];

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

impl EstimateReport {
    pub fn to_json(&self) -> Result<String, ExperimentError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| ExperimentError::Output(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> Result<String, ExperimentError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        let io = |e: csv::Error| ExperimentError::Output(e.to_string());
        w.write_record(CSV_HEADER).map_err(io)?;
        for r in &self.rows {
            let e = &r.estimate;
            w.write_record([
                r.n.to_string(),
                r.statistic.clone(),
                r.trials.to_string(),
                opt(r.alpha),
                opt(r.beta),
                e.estimate.to_string(),
                e.standard_error.to_string(),
                e.z.to_string(),
                e.ci_low.to_string(),
                e.ci_high.to_string(),
                opt(e.wilson_low),
                opt(e.wilson_high),
                opt(r.limit),
                opt(r.abs_diff),
                r.drift.to_string(),
                r.tolerance.to_string(),
                match r.gate_rule {
                    GateRule::TwoSided => "two-sided".into(),
                    GateRule::AtLeast => "at-least".into(),
                },
                r.gate.map_or_else(String::new, |g| g.to_string()),
                self.kind.name().to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| ExperimentError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| ExperimentError::Output(e.to_string()))
    }

    /// Every row that has a gate passes it.
    pub fn gates_pass(&self) -> bool {
        self.rows.iter().all(|r| r.gate != Some(false))
    }

    pub fn row(&self, n: usize, statistic: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.n == n && r.statistic == statistic)
    }
}
