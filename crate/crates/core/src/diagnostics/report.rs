use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::simulator::TimeGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    /// Judges `statistic <= threshold` for a statistic with standard error
    /// `se`: pass within `k` standard errors of slack, fail beyond `k + 1`,
    /// inconclusive in between. With `se = 0` the comparison is exact.
    pub fn judge(statistic: f64, threshold: f64, se: f64, k: f64) -> Self {
        let excess = statistic - threshold;
        if !excess.is_finite() {
            return Verdict::Fail;
        }
        if excess <= k * se {
            Verdict::Pass
        } else if excess > (k + 1.0) * se {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    }

    /// The worst of several verdicts.
    pub fn combine<I: IntoIterator<Item = Verdict>>(vs: I) -> Self {
        vs.into_iter().max().unwrap_or(Verdict::Pass)
    }
}

/// One row of a report table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub series: String,
    /// Abscissa: `n`, a time, or a pair index.
    pub x: f64,
    pub statistic: f64,
    pub std_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

/// One judged inequality `statistic <= threshold`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub std_error: f64,
    /// Slack in standard errors.
    pub slack: f64,
    pub verdict: Verdict,
}

impl Criterion {
    pub fn new(name: impl Into<String>, statistic: f64, threshold: f64, std_error: f64, slack: f64) -> Self {
        Self {
            name: name.into(),
            statistic,
            threshold,
            std_error,
            slack,
            verdict: Verdict::judge(statistic, threshold, std_error, slack),
        }
    }

    /// `|a - b| <= tol` within `slack` standard errors.
    pub fn close(name: impl Into<String>, a: f64, b: f64, tol: f64, std_error: f64, slack: f64) -> Self {
        Self::new(name, (a - b).abs(), tol, std_error, slack)
    }

    /// A deterministic yes/no condition.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { 0.0 } else { 1.0 }, 0.0, 0.0, 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Value(f64),
    /// `(x, bound)` pairs.
    Curve(Vec<(f64, f64)>),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportParameters {
    pub rho: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<TimeGrid<f64>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub n_list: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_mc: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub check_name: String,
    pub parameters: ReportParameters,
    pub estimates: Vec<Estimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<Bound>,
    pub criteria: Vec<Criterion>,
    /// Named scalar results (fitted slopes, variances, constants).
    pub summary: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    pub verdict: Verdict,
    pub runtime_seconds: f64,
}

impl ConvergenceReport {
    /// The report with its timing field zeroed, for bitwise comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            runtime_seconds: 0.0,
            ..self.clone()
        }
    }

    /// Plain-text table.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let _ = writeln!(s, "check: {}  verdict: {:?}  ({:.2} s)", self.check_name, self.verdict, self.runtime_seconds);
        if !self.estimates.is_empty() {
            let _ = writeln!(s, "{:<16} {:>12} {:>14} {:>12} {:>14}", "series", "x", "statistic", "std_error", "bound");
            for e in &self.estimates {
                let b = e.bound.map_or(String::from("-"), |b| format!("{b:.6e}"));
                let _ = writeln!(
                    s,
                    "{:<16} {:>12.6} {:>14.6e} {:>12.3e} {:>14}",
                    e.series, e.x, e.statistic, e.std_error, b
                );
            }
        }
        for c in &self.criteria {
            let _ = writeln!(
                s,
                "[{:?}] {}: {:.6e} <= {:.6e} (se {:.3e}, slack {} se)",
                c.verdict, c.name, c.statistic, c.threshold, c.std_error, c.slack
            );
        }
        for (k, v) in &self.summary {
            let _ = writeln!(s, "{k} = {v:.9e}");
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }
}

/// Accumulates a report while a check runs.
pub(crate) struct ReportBuilder {
    name: String,
    parameters: ReportParameters,
    estimates: Vec<Estimate>,
    bound: Option<Bound>,
    criteria: Vec<Criterion>,
    summary: BTreeMap<String, f64>,
    notes: Vec<String>,
    start: Instant,
}

impl ReportBuilder {
    pub fn new(name: &str, parameters: ReportParameters) -> Self {
        Self {
            name: name.to_string(),
            parameters,
            estimates: Vec::new(),
            bound: None,
            criteria: Vec::new(),
            summary: BTreeMap::new(),
            notes: Vec::new(),
            start: Instant::now(),
        }
    }

    pub fn estimate(&mut self, series: &str, x: f64, statistic: f64, std_error: f64, bound: Option<f64>) {
        self.estimates.push(Estimate {
            series: series.to_string(),
            x,
            statistic,
            std_error,
            bound,
        });
    }

    pub fn criterion(&mut self, c: Criterion) {
        self.criteria.push(c);
    }

    pub fn bound(&mut self, b: Bound) {
        self.bound = Some(b);
    }

    pub fn summary(&mut self, key: &str, v: f64) {
        self.summary.insert(key.to_string(), v);
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn finish(self) -> ConvergenceReport {
        let verdict = Verdict::combine(self.criteria.iter().map(|c| c.verdict));
        ConvergenceReport {
            check_name: self.name,
            parameters: self.parameters,
            estimates: self.estimates,
            bound: self.bound,
            criteria: self.criteria,
            summary: self.summary,
            notes: self.notes,
            verdict,
            runtime_seconds: self.start.elapsed().as_secs_f64(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_rule() {
        assert_eq!(Verdict::judge(1.0, 2.0, 0.0, 3.0), Verdict::Pass);
        assert_eq!(Verdict::judge(2.0, 2.0, 0.0, 3.0), Verdict::Pass);
        assert_eq!(Verdict::judge(2.1, 2.0, 0.0, 3.0), Verdict::Fail);
        assert_eq!(Verdict::judge(2.29, 2.0, 0.1, 3.0), Verdict::Pass);
        assert_eq!(Verdict::judge(2.35, 2.0, 0.1, 3.0), Verdict::Inconclusive);
        assert_eq!(Verdict::judge(2.41, 2.0, 0.1, 3.0), Verdict::Fail);
        assert_eq!(Verdict::judge(f64::NAN, 2.0, 0.1, 3.0), Verdict::Fail);
        assert_eq!(
            Verdict::combine([Verdict::Pass, Verdict::Inconclusive, Verdict::Pass]),
            Verdict::Inconclusive
        );
        assert_eq!(Verdict::combine([Verdict::Fail, Verdict::Inconclusive]), Verdict::Fail);
    }
}
