//! Report bundles for the worked examples and for user-written pipelines.
//!
//! A [`Bundle`] is the unit of output: the exact Φ-function that was used,
//! every condition report, experiment outputs, and a list of claims with the
//! expected and observed outcome. The JSON layout is versioned by
//! [`SCHEMA_VERSION`] and documented in `docs/report-schema.md`.

mod examples;
mod pipeline;

use std::panic::{catch_unwind, AssertUnwindSafe};

use serde::{Deserialize, Serialize};

use crate::conditions::ConditionReport;
use crate::error::Result;
use crate::extended::Extended;
use crate::grid::GridFunction;
use crate::maximal::OperatorNormReport;
use crate::norms::{BallNormReport, DualityReport};
use crate::phi_core::PhiFunction;
use crate::transforms::AsymptoteEstimate;

pub use examples::{run_example, EXAMPLE_NAMES};
pub use pipeline::{
    default_grid, run_pipeline, run_pipeline_json, CheckKind, CheckRequest, ExperimentRequest, ExperimentSpec, OutputPaths,
    TransformStep,
};

/// Version of the bundle JSON layout. Bumped on any incompatible change.
pub const SCHEMA_VERSION: &str = "1.0.0";

/// Overrides shared by every run; `None` keeps the per-example default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    /// Cells per axis on the largest grid of a run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    /// Half-width of the largest truncation box `[−R, R]ⁿ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_radius: Option<f64>,
    /// Seed for randomized ball sampling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// One expected outcome and what was observed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub statement: String,
    pub expected: bool,
    pub observed: bool,
    pub matches: bool,
    pub evidence: String,
}

impl Claim {
    pub fn new(statement: impl Into<String>, expected: bool, observed: bool, evidence: impl Into<String>) -> Self {
        Claim { statement: statement.into(), expected, observed, matches: expected == observed, evidence: evidence.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    /// Every claim came out as expected.
    Match,
    Mismatch { failed_claims: Vec<String> },
    /// A stage returned an error or panicked; later stages were skipped.
    Errored { stage: String, message: String },
}

/// A condition report with the label of the request that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledReport {
    pub label: String,
    pub report: ConditionReport,
}

/// Least-squares fit `y ≈ c1·ln x + c0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogFit {
    pub c1: f64,
    pub c0: f64,
    pub r_squared: f64,
}

impl LogFit {
    pub fn fit(xs: &[f64], ys: &[f64]) -> Option<LogFit> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return None;
        }
        let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let n = lx.len() as f64;
        let mx = lx.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = lx.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
        if sxx == 0.0 {
            return None;
        }
        let c1 = sxy / sxx;
        let c0 = my - c1 * mx;
        let ss_res: f64 = lx.iter().zip(ys).map(|(x, y)| (y - c1 * x - c0).powi(2)).sum();
        let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
        Some(LogFit { c1, c0, r_squared })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case")]
pub enum Experiment {
    /// `max ‖Mf‖/‖f‖` over a family of test functions on one grid.
    OperatorNorm { label: String, report: OperatorNormReport },
    /// `‖Mf‖/‖f‖` along a one-parameter family; `parameter` is recorded per entry.
    NormSeries { label: String, report: OperatorNormReport },
    /// Modular of `Mf` over growing truncation boxes with a `ln R` fit.
    MaximalDivergence {
        label: String,
        radii: Vec<f64>,
        modulars: Vec<Extended>,
        norm_ratios: Vec<Extended>,
        fit: Option<LogFit>,
    },
    /// Range of `Mf(x)·(|x|+1)^n` over an annulus.
    DecayProfile { label: String, inner: f64, outer: f64, min: f64, max: f64 },
    BallNorm { label: String, report: BallNormReport },
    Duality { label: String, report: DualityReport },
    Asymptotes { label: String, estimate: AsymptoteEstimate },
    /// Modular and Luxemburg norm of one grid function.
    Norm { label: String, modular: Extended, luxemburg: Extended },
    /// Summary of a computed maximal function.
    Maximal { label: String, sup_f: f64, sup_mf: f64, integral_f: f64, integral_mf: f64 },
    /// A scalar produced by a transform step.
    Scalar { label: String, value: f64 },
}

/// A grid function exported next to the JSON report as CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedGrid {
    pub name: String,
    pub function: GridFunction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bundle {
    pub schema_version: String,
    pub name: String,
    pub settings: RunSettings,
    /// The exact Φ-function the run started from, for replay.
    pub phi: PhiFunction,
    /// Φ-functions produced by transforms, in order.
    #[serde(default)]
    pub derived: Vec<LabeledPhi>,
    #[serde(default)]
    pub reports: Vec<LabeledReport>,
    #[serde(default)]
    pub experiments: Vec<Experiment>,
    #[serde(default)]
    pub claims: Vec<Claim>,
    pub verdict: Verdict,
    #[serde(skip)]
    pub grids: Vec<NamedGrid>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledPhi {
    pub label: String,
    pub phi: PhiFunction,
}

impl Bundle {
    pub fn new(name: impl Into<String>, settings: RunSettings, phi: PhiFunction) -> Self {
        Bundle {
            schema_version: SCHEMA_VERSION.to_string(),
            name: name.into(),
            settings,
            phi,
            derived: vec![],
            reports: vec![],
            experiments: vec![],
            claims: vec![],
            verdict: Verdict::Match,
            grids: vec![],
        }
    }

    pub fn is_errored(&self) -> bool {
        matches!(self.verdict, Verdict::Errored { .. })
    }

    /// Run one stage, turning an error or a panic into an errored verdict.
    /// Returns `None` once the bundle has errored.
    pub fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Option<T> {
        if self.is_errored() {
            return None;
        }
        let outcome = catch_unwind(AssertUnwindSafe(f));
        let message = match outcome {
            Ok(Ok(v)) => return Some(v),
            Ok(Err(e)) => e.to_string(),
            Err(payload) => {
                let text = payload
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                format!("panicked: {text}")
            }
        };
        self.verdict = Verdict::Errored { stage: name.to_string(), message };
        None
    }

    pub fn report(&mut self, label: impl Into<String>, report: ConditionReport) -> &ConditionReport {
        self.reports.push(LabeledReport { label: label.into(), report });
        &self.reports.last().expect("just pushed").report
    }

    pub fn claim(&mut self, statement: impl Into<String>, expected: bool, observed: bool, evidence: impl Into<String>) {
        self.claims.push(Claim::new(statement, expected, observed, evidence));
    }

    /// Settle the verdict from the claims unless a stage already errored.
    pub fn finish(mut self) -> Self {
        if !self.is_errored() {
            let failed: Vec<String> = self.claims.iter().filter(|c| !c.matches).map(|c| c.statement.clone()).collect();
            self.verdict = if failed.is_empty() { Verdict::Match } else { Verdict::Mismatch { failed_claims: failed } };
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundles serialize")
    }
}

/// Largest relative deviation from the per-function mean across a set of
/// operator-norm reports over the same family.
pub fn ratio_drift(series: &[OperatorNormReport]) -> f64 {
    let Some(first) = series.first() else { return 0.0 };
    let mut worst: f64 = 0.0;
    for k in 0..first.ratios.len() {
        let vals: Vec<f64> =
            series.iter().filter_map(|r| r.ratios.get(k).and_then(|q| q.ratio)).map(Extended::to_f64).collect();
        if vals.is_empty() {
            continue;
        }
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        if !mean.is_finite() {
            return f64::INFINITY;
        }
        for v in vals {
            worst = worst.max((v - mean).abs() / mean);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn log_fit_recovers_exact_line() {
        let xs = [2.0, 4.0, 8.0, 16.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.ln() - 1.0).collect();
        let fit = LogFit::fit(&xs, &ys).unwrap();
        assert!((fit.c1 - 3.0).abs() < 1e-12 && (fit.c0 + 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stage_errors_and_panics_mark_the_bundle() {
        let phi = PhiFunction::power(2.0, 1).unwrap();
        let mut b = Bundle::new("t", RunSettings::default(), phi.clone());
        assert_eq!(b.stage("ok", || Ok(3)), Some(3));
        assert_eq!(b.stage::<()>("bad", || Err(Error::Argument("nope".into()))), None);
        assert_eq!(b.stage("skipped", || Ok(1)), None);
        match &b.verdict {
            Verdict::Errored { stage, .. } => assert_eq!(stage, "bad"),
            v => panic!("{v:?}"),
        }
        let mut c = Bundle::new("t", RunSettings::default(), phi);
        let r: Option<()> = c.stage("boom", || panic!("kaput"));
        assert!(r.is_none());
        assert!(matches!(&c.verdict, Verdict::Errored { message, .. } if message.contains("kaput")));
    }

    #[test]
    fn finish_counts_failed_claims() {
        let phi = PhiFunction::power(2.0, 1).unwrap();
        let mut b = Bundle::new("t", RunSettings::default(), phi);
        b.claim("a", true, true, "");
        b.claim("b", true, false, "");
        let b = b.finish();
        assert_eq!(b.verdict, Verdict::Mismatch { failed_claims: vec!["b".into()] });
    }
}
