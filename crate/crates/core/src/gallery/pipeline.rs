use serde::{Deserialize, Serialize};

use super::{Bundle, Experiment, LabeledPhi, LogFit, RunSettings};
use crate::conditions::{
    check_a0, check_a1, check_a1prime, check_a2, check_adec, check_ainc, check_equivalence, check_weak_equivalence,
    log_grid, ConditionReport, SampleSpec, TInterval,
};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Field, Region, WeightFunction};
use crate::grid::{GridFunction, GridShape};
use crate::maximal::{norm_ratio_series, operator_norm_estimate, MaximalConfig};
use crate::norms::{ball_norm_check, duality_lower_bound};
use crate::phi_core::{PhiCurve, PhiFunction};
use crate::transforms::{prop44_t1, remark45_asymptotes, thm31_glue, thm47_construct, thm47_exponent, AsymptotePair};

fn one() -> f64 {
    1.0
}

fn zero_weight() -> WeightFunction {
    WeightFunction::Zero
}

/// A pipeline: a starting Φ-function, transforms applied in order, then
/// condition checks and experiments on the result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub phi: PhiFunction,
    #[serde(default)]
    pub transforms: Vec<TransformStep>,
    #[serde(default)]
    pub checks: Vec<CheckRequest>,
    #[serde(default)]
    pub experiments: Vec<ExperimentRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputPaths>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    /// File for the JSON bundle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
    /// Directory for CSV extracts of grid functions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum TransformStep {
    /// Replace φ by the aInc-restoring construction; `t1` defaults to half the
    /// largest level where both φ and φ∞ stay below 1.
    Thm47Construct {
        phi_inf: PhiCurve,
        #[serde(default = "zero_weight")]
        h: WeightFunction,
        beta: f64,
        #[serde(default = "one")]
        s: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t1: Option<f64>,
    },
    /// Replace φ by `φ^p` on `region × [0, 1]`.
    Thm31Glue { region: Region, p: f64 },
    /// Record shell estimates of the asymptotes; φ is left unchanged.
    Remark45Asymptotes {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radii: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t_grid: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRequest {
    #[serde(flatten)]
    pub kind: CheckKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Expected value of `holds`; adds a claim to the bundle when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<bool>,
}

/// Comparison checks (`Equiv`, `WeakEquiv`) compare the current φ with
/// `other`, defaulting to the φ the pipeline started from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "condition")]
pub enum CheckKind {
    A0,
    A1,
    #[serde(rename = "A1prime")]
    A1Prime,
    A2 {
        phi_inf: PhiCurve,
        #[serde(default = "zero_weight")]
        h: WeightFunction,
        beta: f64,
        #[serde(default = "one")]
        s: f64,
    },
    #[serde(rename = "aInc")]
    AInc {
        p: f64,
        #[serde(default = "TInterval::all")]
        range: TInterval,
    },
    #[serde(rename = "aDec")]
    ADec {
        q: f64,
        #[serde(default = "TInterval::all")]
        range: TInterval,
    },
    Equiv {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        other: Option<PhiFunction>,
        l: f64,
    },
    WeakEquiv {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        other: Option<PhiFunction>,
        l: f64,
        #[serde(default = "zero_weight")]
        h: WeightFunction,
    },
}

impl CheckKind {
    fn name(&self) -> &'static str {
        match self {
            CheckKind::A0 => "A0",
            CheckKind::A1 => "A1",
            CheckKind::A1Prime => "A1'",
            CheckKind::A2 { .. } => "A2",
            CheckKind::AInc { .. } => "aInc",
            CheckKind::ADec { .. } => "aDec",
            CheckKind::Equiv { .. } => "equivalence",
            CheckKind::WeakEquiv { .. } => "weak equivalence",
        }
    }
}

/// Grids default to the domain box when bounded, otherwise `[−R, R]ⁿ` with
/// `R` the truncation radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExperimentRequest {
    OperatorNorm {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridShape>,
        family: Vec<Region>,
    },
    /// `f = χ_region` on `[−R, R]ⁿ` for each `R`; the cell size stays fixed.
    MaximalDivergence {
        f: Region,
        radii: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cell: Option<f64>,
        /// Expected divergence flag; adds a claim when present.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_divergence: Option<bool>,
    },
    BallNorm {
        center: Vec<f64>,
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridShape>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        y_samples: Option<Vec<Vec<f64>>>,
    },
    Duality {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<GridShape>,
        f: Field,
        g: Field,
    },
}

/// Default grid for a domain under the run settings.
pub fn default_grid(domain: &Domain, settings: &RunSettings) -> Result<GridShape> {
    let dim = domain.dim;
    let cells = settings.resolution.unwrap_or(if dim == 1 { 1024 } else { 128 });
    match &domain.bounds {
        Some(b) => GridShape::new(b.clone(), vec![cells; dim]),
        None => GridShape::cube(dim, settings.truncation_radius.unwrap_or(8.0), cells),
    }
}

fn checked_curve(c: &PhiCurve) -> Result<PhiCurve> {
    PhiCurve::new(c.breakpoints().to_vec(), c.pieces().to_vec(), c.infinite_tail())
}

impl ExperimentSpec {
    /// Precondition checks that need no computation.
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::Argument("pipeline name must not be empty".into()));
        }
        self.phi.validate()?;
        for step in &self.transforms {
            match step {
                TransformStep::Thm47Construct { phi_inf, h, beta, s, t1 } => {
                    AsymptotePair::new(checked_curve(phi_inf)?, h.clone(), *beta, *s)?;
                    if let Some(t) = t1 {
                        if !(*t > 0.0 && t.is_finite()) {
                            return Err(Error::Argument(format!("t1 = {t} must be positive")));
                        }
                    }
                }
                TransformStep::Thm31Glue { p, .. } => {
                    if !(*p >= 1.0 && p.is_finite()) {
                        return Err(Error::Argument(format!("glue exponent {p} must be ≥ 1")));
                    }
                }
                TransformStep::Remark45Asymptotes { .. } => {}
            }
        }
        for c in &self.checks {
            match &c.kind {
                CheckKind::A2 { phi_inf, .. } => {
                    checked_curve(phi_inf)?;
                }
                CheckKind::AInc { range, .. } | CheckKind::ADec { range, .. } => range.validate()?,
                CheckKind::Equiv { other: Some(o), .. } | CheckKind::WeakEquiv { other: Some(o), .. } => o.validate()?,
                _ => {}
            }
        }
        for e in &self.experiments {
            if let ExperimentRequest::MaximalDivergence { radii, cell, .. } = e {
                if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
                    return Err(Error::Argument("divergence radii must be positive".into()));
                }
                if let Some(h) = cell {
                    if !(*h > 0.0) {
                        return Err(Error::Argument(format!("cell size {h} must be positive")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parse and run a pipeline; schema violations come back as
/// [`Error::Parse`] with the JSON pointer of the offending field.
pub fn run_pipeline_json(text: &str, settings: &RunSettings) -> Result<Bundle> {
    let spec: ExperimentSpec = crate::json::parse(text)?;
    run_pipeline(&spec, settings)
}

/// Transforms, then checks, then experiments, in the order given.
/// `settings.seed` overrides the seed in the spec.
pub fn run_pipeline(spec: &ExperimentSpec, settings: &RunSettings) -> Result<Bundle> {
    spec.validate()?;
    let mut settings = settings.clone();
    settings.seed = settings.seed.or(spec.seed);
    let original = spec.phi.clone();
    let mut b = Bundle::new(spec.name.clone(), settings.clone(), original.clone());
    let sampling = |phi: &PhiFunction| {
        let s = SampleSpec::for_phi(phi);
        match settings.seed {
            Some(seed) => s.with_seed(seed),
            None => s,
        }
    };

    let mut current = original.clone();
    for (i, step) in spec.transforms.iter().enumerate() {
        match step {
            TransformStep::Thm47Construct { phi_inf, h, beta, s, t1 } => {
                let built = b.stage(&format!("transform {i}: thm47_construct"), || {
                    let curve = checked_curve(phi_inf)?;
                    let ss = sampling(&current);
                    let t1 = match t1 {
                        Some(t) => *t,
                        None => prop44_t1(&current, &curve, &ss)?,
                    };
                    let pair = AsymptotePair::new(curve, h.clone(), *beta, *s)?;
                    let psi = thm47_construct(&current, &pair, t1)?;
                    let p = thm47_exponent(&current, &pair, t1, 100.0, &ss)?;
                    Ok((t1, psi, p))
                });
                let Some((t1, psi, p)) = built else { break };
                b.experiments.push(Experiment::Scalar { label: format!("transform {i}: t1"), value: t1 });
                if let Some(p) = p {
                    b.experiments.push(Experiment::Scalar { label: format!("transform {i}: aInc exponent"), value: p });
                }
                b.derived.push(LabeledPhi { label: format!("transform {i}: thm47_construct"), phi: psi.clone() });
                current = psi;
            }
            TransformStep::Thm31Glue { region, p } => {
                let Some(glued) =
                    b.stage(&format!("transform {i}: thm31_glue"), || thm31_glue(&current, region, *p, &sampling(&current)))
                else {
                    break;
                };
                b.derived.push(LabeledPhi { label: format!("transform {i}: thm31_glue"), phi: glued.clone() });
                current = glued;
            }
            TransformStep::Remark45Asymptotes { radii, t_grid } => {
                let radii = radii.clone().unwrap_or_else(|| vec![1e2, 1e3, 1e4, 1e5]);
                let ts = t_grid.clone().unwrap_or_else(|| log_grid(1e-3, 1e3, 8));
                let Some(est) =
                    b.stage(&format!("transform {i}: remark45_asymptotes"), || remark45_asymptotes(&current, &ts, &radii))
                else {
                    break;
                };
                b.experiments.push(Experiment::Asymptotes { label: format!("transform {i}"), estimate: est });
            }
        }
    }

    for (i, req) in spec.checks.iter().enumerate() {
        let label = req.label.clone().unwrap_or_else(|| format!("check {i}: {}", req.kind.name()));
        let Some(report) = b.stage(&label, || run_check(&req.kind, &current, &original, &sampling(&current))) else {
            break;
        };
        if let Some(expected) = req.expect {
            let detail = report.constants.iter().map(|(k, v)| format!("{k} = {v}")).collect::<Vec<_>>().join(", ");
            b.claim(format!("{label} holds"), expected, report.holds, detail);
        }
        b.report(label, report);
    }

    for (i, req) in spec.experiments.iter().enumerate() {
        if run_experiment(&mut b, i, req, &current, &settings).is_none() {
            break;
        }
    }
    Ok(b.finish())
}

fn run_check(kind: &CheckKind, phi: &PhiFunction, original: &PhiFunction, spec: &SampleSpec) -> Result<ConditionReport> {
    match kind {
        CheckKind::A0 => check_a0(phi, spec),
        CheckKind::A1 => check_a1(phi, spec),
        CheckKind::A1Prime => check_a1prime(phi, spec),
        CheckKind::A2 { phi_inf, h, beta, s } => check_a2(phi, &checked_curve(phi_inf)?, h, *beta, *s, spec),
        CheckKind::AInc { p, range } => check_ainc(phi, *p, *range, spec),
        CheckKind::ADec { q, range } => check_adec(phi, *q, *range, spec),
        CheckKind::Equiv { other, l } => check_equivalence(other.as_ref().unwrap_or(original), phi, *l, spec),
        CheckKind::WeakEquiv { other, l, h } => {
            check_weak_equivalence(other.as_ref().unwrap_or(original), phi, *l, h, spec)
        }
    }
}

fn run_experiment(
    b: &mut Bundle,
    i: usize,
    req: &ExperimentRequest,
    phi: &PhiFunction,
    settings: &RunSettings,
) -> Option<()> {
    let grid_or_default = |g: &Option<GridShape>| match g {
        Some(g) => g.validate().map(|_| g.clone()),
        None => default_grid(&phi.domain, settings),
    };
    match req {
        ExperimentRequest::OperatorNorm { grid, family } => {
            let label = format!("experiment {i}: operator norm");
            let report = b.stage(&label, || {
                let shape = grid_or_default(grid)?;
                let fs: Vec<GridFunction> =
                    family.iter().map(|r| GridFunction::indicator(shape.clone(), r)).collect::<Result<_>>()?;
                operator_norm_estimate(phi, &fs, &MaximalConfig::default_for(&shape))
            })?;
            b.experiments.push(Experiment::OperatorNorm { label, report });
        }
        ExperimentRequest::MaximalDivergence { f, radii, cell, expect_divergence } => {
            let label = format!("experiment {i}: maximal divergence");
            let dim = phi.dim();
            let h = cell.unwrap_or(0.25);
            let series = b.stage(&label, || {
                let cases: Vec<(f64, GridFunction)> = radii
                    .iter()
                    .map(|&r| {
                        let shape = GridShape::cube(dim, r, ((2.0 * r / h).round() as usize).max(1))?;
                        Ok((r, GridFunction::indicator(shape, f)?))
                    })
                    .collect::<Result<_>>()?;
                norm_ratio_series(phi, &cases, MaximalConfig::default_for)
            })?;
            let modulars: Vec<_> = series.ratios.iter().map(|q| q.modular_mf).collect();
            let ys: Vec<f64> = modulars.iter().map(|m| m.to_f64()).collect();
            let fit = LogFit::fit(radii, &ys);
            let observed = series.unbounded_evidence && fit.is_some_and(|f| f.c1 > 0.0 && f.r_squared >= 0.98);
            if let Some(expected) = expect_divergence {
                let detail = fit.map_or("no fit".into(), |f| format!("c1 = {:.4}, R² = {:.5}", f.c1, f.r_squared));
                b.claim(format!("{label}: divergence"), *expected, observed, detail);
            }
            b.experiments.push(Experiment::MaximalDivergence {
                label: label.clone(),
                radii: radii.clone(),
                modulars,
                norm_ratios: series.ratios.iter().filter_map(|q| q.ratio).collect(),
                fit,
            });
            b.experiments.push(Experiment::NormSeries { label, report: series });
        }
        ExperimentRequest::BallNorm { center, radius, grid, y_samples } => {
            let label = format!("experiment {i}: ball norm");
            let report = b.stage(&label, || {
                let shape = grid_or_default(grid)?;
                let ys = y_samples.clone().unwrap_or_else(|| vec![center.clone()]);
                ball_norm_check(phi, center, *radius, &shape, &ys)
            })?;
            b.experiments.push(Experiment::BallNorm { label, report });
        }
        ExperimentRequest::Duality { grid, f, g } => {
            let label = format!("experiment {i}: duality");
            let report = b.stage(&label, || {
                let shape = grid_or_default(grid)?;
                let fg = GridFunction::from_fn(shape.clone(), |x| f.eval(x))?;
                let gg = GridFunction::from_fn(shape, |x| g.eval(x))?;
                duality_lower_bound(phi, &fg, &gg)
            })?;
            b.experiments.push(Experiment::Duality { label, report });
        }
    }
    Some(())
}
