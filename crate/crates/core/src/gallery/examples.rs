use serde_json::json;

use super::{ratio_drift, Bundle, Experiment, LabeledPhi, LogFit, NamedGrid, RunSettings};
use crate::conditions::{
    check_a0, check_a1, check_a1prime, check_a2, check_adec, check_ainc, check_ainc_curve, check_weak_equivalence,
    SampleSpec, TInterval,
};
use crate::error::{Error, Result};
use crate::geometry::{Coordinate, Domain, Field, Region, WeightFunction};
use crate::grid::{GridFunction, GridShape};
use crate::maximal::{maximal, norm_ratio_series, operator_norm_estimate, MaximalConfig, OperatorNormReport};
use crate::norms::GridPhi;
use crate::phi_core::{make_family, PhiCurve, PhiFunction};
use crate::transforms::{prop44_t1, thm47_construct, thm47_exponent, AsymptotePair};

pub const EXAMPLE_NAMES: [&str; 5] = ["ex3_2", "ex3_4", "ex3_5", "ex4_6", "dp_cor49"];

/// Cell size of the 2D experiments when no resolution is given.
const DEFAULT_CELL: f64 = 0.25;
/// Cells across the interval in the 1D growth experiments.
const DEFAULT_CELLS_1D: usize = 4096;
/// Tolerated relative drift of a bounded operator-norm ratio across truncations.
const BOUNDED_DRIFT: f64 = 0.2;

/// Run one of the catalogued examples.
pub fn run_example(name: &str, settings: &RunSettings) -> Result<Bundle> {
    let bundle = match name {
        "ex3_2" => ex3_2(settings),
        "ex3_4" => ex3_4(settings),
        "ex3_5" => ex3_5(settings),
        "ex4_6" => ex4_6(settings),
        "dp_cor49" => dp_cor49(settings),
        other => {
            return Err(Error::Argument(format!("unknown example {other:?}; expected one of {}", EXAMPLE_NAMES.join(", "))))
        }
    };
    Ok(bundle.finish())
}

fn sample_spec(phi: &PhiFunction, settings: &RunSettings) -> SampleSpec {
    let spec = SampleSpec::for_phi(phi);
    match settings.seed {
        Some(seed) => spec.with_seed(seed),
        None => spec,
    }
}

/// Square truncation grids `[−r, r]²` sharing the cell size fixed by the
/// largest radius.
struct Truncations {
    radii: Vec<f64>,
    cell: f64,
}

impl Truncations {
    fn new(settings: &RunSettings, default_r: f64, fractions: &[f64]) -> Result<Self> {
        let r = settings.truncation_radius.unwrap_or(default_r);
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Argument(format!("truncation radius {r} must be positive")));
        }
        let cell = match settings.resolution {
            Some(0) => return Err(Error::Argument("resolution must be positive".into())),
            Some(n) => 2.0 * r / n as f64,
            None => DEFAULT_CELL,
        };
        Ok(Truncations { radii: fractions.iter().map(|f| f * r).collect(), cell })
    }

    fn shape(&self, r: f64) -> Result<GridShape> {
        GridShape::cube(2, r, ((2.0 * r / self.cell).round() as usize).max(1))
    }
}

/// `χ_E` on the grid, refusing grids too coarse to contain any cell center of `E`.
fn resolved_indicator(shape: &GridShape, region: &Region) -> Result<GridFunction> {
    let f = GridFunction::indicator(shape.clone(), region)?;
    if f.is_zero() {
        return Err(Error::Argument(format!(
            "resolution too coarse: no cell center of the {}-cell grid lies in {region:?}",
            shape.len()
        )));
    }
    Ok(f)
}

fn interval_shape(lo: f64, hi: f64, settings: &RunSettings) -> Result<GridShape> {
    GridShape::new(vec![[lo, hi]], vec![settings.resolution.unwrap_or(DEFAULT_CELLS_1D)])
}

fn ainc_fails_for(
    b: &mut Bundle,
    phi: &PhiFunction,
    exps: &[f64],
    range: TInterval,
    spec: &SampleSpec,
    where_: &str,
    threshold: f64,
) {
    for &p in exps {
        let Some(r) = b.stage(&format!("aInc_{p} on {where_}"), || check_ainc(phi, p, range, spec)) else { return };
        let sampled = r.value("a_sampled");
        let fails = !r.holds && sampled > threshold;
        b.report(format!("aInc_{p} on {where_}"), r);
        b.claim(
            format!("aInc_{p} fails on {where_}"),
            true,
            fails,
            format!("sampled ratio {sampled:.3e} (threshold {threshold:.0e})"),
        );
    }
}

fn bounded_claim(b: &mut Bundle, series: &[OperatorNormReport], statement: &str) {
    let drift = ratio_drift(series);
    let growth = series.iter().any(|r| r.unbounded_evidence);
    let max = series.iter().map(|r| r.max_ratio.to_f64()).fold(0.0, f64::max);
    b.claim(
        statement,
        true,
        drift <= BOUNDED_DRIFT && !growth && max.is_finite(),
        format!("max ratio {max:.4}, drift across truncations {:.1}%", 100.0 * drift),
    );
}

fn ex3_2(settings: &RunSettings) -> Bundle {
    let phi = PhiFunction::example_3_2();
    let mut b = Bundle::new("ex3_2", settings.clone(), phi.clone());
    let spec = sample_spec(&phi, settings);

    if let Some(r) = b.stage("A0", || check_a0(&phi, &spec)) {
        let beta = r.value("beta");
        b.claim("(A0) holds with β = 1", true, r.holds && beta == 1.0, format!("β = {beta}"));
        b.report("A0", r);
    }
    if let Some(r) = b.stage("A1'", || check_a1prime(&phi, &spec)) {
        let beta = r.value("beta");
        b.claim("(A1') holds with β = 1", true, r.holds && (beta - 1.0).abs() < 1e-9, format!("β = {beta}"));
        b.report("A1'", r);
    }
    if let Some(r) = b.stage("A1", || check_a1(&phi, &spec)) {
        b.claim("(A1) holds", true, r.holds, format!("β = {}", r.value("beta")));
        b.report("A1", r);
    }
    let sq = PhiCurve::power(1.0, 2.0).expect("t² is a Φ-curve");
    let h = WeightFunction::Indicator { region: Region::unit_cusp() };
    if let Some(r) = b.stage("A2", || check_a2(&phi, &sq, &h, 1.0, 1.0, &spec)) {
        b.claim("(A2) holds with φ∞ = t², h = χ_G, β = 1", true, r.holds, format!("max ratio {}", r.value("max_ratio")));
        b.report("A2", r);
    }
    if let Some(r) = b.stage("aInc_2 at infinity", || check_ainc(&phi, 2.0, TInterval::from(1.0), &spec)) {
        b.claim("aInc_2 holds for t ≥ 1", true, r.holds, format!("a = {}", r.value("a")));
        b.report("aInc_2 on [1,∞)", r);
    }
    let cusp = vec![vec![1.5, 0.0], vec![2.0, 0.1], vec![3.0, -0.05], vec![6.0, 0.0]];
    let on_g = SampleSpec { x_samples: cusp, ..spec.clone() }.with_t_range(1e-80, 1e4);
    ainc_fails_for(&mut b, &phi, &[1.1, 1.5, 2.0], TInterval::up_to(1.0), &on_g, "G×(0,1]", 1e6);

    let Some(trunc) = b.stage("grid setup", || Truncations::new(settings, 32.0, &[0.25, 0.5, 1.0])) else { return b };
    let ball = |c: [f64; 2], r: f64| Region::Ball { center: c.to_vec(), radius: r };
    let rect = |l: [f64; 2], u: [f64; 2]| Region::Rect { lower: l.to_vec(), upper: u.to_vec() };
    let family = [
        ball([0.0, 0.0], 1.0),
        ball([0.0, 0.0], 0.5),
        ball([3.0, 0.0], 1.0),
        ball([2.0, 0.0], 0.5),
        ball([-2.0, 2.0], 1.5),
        ball([5.0, 0.0], 2.0),
        ball([1.0, 1.0], 0.3),
        rect([1.0, -0.25], [4.0, 0.25]),
        rect([-1.0, -1.0], [1.0, 1.0]),
        rect([0.0, 0.0], [2.0, 1.0]),
    ];
    let mut series = Vec::new();
    for &r in &trunc.radii {
        let Some(rep) = b.stage(&format!("operator norm at R = {r}"), || {
            let shape = trunc.shape(r)?;
            let fs: Vec<GridFunction> =
                family.iter().map(|reg| resolved_indicator(&shape, reg)).collect::<Result<_>>()?;
            operator_norm_estimate(&phi, &fs, &MaximalConfig::default_for(&shape))
        }) else {
            return b;
        };
        b.experiments.push(Experiment::OperatorNorm { label: format!("R = {r}"), report: rep.clone() });
        series.push(rep);
    }
    bounded_claim(&mut b, &series, "‖Mf‖/‖f‖ stays bounded across truncations");
    b
}

fn ex3_4(settings: &RunSettings) -> Bundle {
    let phi = PhiFunction::example_3_4(2);
    let mut b = Bundle::new("ex3_4", settings.clone(), phi.clone());
    let spec = sample_spec(&phi, settings);

    if let Some(r) = b.stage("A0", || check_a0(&phi, &spec)) {
        b.claim("(A0) holds", true, r.holds, format!("β = {}", r.value("beta")));
        b.report("A0", r);
    }
    if let Some(r) = b.stage("A1", || check_a1(&phi, &spec)) {
        let beta = r.value("beta");
        b.claim("(A1) holds with β = 1", true, r.holds && (beta - 1.0).abs() < 1e-9, format!("β = {beta}"));
        b.report("A1", r);
    }
    let lin = PhiCurve::power(1.0, 1.0).expect("t is a Φ-curve");
    if let Some(r) = b.stage("A2", || check_a2(&phi, &lin, &WeightFunction::Zero, 0.5, 1.0, &spec)) {
        b.claim("(A2) holds with φ∞ = t, h ≡ 0, β = 1/2", true, r.holds, format!("max ratio {}", r.value("max_ratio")));
        b.report("A2", r);
    }
    if let Some(r) = b.stage("aInc_2 on [1,∞)", || check_ainc(&phi, 2.0, TInterval::from(1.0), &spec)) {
        let a = r.value("a");
        b.claim("aInc_2 holds on [1,∞) with a ≤ 2", true, r.holds && a <= 2.0 + 1e-9, format!("a = {a}"));
        b.report("aInc_2 on [1,∞)", r);
    }
    if let Some(r) = b.stage("aDec_2", || check_adec(&phi, 2.0, TInterval::all(), &spec)) {
        b.claim("aDec_2 holds for t > 0", true, r.holds, format!("L = {}", r.value("L")));
        b.report("aDec_2", r);
    }
    let low = spec.clone().with_t_range(1e-80, 1e4);
    ainc_fails_for(&mut b, &phi, &[1.1, 1.5, 2.0], TInterval::up_to(1.0), &low, "(0,1]", 1e6);

    let Some(trunc) = b.stage("grid setup", || Truncations::new(settings, 64.0, &[0.125, 0.25, 0.5, 1.0])) else {
        return b;
    };
    let unit_ball = Region::Ball { center: vec![0.0, 0.0], radius: 1.0 };
    let mut modulars = Vec::new();
    let mut cases = Vec::new();
    for &r in &trunc.radii {
        let Some((f, mf, m)) = b.stage(&format!("maximal function at R = {r}"), || {
            let shape = trunc.shape(r)?;
            let f = resolved_indicator(&shape, &unit_ball)?;
            let mf = maximal(&f, &MaximalConfig::default_for(&shape))?;
            let m = GridPhi::new(&phi, &shape)?.modular(&mf)?;
            Ok((f, mf, m))
        }) else {
            return b;
        };
        modulars.push(m);
        if r == trunc.radii[2] {
            let profile = decay_profile(&mf, 2.0, r);
            let (lo, hi) = (profile.0, profile.1);
            b.experiments.push(Experiment::DecayProfile { label: format!("R = {r}"), inner: 2.0, outer: r, min: lo, max: hi });
            b.claim(
                "Mf(x) ≈ (|x|+1)^(−2): Mf·(|x|+1)² within [1/8, 8] for 2 ≤ |x| ≤ R/2",
                true,
                lo >= 0.125 && hi <= 8.0,
                format!("range [{lo:.4}, {hi:.4}]"),
            );
            b.grids.push(NamedGrid { name: format!("mf_R{r}"), function: mf });
        }
        cases.push((r, f));
    }
    let Some(series) = b.stage("norm ratios", || norm_ratio_series(&phi, &cases, MaximalConfig::default_for)) else {
        return b;
    };
    let ys: Vec<f64> = modulars.iter().map(|m| m.to_f64()).collect();
    let fit = LogFit::fit(&trunc.radii, &ys);
    let ratios: Vec<_> = series.ratios.iter().filter_map(|q| q.ratio).collect();
    b.experiments.push(Experiment::MaximalDivergence {
        label: "f = χ_B(0,1)".into(),
        radii: trunc.radii.clone(),
        modulars,
        norm_ratios: ratios.clone(),
        fit,
    });
    let fit_ok = fit.is_some_and(|f| f.c1 > 0.0 && f.r_squared >= 0.98);
    b.claim(
        "modular of Mf grows like c₁·ln R with c₁ > 0 and R² ≥ 0.98",
        true,
        fit_ok,
        fit.map_or("no fit".into(), |f| format!("c₁ = {:.4}, c₀ = {:.4}, R² = {:.5}", f.c1, f.c0, f.r_squared)),
    );
    b.claim(
        "‖Mf‖/‖f‖ increases with R (divergence flag)",
        true,
        series.unbounded_evidence,
        format!("ratios {}", ratios.iter().map(|r| format!("{:.4}", r.to_f64())).collect::<Vec<_>>().join(", ")),
    );
    b.experiments.push(Experiment::NormSeries { label: "‖Mf‖/‖f‖ against R".into(), report: series });
    b
}

/// Range of `Mf(x)·(|x|+1)²` over grid points with `inner ≤ |x| ≤ r/2`.
fn decay_profile(mf: &GridFunction, inner: f64, r: f64) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for (i, c) in mf.shape.centers().iter().enumerate() {
        let d = crate::geometry::norm(c);
        if (inner..=r / 2.0).contains(&d) {
            let v = mf.values[i] * (d + 1.0).powi(2);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    (lo, hi)
}

fn ex3_5(settings: &RunSettings) -> Bundle {
    let phi = PhiFunction::example_3_5(2);
    let mut b = Bundle::new("ex3_5", settings.clone(), phi.clone());
    let spec = sample_spec(&phi, settings);
    let sq = PhiCurve::power(1.0, 2.0).expect("t² is a Φ-curve");
    let h = WeightFunction::RecipPow { shift: 1.0, power: 4.0, scale: 1.0 };

    if let Some(r) = b.stage("A0", || check_a0(&phi, &spec)) {
        b.claim("(A0) holds", true, r.holds, format!("β = {}", r.value("beta")));
        b.report("A0", r);
    }
    if let Some(r) = b.stage("A1", || check_a1(&phi, &spec)) {
        b.claim("(A1) holds", true, r.holds, format!("β = {}", r.value("beta")));
        b.report("A1", r);
    }
    if let Some(r) = b.stage("A2", || check_a2(&phi, &sq, &h, 1.0, 1.0, &spec)) {
        b.claim("(A2) holds with φ∞ = t², h = (|x|+1)^(−4)", true, r.holds, format!("max ratio {}", r.value("max_ratio")));
        b.report("A2", r);
    }
    let square = PhiFunction::power(2.0, 2).expect("t² is valid");
    if let Some(r) = b.stage("weak equivalence", || check_weak_equivalence(&phi, &square, 1.0, &h, &spec)) {
        b.claim("φ ∼ t² with h = (|x|+1)^(−2n)", true, r.holds, format!("‖h‖₁ = {}", r.value("h_l1")));
        b.report("weak equivalence to t²", r);
    }
    let low = spec.clone().with_t_range(1e-80, 1e4);
    ainc_fails_for(&mut b, &phi, &[1.1, 1.5, 2.0], TInterval::all(), &low, "(0,∞)", 1e6);

    // the construction that restores aInc while keeping the space
    let beta2 = 0.5;
    let built = b.stage("ψ construction", || {
        let t1 = prop44_t1(&phi, &sq, &spec)?;
        let pair = AsymptotePair::new(sq.clone(), h.clone(), beta2, 1.0)?;
        let psi = thm47_construct(&phi, &pair, t1)?;
        let p = thm47_exponent(&phi, &pair, t1, 100.0, &spec)?;
        Ok((t1, psi, p))
    });
    if let Some((t1, psi, p)) = built {
        b.experiments.push(Experiment::Scalar { label: "t₁".into(), value: t1 });
        b.derived.push(LabeledPhi { label: "ψ".into(), phi: psi.clone() });
        match p {
            Some(p) => {
                if let Some(r) = b.stage("aInc of ψ", || check_ainc(&psi, p, TInterval::all(), &spec)) {
                    let a = r.value("a");
                    b.claim(format!("ψ satisfies aInc_{p:.4} on (0,∞)"), true, r.holds && p > 1.0, format!("a = {a}"));
                    b.report("aInc of ψ", r);
                }
            }
            None => b.claim("ψ satisfies aInc_p for some p > 1", true, false, "no exponent found with a ≤ 100"),
        }
        if let Some(r) = b.stage("ψ ∼ φ", || check_weak_equivalence(&phi, &psi, 1.0 / (beta2 * beta2), &h, &spec)) {
            b.claim("φ ∼ ψ with L = 1/β₂²", true, r.holds, format!("L = {}", 1.0 / (beta2 * beta2)));
            b.report("weak equivalence φ ∼ ψ", r);
        }
    }

    let Some(trunc) = b.stage("grid setup", || Truncations::new(settings, 32.0, &[0.25, 0.5, 1.0])) else { return b };
    let family: Vec<Region> = [(0.0, 1.0), (0.0, 0.25), (3.0, 0.5), (6.0, 1.5)]
        .iter()
        .map(|&(c, r)| Region::Ball { center: vec![c, 0.0], radius: r })
        .collect();
    let mut series = Vec::new();
    for &r in &trunc.radii {
        let Some(rep) = b.stage(&format!("operator norm at R = {r}"), || {
            let shape = trunc.shape(r)?;
            let fs: Vec<GridFunction> =
                family.iter().map(|reg| resolved_indicator(&shape, reg)).collect::<Result<_>>()?;
            operator_norm_estimate(&phi, &fs, &MaximalConfig::default_for(&shape))
        }) else {
            return b;
        };
        b.experiments.push(Experiment::OperatorNorm { label: format!("R = {r}"), report: rep.clone() });
        series.push(rep);
    }
    bounded_claim(&mut b, &series, "‖Mf‖/‖f‖ stays bounded across truncations");
    b
}

/// `‖M f_δ‖/‖f_δ‖` for `f_δ = χ_(a, a+δ)` (or `χ_(a−δ, a)`), halving `δ` from `1/4`.
fn shrinking_series(
    phi: &PhiFunction,
    shape: &GridShape,
    anchor: f64,
    leftward: bool,
    halvings: usize,
) -> Result<OperatorNormReport> {
    let cases: Vec<(f64, GridFunction)> = (0..halvings)
        .map(|k| {
            let delta = 0.25 * 0.5f64.powi(k as i32);
            let (lo, hi) = if leftward { (anchor - delta, anchor) } else { (anchor, anchor + delta) };
            let f = resolved_indicator(&shape, &Region::Rect { lower: vec![lo], upper: vec![hi] })?;
            Ok((1.0 / delta, f))
        })
        .collect::<Result<_>>()?;
    norm_ratio_series(phi, &cases, MaximalConfig::default_for)
}

fn ex4_6(settings: &RunSettings) -> Bundle {
    let phi = PhiFunction::example_4_6();
    let mut b = Bundle::new("ex4_6", settings.clone(), phi.clone());
    let spec = sample_spec(&phi, settings);

    if let Some(r) = b.stage("A0", || check_a0(&phi, &spec)) {
        b.claim("(A0) holds", true, r.holds, format!("β = {}", r.value("beta")));
        b.report("A0", r);
    }
    if let Some(r) = b.stage("A1", || check_a1(&phi, &spec)) {
        b.claim("(A1) holds", true, r.holds, format!("β = {}", r.value("beta")));
        b.report("A1", r);
    }
    for eps in [0.25, 0.5] {
        let lim = (2.0 - eps) * (1.0 - 1e-12);
        let xs: Vec<Vec<f64>> = (0..=40).map(|k| vec![-lim + 2.0 * lim * k as f64 / 40.0]).collect();
        let inner = SampleSpec { x_samples: xs, ..spec.clone() }.with_t_range(1e-100, 1e4);
        let p = 1.0 + eps;
        if let Some(r) = b.stage(&format!("aInc on Ω_{eps}"), || check_ainc(&phi, p, TInterval::all(), &inner)) {
            let a = r.value("a");
            b.claim(format!("aInc_{p} holds on Ω_{eps} with a ≤ 10"), true, r.holds && a <= 10.0, format!("a = {a}"));
            b.report(format!("aInc_{p} on Ω_{eps}"), r);
        }
    }
    let mut xs: Vec<Vec<f64>> = (1..=30)
        .flat_map(|k| {
            let d = 2f64.powi(-k);
            [vec![2.0 - d], vec![-2.0 + d]]
        })
        .collect();
    xs.push(vec![0.0]);
    let near_boundary = SampleSpec { x_samples: xs, ..spec.clone() }.with_t_range(1e-100, 1e4);
    ainc_fails_for(&mut b, &phi, &[1.05, 1.1], TInterval::all(), &near_boundary, "Ω", 1e3);

    let Some(series) = b.stage("shrinking indicators", || {
        let shape = interval_shape(-2.0, 2.0, settings)?;
        shrinking_series(&phi, &shape, 2.0, true, 5)
    }) else {
        return b;
    };
    b.claim("‖Mf_δ‖/‖f_δ‖ grows as δ → 0 for f_δ = χ_(2−δ,2)", true, grows(&series), growth_evidence(&series));
    b.experiments.push(Experiment::NormSeries { label: "f_δ = χ_(2−δ,2), parameter 1/δ".into(), report: series });
    b
}

/// Largest relative deviation of the ratios in one series from their mean.
fn series_drift(series: &OperatorNormReport) -> f64 {
    let vals: Vec<f64> = series.ratios.iter().filter_map(|q| q.ratio).map(|r| r.to_f64()).collect();
    if vals.is_empty() {
        return 0.0;
    }
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    vals.iter().map(|v| (v - mean).abs() / mean).fold(0.0, f64::max)
}

/// A monotone series that also moves by more than the bounded drift; a
/// monotone but saturating series is not counted as growth.
fn grows(series: &OperatorNormReport) -> bool {
    series.unbounded_evidence && series_drift(series) > BOUNDED_DRIFT
}

fn growth_evidence(series: &OperatorNormReport) -> String {
    let ratios = series
        .ratios
        .iter()
        .map(|q| format!("{}: {:.4}", q.parameter, q.ratio.map_or(f64::NAN, |r| r.to_f64())))
        .collect::<Vec<_>>()
        .join(", ");
    format!("{ratios}; drift {:.1}%", 100.0 * series_drift(series))
}

fn dp_cor49(settings: &RunSettings) -> Bundle {
    let weight = Field::PiecewiseLinear { coordinate: Coordinate::Radial, knots: vec![[0.0, 1.0], [1.0, 0.0]] };
    let domain = Domain::interval(-4.0, 4.0);
    let family = |p: f64| make_family("double_phase", json!({ "p": p, "q": 2.0, "a": weight.clone() }), domain.clone());
    let base = family(1.0).expect("double phase with p = 1 is valid");
    let mut b = Bundle::new("dp_cor49", settings.clone(), base);

    for p in [1.0, 1.5] {
        let Some(phi) = b.stage(&format!("build p = {p}"), || family(p)) else { return b };
        if p != 1.0 {
            b.derived.push(LabeledPhi { label: format!("p = {p}"), phi: phi.clone() });
        }
        let spec = sample_spec(&phi, settings);
        let asym = PhiCurve::power(1.0, p).expect("t^p is a Φ-curve");
        if let Some(r) = b.stage(&format!("A0, p = {p}"), || check_a0(&phi, &spec)) {
            b.claim(format!("p = {p}: (A0) holds"), true, r.holds, format!("β = {}", r.value("beta")));
            b.report(format!("A0, p = {p}"), r);
        }
        if let Some(r) = b.stage(&format!("A2, p = {p}"), || check_a2(&phi, &asym, &WeightFunction::Zero, 0.5, 1.0, &spec)) {
            b.claim(format!("p = {p}: (A2) holds with φ∞ = t^{p}, h ≡ 0"), true, r.holds, "β = 1/2");
            b.report(format!("A2, p = {p}"), r);
        }
        // any exponent strictly between 1 and p witnesses aInc when p > 1
        let q = (0.5 * (1.0 + p)).max(1.05);
        let curve_spec = SampleSpec::new(vec![vec![0.0]]).with_t_range(1e-80, 1e4);
        if let Some(r) = b.stage(&format!("aInc of φ∞, p = {p}"), || {
            check_ainc_curve(&asym, q, TInterval::up_to(1.0), &curve_spec)
        }) {
            b.claim(
                format!("p = {p}: φ∞ = t^{p} satisfies aInc_{q} on (0,1]"),
                p > 1.0,
                r.holds,
                format!("a = {}", r.value("a")),
            );
            b.report(format!("aInc_{q} of φ∞, p = {p}"), r);
        }
        let Some(series) = b.stage(&format!("shrinking indicators, p = {p}"), || {
            let shape = interval_shape(-4.0, 4.0, settings)?;
            shrinking_series(&phi, &shape, 2.0, false, 5)
        }) else {
            return b;
        };
        if p == 1.0 {
            b.claim("p = 1: ‖Mf_δ‖/‖f_δ‖ grows as δ → 0", true, grows(&series), growth_evidence(&series));
        } else {
            let drift = series_drift(&series);
            b.claim(
                format!("p = {p}: ‖Mf_δ‖/‖f_δ‖ stays bounded"),
                true,
                drift <= BOUNDED_DRIFT,
                growth_evidence(&series),
            );
        }
        b.experiments.push(Experiment::NormSeries { label: format!("p = {p}, f_δ = χ_(2,2+δ)"), report: series });
    }
    b
}
