//! Almost-monotonicity of `t ↦ φ(x, t)/t^p`.

use rayon::prelude::*;

use super::report::{Condition, ConditionReport, Witness};
use super::sample::{curve_features, log_grid, normalize_grid, SampleSpec, TInterval};
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::phi_core::{PhiCurve, PhiFunction};

const EXPONENT_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Increasing,
    Decreasing,
}

/// Largest sampled `ln(r(t)/r(s))` over `t < s` for the increasing direction
/// (or `ln(r(s)/r(t))` for the decreasing one), with the pair attaining it.
struct Scan {
    log_ratio: f64,
    t: f64,
    s: f64,
}

fn log_r(curve: &PhiCurve, t: f64, p: f64, dir: Direction) -> f64 {
    let v = match curve.eval(t) {
        Extended::Infinite => f64::INFINITY,
        Extended::Finite(v) if v > 0.0 => v.ln() - p * t.ln(),
        Extended::Finite(_) => f64::NEG_INFINITY,
    };
    match dir {
        Direction::Increasing => v,
        Direction::Decreasing => -v,
    }
}

fn scan(curve: &PhiCurve, ts: &[f64], p: f64, dir: Direction) -> Scan {
    let mut best = Scan { log_ratio: 0.0, t: ts[0], s: ts[0] };
    let mut prefix = f64::NEG_INFINITY;
    let mut prefix_t = ts[0];
    for &s in ts {
        let lr = log_r(curve, s, p, dir);
        if prefix > f64::NEG_INFINITY {
            // both infinite on the same side means ∞ ≤ a·∞, which holds
            let both_inf = prefix == f64::INFINITY && lr == f64::INFINITY;
            if !both_inf {
                let cand = prefix - lr;
                if cand > best.log_ratio {
                    best = Scan { log_ratio: cand, t: prefix_t, s };
                }
            }
        }
        if lr > prefix {
            prefix = lr;
            prefix_t = s;
        }
    }
    best
}

fn sample_points(curve: &PhiCurve, spec: &SampleSpec, range: &TInterval) -> Vec<f64> {
    let (lo, hi) = spec.window(range);
    let mut ts = spec.t_grid(range);
    ts.extend(curve_features(curve, lo, hi));
    normalize_grid(ts)
}

fn refine(ts: &[f64], worst: &Scan, per_decade: usize) -> Vec<f64> {
    let mut out = ts.to_vec();
    for &c in &[worst.t, worst.s] {
        let i = ts.partition_point(|&v| v < c);
        let a = ts[i.saturating_sub(1)];
        let b = ts[(i + 1).min(ts.len() - 1)];
        if b > a {
            out.extend(log_grid(a, b, per_decade * 8));
        }
    }
    normalize_grid(out)
}

/// Analytic behaviour at the open ends of the range, from the limiting exponents.
fn endpoint_failure(curve: &PhiCurve, p: f64, range: &TInterval, dir: Direction) -> Option<String> {
    let low = curve.low_exponent().unwrap_or(f64::INFINITY);
    match dir {
        Direction::Increasing => {
            if range.reaches_zero() && low < p - EXPONENT_SLACK {
                return Some(format!("φ(x,t)/t^p ~ t^({low} − {p}) blows up as t → 0⁺"));
            }
            if range.is_unbounded() && curve.infinite_tail().is_none() {
                let high = curve.high_exponent().unwrap_or(0.0);
                if high < p - EXPONENT_SLACK {
                    return Some(format!("φ(x,t)/t^p ~ t^({high} − {p}) decays as t → ∞"));
                }
            }
        }
        Direction::Decreasing => {
            if range.reaches_zero() && low > p + EXPONENT_SLACK {
                return Some(format!("φ(x,t)/t^q ~ t^({low} − {p}) vanishes as t → 0⁺"));
            }
            if range.is_unbounded() {
                if curve.infinite_tail().is_some() {
                    return Some("φ(x,·) jumps to ∞ at a finite t".into());
                }
                let high = curve.high_exponent().unwrap_or(0.0);
                if high > p + EXPONENT_SLACK {
                    return Some(format!("φ(x,t)/t^q ~ t^({high} − {p}) blows up as t → ∞"));
                }
            }
        }
    }
    None
}

struct PerX {
    scan: Scan,
    analytic: Option<String>,
}

fn run(phi: &PhiFunction, p: f64, range: TInterval, spec: &SampleSpec, dir: Direction) -> Result<ConditionReport> {
    spec.validate()?;
    range.validate()?;
    if !(p >= 1.0) && dir == Direction::Increasing {
        return Err(Error::Argument(format!("exponent p = {p} must be ≥ 1")));
    }
    if !(p > 0.0) {
        return Err(Error::Argument(format!("exponent {p} must be positive")));
    }
    let curves = spec
        .x_samples
        .iter()
        .map(|x| phi.curve_at(x))
        .collect::<Result<Vec<_>>>()?;
    let per_x: Vec<PerX> = curves
        .par_iter()
        .map(|curve| {
            let ts = sample_points(curve, spec, &range);
            PerX { scan: scan(curve, &ts, p, dir), analytic: endpoint_failure(curve, p, &range, dir) }
        })
        .collect();

    // deterministic reduction: first index wins ties
    let mut worst = 0;
    for (i, r) in per_x.iter().enumerate() {
        if r.scan.log_ratio > per_x[worst].scan.log_ratio {
            worst = i;
        }
    }
    let mut best = Scan { log_ratio: per_x[worst].scan.log_ratio, t: per_x[worst].scan.t, s: per_x[worst].scan.s };
    let curve = &curves[worst];
    let mut ts = sample_points(curve, spec, &range);
    for _ in 0..spec.refinement_rounds {
        if best.log_ratio <= 0.0 || !best.log_ratio.is_finite() {
            break;
        }
        ts = refine(&ts, &best, spec.per_decade);
        let again = scan(curve, &ts, p, dir);
        if again.log_ratio > best.log_ratio {
            best = again;
        }
    }

    let (condition, name, pname) = match dir {
        Direction::Increasing => (Condition::AInc, "a", "p"),
        Direction::Decreasing => (Condition::ADec, "L", "q"),
    };
    let mut report = ConditionReport::new(condition, spec);
    report.t_range = Some(range);
    let sampled = Extended::from_f64(best.log_ratio.exp().max(1.0));
    report.set(pname, p);
    report.set(&format!("{name}_sampled"), sampled);
    let analytic = per_x.iter().enumerate().find_map(|(i, r)| r.analytic.as_ref().map(|m| (i, m)));
    let constant = match analytic {
        Some((i, msg)) => {
            report.note(format!("at x = {:?}: {msg}", spec.x_samples[i]));
            Extended::Infinite
        }
        None => sampled,
    };
    report.set(name, constant);
    report.holds = constant.is_finite();
    report.worst_witness = Some(Witness {
        x: spec.x_samples[worst].clone(),
        y: None,
        t: best.t,
        s: Some(best.s),
        value: sampled,
    });
    Ok(report)
}

/// Estimate the least `a` with `φ(x,t)/t^p ≤ a·φ(x,s)/s^p` for sampled `x` and
/// `t < s` in `range`.
///
/// The constant is `+∞` when the limiting exponents of some sampled curve make the
/// ratio unbounded at an open end of the range; `a_sampled` keeps the largest
/// ratio actually observed on the lattice.
pub fn check_ainc(phi: &PhiFunction, p: f64, range: TInterval, spec: &SampleSpec) -> Result<ConditionReport> {
    run(phi, p, range, spec, Direction::Increasing)
}

/// The decreasing counterpart: least `L` with `φ(x,s)/s^q ≤ L·φ(x,t)/t^q` for `t < s`.
pub fn check_adec(phi: &PhiFunction, q: f64, range: TInterval, spec: &SampleSpec) -> Result<ConditionReport> {
    run(phi, q, range, spec, Direction::Decreasing)
}

/// [`check_ainc`] for a single x-independent curve.
pub fn check_ainc_curve(curve: &PhiCurve, p: f64, range: TInterval, spec: &SampleSpec) -> Result<ConditionReport> {
    let phi = PhiFunction::orlicz(curve.clone(), 1);
    let spec = SampleSpec { x_samples: vec![vec![0.0]], ..spec.clone() };
    check_ainc(&phi, p, range, &spec)
}
