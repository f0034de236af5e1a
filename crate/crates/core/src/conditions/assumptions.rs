//! The standing assumptions (A0), (A1), (A1') and (A2).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::report::{Condition, ConditionReport, Witness};
use super::sample::{curve_features, normalize_grid, SampleSpec, TInterval};
use super::search::largest_passing;
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::geometry::{norm, unit_ball_volume, WeightFunction};
use crate::phi_core::{PhiCurve, PhiFunction};

/// Relative slack allowed in sampled inequalities.
pub const INEQUALITY_SLACK: f64 = 1e-10;

pub(crate) fn le(lhs: Extended, rhs: Extended) -> bool {
    match (lhs, rhs) {
        (_, Extended::Infinite) => true,
        (Extended::Infinite, _) => false,
        (Extended::Finite(a), Extended::Finite(b)) => a <= b * (1.0 + INEQUALITY_SLACK) + 1e-300,
    }
}

/// `lhs / rhs` as an extended ratio (1 when both are infinite or zero).
pub(crate) fn ratio(lhs: Extended, rhs: Extended) -> Extended {
    match (lhs, rhs) {
        (Extended::Infinite, Extended::Infinite) => Extended::Finite(1.0),
        (_, Extended::Infinite) => Extended::ZERO,
        (Extended::Infinite, _) => Extended::Infinite,
        (Extended::Finite(a), Extended::Finite(b)) => {
            if b > 0.0 {
                Extended::Finite(a / b)
            } else if a > 0.0 {
                Extended::Infinite
            } else {
                Extended::Finite(1.0)
            }
        }
    }
}

fn curves(phi: &PhiFunction, spec: &SampleSpec) -> Result<Vec<PhiCurve>> {
    spec.validate()?;
    spec.x_samples.iter().map(|x| phi.curve_at(x)).collect()
}

/// (A0) through the equivalent form `φ(x, β) ≤ 1 ≤ φ(x, 1/β)`: reports the largest
/// such β valid at every sampled x.
pub fn check_a0(phi: &PhiFunction, spec: &SampleSpec) -> Result<ConditionReport> {
    let cs = curves(phi, spec)?;
    let per_x: Vec<Option<f64>> = cs
        .par_iter()
        .map(|c| largest_passing(|b| c.eval(b) <= Extended::Finite(1.0) && c.eval(1.0 / b) >= Extended::Finite(1.0), 1e-18, 60))
        .collect();
    let mut report = ConditionReport::new(Condition::A0, spec);
    let mut beta = 1.0;
    let mut worst = 0;
    for (i, b) in per_x.iter().enumerate() {
        let b = b.unwrap_or(0.0);
        if b < beta {
            beta = b;
            worst = i;
        }
    }
    report.holds = beta > 0.0;
    report.set("beta", beta);
    let c = &cs[worst];
    report.worst_witness = Some(Witness {
        x: spec.x_samples[worst].clone(),
        y: None,
        t: c.inverse(1.0),
        s: None,
        value: Extended::Finite(beta),
    });
    Ok(report)
}

struct BallSample {
    radius: f64,
    x: Vec<f64>,
    y: Vec<f64>,
}

fn ball_samples(phi: &PhiFunction, spec: &SampleSpec) -> Vec<BallSample> {
    let dim = phi.dim();
    let cfg = &spec.balls;
    let bx: Vec<[f64; 2]> = cfg
        .center_box
        .clone()
        .or_else(|| phi.domain.bounds.clone())
        .unwrap_or_else(|| vec![[-8.0, 8.0]; dim]);
    let r_max = (1.0 / unit_ball_volume(dim)).powf(1.0 / dim as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for _ in 0..cfg.count {
        let center: Vec<f64> = bx.iter().map(|[lo, hi]| rng.gen_range(*lo..*hi)).collect();
        let radius = r_max * 10f64.powf(rng.gen_range(-3.0..0.0));
        let draw = |rng: &mut ChaCha8Rng| -> Option<Vec<f64>> {
            for _ in 0..64 {
                let p: Vec<f64> = center.iter().map(|c| c + radius * rng.gen_range(-1.0..1.0)).collect();
                let d: Vec<f64> = p.iter().zip(&center).map(|(a, b)| a - b).collect();
                if norm(&d) < radius && phi.domain.contains(&p) {
                    return Some(p);
                }
            }
            None
        };
        for _ in 0..cfg.pairs {
            if let (Some(x), Some(y)) = (draw(&mut rng), draw(&mut rng)) {
                out.push(BallSample { radius, x, y });
            }
        }
    }
    out
}

fn levels(volume: f64, count: usize) -> Vec<f64> {
    let top = 1.0 / volume;
    if count <= 1 || top <= 1.0 {
        return vec![1.0];
    }
    (0..count).map(|k| top.powf(k as f64 / (count - 1) as f64)).collect()
}

/// Smallest per-sample β over the ball family, with the minimizing sample.
fn ball_check(
    phi: &PhiFunction,
    spec: &SampleSpec,
    condition: Condition,
    per_level: impl Fn(&PhiCurve, &PhiCurve, f64, f64) -> Option<(f64, f64)> + Sync,
) -> Result<ConditionReport> {
    spec.validate()?;
    let dim = phi.dim();
    let samples = ball_samples(phi, spec);
    let evaluated: Vec<Option<(f64, f64, f64)>> = samples
        .par_iter()
        .map(|b| -> Result<Option<(f64, f64, f64)>> {
            let cx = phi.curve_at(&b.x)?;
            let cy = phi.curve_at(&b.y)?;
            let vol = unit_ball_volume(dim) * b.radius.powi(dim as i32);
            let mut best: Option<(f64, f64, f64)> = None;
            for tau in levels(vol, spec.balls.levels) {
                if let Some((beta, t)) = per_level(&cx, &cy, tau, 1.0 / vol) {
                    if best.is_none_or(|(bb, _, _)| beta < bb) {
                        best = Some((beta, t, tau));
                    }
                }
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;
    let mut report = ConditionReport::new(condition, spec);
    let mut beta = 1.0;
    let mut worst: Option<(usize, f64)> = None;
    let mut used = 0usize;
    for (i, e) in evaluated.iter().enumerate() {
        if let Some((b, t, _)) = e {
            used += 1;
            if worst.is_none() || *b < beta {
                beta = beta.min(*b);
                worst = Some((i, *t));
            }
        }
    }
    report.set("beta", beta);
    report.set("samples", used as f64);
    match worst {
        None => {
            report.holds = true;
            report.inconclusive = true;
            report.note("no admissible (ball, x, y, t) sample");
        }
        Some((i, t)) => {
            report.holds = beta > 0.0;
            report.worst_witness = Some(Witness {
                x: samples[i].x.clone(),
                y: Some(samples[i].y.clone()),
                t,
                s: Some(samples[i].radius),
                value: Extended::Finite(beta),
            });
        }
    }
    Ok(report)
}

/// (A1'): the largest β with `φ(x, βt) ≤ φ(y, t)` whenever `φ(y, t) ∈ [1, 1/|B|]`,
/// over random balls `|B| ≤ 1` and point pairs in them.
///
/// The witness records the ball radius in `s`.
pub fn check_a1prime(phi: &PhiFunction, spec: &SampleSpec) -> Result<ConditionReport> {
    ball_check(phi, spec, Condition::A1Prime, |cx, cy, tau, top| {
        let t = cy.inverse(tau);
        let v = cy.eval(t).finite()?;
        // at a jump the infimum may sit just below the level; step past it
        let (t, v) = if v < 1.0 {
            let t2 = t * (1.0 + 1e-12);
            (t2, cy.eval(t2).finite()?)
        } else {
            (t, v)
        };
        if !(t > 0.0) || v < 1.0 || v > top * (1.0 + 1e-12) {
            return None;
        }
        Some(((cx.sup_level(v) / t).min(1.0), t))
    })
}

/// (A1) checked directly: the largest β with `β φ⁻¹(x, τ) ≤ φ⁻¹(y, τ)` for
/// `τ ∈ [1, 1/|B|]` over the same ball family as [`check_a1prime`].
pub fn check_a1(phi: &PhiFunction, spec: &SampleSpec) -> Result<ConditionReport> {
    ball_check(phi, spec, Condition::A1, |cx, cy, tau, _| {
        let ix = cx.inverse(tau);
        let iy = cy.inverse(tau);
        if !(ix > 0.0) {
            return None;
        }
        Some(((iy / ix).min(1.0), tau))
    })
}

/// (A2) for an explicit candidate `(φ∞, h, β, s)`:
/// `φ(x, βt) ≤ φ∞(t) + h(x)` where `φ∞(t) ≤ s`, and `φ∞(βt) ≤ φ(x, t) + h(x)` where `φ(x, t) ≤ s`.
pub fn check_a2(
    phi: &PhiFunction,
    phi_inf: &PhiCurve,
    h: &WeightFunction,
    beta: f64,
    s: f64,
    spec: &SampleSpec,
) -> Result<ConditionReport> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Argument(format!("β = {beta} must lie in (0, 1]")));
    }
    if !(s > 0.0) {
        return Err(Error::Argument(format!("s = {s} must be positive")));
    }
    if !h.is_admissible(&phi.domain) {
        return Err(Error::Precondition("h must have finite L¹ and L∞ norms on the domain".into()));
    }
    let cs = curves(phi, spec)?;
    let range = TInterval::all();
    let (lo, hi) = spec.window(&range);
    let per_x: Vec<(Extended, f64, bool)> = cs
        .par_iter()
        .zip(spec.x_samples.par_iter())
        .map(|(c, x)| {
            let hx = Extended::Finite(h.eval(x));
            let mut ts = spec.t_grid(&range);
            ts.extend(curve_features(c, lo, hi));
            ts.extend(curve_features(phi_inf, lo, hi));
            ts.extend(curve_features(c, lo, hi).into_iter().map(|t| t / beta));
            ts.extend(curve_features(phi_inf, lo, hi).into_iter().map(|t| t / beta));
            ts.push(phi_inf.sup_level(s));
            ts.push(c.sup_level(s));
            let ts = normalize_grid(ts);
            let mut worst = (Extended::ZERO, ts[0]);
            let mut ok = true;
            let mut record = |l: Extended, r: Extended, t: f64| {
                let q = ratio(l, r);
                if q > worst.0 {
                    worst = (q, t);
                }
                ok &= le(l, r);
            };
            for &t in &ts {
                if phi_inf.eval(t) <= Extended::Finite(s) {
                    record(c.eval(beta * t), phi_inf.eval(t) + hx, t);
                }
                if c.eval(t) <= Extended::Finite(s) {
                    record(phi_inf.eval(beta * t), c.eval(t) + hx, t);
                }
            }
            (worst.0, worst.1, ok)
        })
        .collect();
    let mut report = ConditionReport::new(Condition::A2, spec);
    report.set("beta", beta);
    report.set("s", s);
    report.set("h_l1", h.l1_norm(&phi.domain).map_or(Extended::Infinite, Extended::Finite));
    report.set("h_linf", h.linf_norm().map_or(Extended::Infinite, Extended::Finite));
    report.holds = per_x.iter().all(|r| r.2);
    let mut worst = 0;
    for (i, r) in per_x.iter().enumerate() {
        if r.0 > per_x[worst].0 {
            worst = i;
        }
    }
    report.set("max_ratio", per_x[worst].0);
    report.worst_witness = Some(Witness {
        x: spec.x_samples[worst].clone(),
        y: None,
        t: per_x[worst].1,
        s: None,
        value: per_x[worst].0,
    });
    Ok(report)
}
