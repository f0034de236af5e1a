//! Equivalence `φ ≃ ψ` and weak equivalence `φ ∼ ψ`.

use rayon::prelude::*;

use super::assumptions::{le, ratio};
use super::report::{Condition, ConditionReport, Witness};
use super::sample::{curve_features, normalize_grid, SampleSpec, TInterval};
use super::search::least_passing;
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::geometry::WeightFunction;
use crate::phi_core::{PhiCurve, PhiFunction};

const EXPONENT_SLACK: f64 = 1e-12;

struct Pair {
    phi: PhiCurve,
    psi: PhiCurve,
    ts: Vec<f64>,
}

fn pairs(phi: &PhiFunction, psi: &PhiFunction, spec: &SampleSpec) -> Result<Vec<Pair>> {
    spec.validate()?;
    if phi.dim() != psi.dim() {
        return Err(Error::Argument("functions live in different dimensions".into()));
    }
    let range = TInterval::all();
    let (lo, hi) = spec.window(&range);
    spec.x_samples
        .iter()
        .map(|x| {
            let (a, b) = (phi.curve_at(x)?, psi.curve_at(x)?);
            let mut ts = spec.t_grid(&range);
            ts.extend(curve_features(&a, lo, hi));
            ts.extend(curve_features(&b, lo, hi));
            Ok(Pair { phi: a, psi: b, ts: normalize_grid(ts) })
        })
        .collect()
}

/// Worst violation factor of `ψ(t/L) ≤ φ(t) ≤ ψ(Lt)` on one pair (≤ 1 means satisfied).
fn equiv_worst(p: &Pair, l: f64) -> (Extended, f64, bool) {
    let mut worst = (Extended::ZERO, p.ts[0]);
    let mut ok = true;
    for &t in &p.ts {
        let v = p.phi.eval(t);
        for (lhs, rhs) in [(p.psi.eval(t / l), v), (v, p.psi.eval(l * t))] {
            let q = ratio(lhs, rhs);
            if q > worst.0 {
                worst = (q, t);
            }
            ok &= le(lhs, rhs);
        }
    }
    (worst.0, worst.1, ok)
}

fn exponent_mismatch(a: &PhiCurve, b: &PhiCurve, at_zero: bool) -> Option<String> {
    if at_zero {
        let (la, lb) = (a.low_exponent()?, b.low_exponent()?);
        if (la - lb).abs() > EXPONENT_SLACK {
            return Some(format!("growth t^{la} vs t^{lb} as t → 0⁺"));
        }
    } else {
        match (a.infinite_tail(), b.infinite_tail()) {
            (None, None) => {
                let (ha, hb) = (a.high_exponent()?, b.high_exponent()?);
                if (ha - hb).abs() > EXPONENT_SLACK {
                    return Some(format!("growth t^{ha} vs t^{hb} as t → ∞"));
                }
            }
            (Some(_), None) | (None, Some(_)) => return Some("only one function jumps to ∞".into()),
            (Some(_), Some(_)) => {}
        }
    }
    None
}

/// Verify `ψ(x, t/L) ≤ φ(x, t) ≤ ψ(x, Lt)` at every sample, and search the least
/// such `L` on a dyadic ladder (`L_min`, `+∞` when the limiting exponents differ).
pub fn check_equivalence(phi: &PhiFunction, psi: &PhiFunction, l: f64, spec: &SampleSpec) -> Result<ConditionReport> {
    if !(l >= 1.0) {
        return Err(Error::Argument(format!("L = {l} must be ≥ 1")));
    }
    let ps = pairs(phi, psi, spec)?;
    let mismatch = ps.iter().enumerate().find_map(|(i, p)| {
        exponent_mismatch(&p.phi, &p.psi, true)
            .or_else(|| exponent_mismatch(&p.phi, &p.psi, false))
            .map(|m| (i, m))
    });
    let at = |l: f64| -> Vec<(Extended, f64, bool)> { ps.par_iter().map(|p| equiv_worst(p, l)).collect() };
    let given = at(l);
    let sampled_min = least_passing(|l| at(l).iter().all(|r| r.2), 2f64.powi(40), 40);

    let mut report = ConditionReport::new(Condition::Equiv, spec);
    report.t_range = Some(TInterval::all());
    report.set("L", l);
    report.set("L_sampled", sampled_min.map_or(Extended::Infinite, Extended::Finite));
    let l_min = match &mismatch {
        Some((i, m)) => {
            report.note(format!("at x = {:?}: {m}; no finite L exists", spec.x_samples[*i]));
            Extended::Infinite
        }
        None => sampled_min.map_or(Extended::Infinite, Extended::Finite),
    };
    report.set("L_min", l_min);
    report.holds = mismatch.is_none() && given.iter().all(|r| r.2);
    let mut worst = 0;
    for (i, r) in given.iter().enumerate() {
        if r.0 > given[worst].0 {
            worst = i;
        }
    }
    report.worst_witness = Some(Witness {
        x: spec.x_samples[worst].clone(),
        y: None,
        t: given[worst].1,
        s: None,
        value: given[worst].0,
    });
    Ok(report)
}

/// Verify `ψ(x, t) ≤ φ(x, Lt) + h(x)` and `φ(x, t) ≤ ψ(x, Lt) + h(x)` at every sample.
pub fn check_weak_equivalence(
    phi: &PhiFunction,
    psi: &PhiFunction,
    l: f64,
    h: &WeightFunction,
    spec: &SampleSpec,
) -> Result<ConditionReport> {
    if !(l >= 1.0) {
        return Err(Error::Argument(format!("L = {l} must be ≥ 1")));
    }
    let ps = pairs(phi, psi, spec)?;
    let rows: Vec<(Extended, f64, bool)> = ps
        .par_iter()
        .zip(spec.x_samples.par_iter())
        .map(|(p, x)| {
            let hx = Extended::Finite(h.eval(x));
            let mut worst = (Extended::ZERO, p.ts[0]);
            let mut ok = true;
            for &t in &p.ts {
                let checks = [
                    (p.psi.eval(t), p.phi.eval(l * t) + hx),
                    (p.phi.eval(t), p.psi.eval(l * t) + hx),
                ];
                for (lhs, rhs) in checks {
                    let q = ratio(lhs, rhs);
                    if q > worst.0 {
                        worst = (q, t);
                    }
                    ok &= le(lhs, rhs);
                }
            }
            (worst.0, worst.1, ok)
        })
        .collect();
    let mut report = ConditionReport::new(Condition::WeakEquiv, spec);
    report.t_range = Some(TInterval::all());
    report.set("L", l);
    let l1 = h.l1_norm(&phi.domain);
    let linf = h.linf_norm();
    report.set("h_l1", l1.map_or(Extended::Infinite, Extended::Finite));
    report.set("h_linf", linf.map_or(Extended::Infinite, Extended::Finite));
    let admissible = h.is_admissible(&phi.domain);
    if !admissible {
        report.note("h is not in L¹ ∩ L∞ on the domain");
    }
    let tails = ps.iter().enumerate().find_map(|(i, p)| exponent_mismatch(&p.phi, &p.psi, false).map(|m| (i, m)));
    if let Some((i, m)) = &tails {
        report.note(format!("at x = {:?}: {m}; an additive h cannot absorb it", spec.x_samples[*i]));
    }
    report.holds = admissible && tails.is_none() && rows.iter().all(|r| r.2);
    let mut worst = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.0 > rows[worst].0 {
            worst = i;
        }
    }
    report.worst_witness = Some(Witness {
        x: spec.x_samples[worst].clone(),
        y: None,
        t: rows[worst].1,
        s: None,
        value: rows[worst].0,
    });
    Ok(report)
}
