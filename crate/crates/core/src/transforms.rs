//! Constructive modifications of Φ-functions: glueing, capping, asymptote
//! extraction and repair.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::conditions::{check_ainc, SampleSpec, TInterval};
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::geometry::{Region, WeightFunction};
use crate::phi_core::{Piece, PhiCurve, PhiFunction, PhiSpec, PowerTerm, Provenance};

/// An asymptote candidate `(φ∞, h, β, s)` for (A2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptotePair {
    pub phi_inf: PhiCurve,
    pub h: WeightFunction,
    pub beta: f64,
    pub s: f64,
}

impl AsymptotePair {
    pub fn new(phi_inf: PhiCurve, h: WeightFunction, beta: f64, s: f64) -> Result<Self> {
        let pair = AsymptotePair { phi_inf, h, beta, s };
        pair.validate()?;
        Ok(pair)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::Argument(format!("β = {} must lie in (0, 1]", self.beta)));
        }
        if !(self.s > 0.0) {
            return Err(Error::Argument(format!("s = {} must be positive", self.s)));
        }
        if self.h.linf_norm().is_none() {
            return Err(Error::Argument("h must be bounded".into()));
        }
        Ok(())
    }
}

fn provenance(name: &str, inputs: serde_json::Value) -> Provenance {
    Provenance { transform: name.into(), inputs }
}

/// `ψ₂ = ψ₁^p` on `G × [0, 1]` and `ψ₁` elsewhere.
///
/// `ψ₁` must satisfy `ψ₁(x, 1) = 1` at every sampled point of `G`; otherwise the
/// glued function would jump at `t = 1`.
pub fn thm31_glue(psi1: &PhiFunction, region: &Region, p: f64, spec: &SampleSpec) -> Result<PhiFunction> {
    if !(p > 1.0) {
        return Err(Error::Argument(format!("glue power {p} must exceed 1")));
    }
    for x in spec.x_samples.iter().filter(|x| region.contains(x)) {
        let v = psi1.eval(x, 1.0)?;
        if (v.to_f64() - 1.0).abs() > 1e-9 {
            return Err(Error::Precondition(format!("ψ₁(x, 1) = {v} ≠ 1 at x = {x:?}")));
        }
    }
    let spec_out = PhiSpec::Thm31Glue { base: Box::new(psi1.spec.clone()), region: region.clone(), p };
    let out = PhiFunction::new(spec_out, psi1.domain.clone())?;
    Ok(out.with_provenance(provenance("thm31_glue", json!({ "region": region, "p": p }))))
}

/// Half of `sup{t : max(φ∞(t), φ(x, t)) ≤ 1}`, minimized over the sampled x.
pub fn prop44_t1(phi: &PhiFunction, phi_inf: &PhiCurve, spec: &SampleSpec) -> Result<f64> {
    spec.validate()?;
    let mut sup = phi_inf.sup_level(1.0);
    for x in &spec.x_samples {
        sup = sup.min(phi.curve_at(x)?.sup_level(1.0));
    }
    if !(sup > 0.0) {
        return Err(Error::Precondition("max(φ∞, φ) exceeds 1 at every t > 0; (A0) fails".into()));
    }
    Ok(0.5 * sup)
}

/// `φ∞` with value `+∞` beyond `β₀`.
pub fn prop44_cap(phi_inf: &PhiCurve, beta0: f64) -> Result<PhiCurve> {
    if !(beta0 > 0.0) {
        return Err(Error::Argument(format!("β₀ = {beta0} must be positive")));
    }
    phi_inf.with_tail(beta0)
}

/// `φ∞` on `[0, t₁]` continued by `φ∞(t₁) + (t − t₁)^p`.
pub fn prop44_repair_asymptote(phi_inf: &PhiCurve, t1: f64, p: f64) -> Result<PhiCurve> {
    if !(t1 > 0.0 && t1.is_finite()) || !(p > 1.0) {
        return Err(Error::Argument(format!("need t₁ > 0 and p > 1, got t₁ = {t1}, p = {p}")));
    }
    if phi_inf.infinite_tail().is_some_and(|b| b <= t1) {
        return Err(Error::Precondition("φ∞ is infinite before t₁".into()));
    }
    let seam = phi_inf.value(t1);
    let mut segs = phi_inf.segments_within(0.0, t1);
    let tail = Piece { terms: vec![PowerTerm::new(seam, 0.0), PowerTerm::new(1.0, p)], shift: t1, outer: 1.0 };
    segs.push((tail, f64::INFINITY));
    PhiCurve::from_segments(segs, None)
}

/// `ψ(x, t) = φ∞(β₂t)` for `t ≤ t₁` and `max(φ∞(β₂t₁), φ(x, t))` beyond.
pub fn thm47_construct(phi: &PhiFunction, pair: &AsymptotePair, t1: f64) -> Result<PhiFunction> {
    pair.validate()?;
    if !(t1 > 0.0) {
        return Err(Error::Argument(format!("t₁ = {t1} must be positive")));
    }
    let spec = PhiSpec::Thm47 { base: Box::new(phi.spec.clone()), phi_inf: pair.phi_inf.clone(), beta: pair.beta, t1 };
    let out = PhiFunction::new(spec, phi.domain.clone())?;
    Ok(out.with_provenance(provenance("thm47_construct", json!({ "pair": pair, "t1": t1 }))))
}

/// Largest `p ∈ [1, p_max]` (to 1e-6) for which aInc_p holds on `range` with
/// sampled constant at most `a_max`; `None` if even `p = 1` exceeds it.
pub fn ainc_exponent(phi: &PhiFunction, range: TInterval, a_max: f64, p_max: f64, spec: &SampleSpec) -> Result<Option<f64>> {
    let ok = |p: f64| -> Result<bool> {
        let r = check_ainc(phi, p, range, spec)?;
        Ok(r.holds && r.value("a") <= a_max)
    };
    if !ok(1.0)? {
        return Ok(None);
    }
    if ok(p_max)? {
        return Ok(Some(p_max));
    }
    let (mut lo, mut hi) = (1.0, p_max);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if ok(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}

/// The exponent of the constructed ψ: the smaller of the aInc exponents of
/// `φ∞(β₂·)` on `(0, t₁]` and of `φ` on `[t₁, ∞)`.
pub fn thm47_exponent(phi: &PhiFunction, pair: &AsymptotePair, t1: f64, a_max: f64, spec: &SampleSpec) -> Result<Option<f64>> {
    let left = PhiFunction::orlicz(pair.phi_inf.scale_argument(pair.beta)?, 1);
    let left_spec = SampleSpec { x_samples: vec![vec![0.0]], ..spec.clone() };
    let p_left = ainc_exponent(&left, TInterval::up_to(t1), a_max, 8.0, &left_spec)?;
    let p_right = ainc_exponent(phi, TInterval::from(t1), a_max, 8.0, spec)?;
    Ok(match (p_left, p_right) {
        (Some(a), Some(b)) => Some(a.min(b)),
        _ => None,
    })
}

/// Shell estimates of `limsup` and `liminf` of `φ(x, t)` as `|x| → ∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoteEstimate {
    pub plus: PhiCurve,
    pub minus: PhiCurve,
    pub converged: bool,
    /// Largest relative change between the two outermost shells.
    pub max_relative_change: f64,
    pub radii: Vec<f64>,
}

fn shell(dim: usize, r: f64) -> Vec<Vec<f64>> {
    if dim == 1 {
        vec![vec![r], vec![-r]]
    } else {
        (0..64)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / 64.0;
                vec![r * a.cos(), r * a.sin()]
            })
            .collect()
    }
}

/// Interpolating curve through monotone samples: a power law below the first
/// node, linear segments between nodes, a power law past the last node.
pub fn curve_through(ts: &[f64], vals: &[Extended]) -> Result<PhiCurve> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let mut tail = None;
    let mut running = 0.0f64;
    for (&t, v) in ts.iter().zip(vals) {
        match v {
            Extended::Infinite => {
                tail = Some(pts.last().map_or(t, |p| p.0));
                break;
            }
            Extended::Finite(v) => {
                running = running.max(*v);
                if running > 0.0 {
                    pts.push((t, running));
                }
            }
        }
    }
    if pts.len() < 2 {
        return Err(Error::Construction("need two positive finite samples to build a curve".into()));
    }
    // exponents below 1 would break the t ↦ φ(t)/t monotonicity required of Φ-curves
    let power_through = |(t0, v0): (f64, f64), (t1, v1): (f64, f64)| ((v1 / v0).ln() / (t1 / t0).ln()).max(1.0);
    let q0 = power_through(pts[0], pts[1]);
    let mut segs = vec![(Piece::monomial(pts[0].1 / pts[0].0.powf(q0), q0), pts[0].0)];
    for w in pts.windows(2) {
        let ((a, va), (b, vb)) = (w[0], w[1]);
        let slope = (vb - va) / (b - a);
        let piece = Piece { terms: vec![PowerTerm::new(va, 0.0), PowerTerm::new(slope, 1.0)], shift: a, outer: 1.0 };
        segs.push((piece, b));
    }
    let n = pts.len();
    if tail.is_none() {
        let q = power_through(pts[n - 2], pts[n - 1]);
        let (tn, vn) = pts[n - 1];
        segs.push((Piece::monomial(vn / tn.powf(q), q), f64::INFINITY));
    }
    PhiCurve::from_segments(segs, tail)
}

/// Estimate `φ∞⁺ = limsup` and `φ∞⁻ = liminf` of `φ(x, t)` as `|x| → ∞` from
/// shells `|x| = R`; convergence compares the two outermost shells at relative
/// tolerance `1e-3`. x-independent input is returned unchanged.
pub fn remark45_asymptotes(phi: &PhiFunction, t_grid: &[f64], radii: &[f64]) -> Result<AsymptoteEstimate> {
    if radii.len() < 2 || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Argument("need at least two increasing radii".into()));
    }
    if t_grid.len() < 2 || t_grid.windows(2).any(|w| !(w[1] > w[0])) || !(t_grid[0] > 0.0) {
        return Err(Error::Argument("t grid must be positive and increasing".into()));
    }
    if phi.spec.is_x_independent() {
        let c = phi.spec.curve_at(&vec![0.0; phi.dim()], phi.dim())?;
        return Ok(AsymptoteEstimate {
            plus: c.clone(),
            minus: c,
            converged: true,
            max_relative_change: 0.0,
            radii: radii.to_vec(),
        });
    }
    let mut per_radius: Vec<(Vec<Extended>, Vec<Extended>)> = Vec::new();
    for &r in radii {
        let curves: Vec<PhiCurve> = shell(phi.dim(), r).iter().map(|x| phi.curve_at(x)).collect::<Result<_>>()?;
        let hi: Vec<Extended> =
            t_grid.iter().map(|&t| curves.iter().map(|c| c.eval(t)).fold(Extended::ZERO, Extended::max)).collect();
        let lo: Vec<Extended> = t_grid
            .iter()
            .map(|&t| curves.iter().map(|c| c.eval(t)).fold(Extended::Infinite, Extended::min))
            .collect();
        per_radius.push((hi, lo));
    }
    let n = per_radius.len();
    let rel = |a: &[Extended], b: &[Extended]| -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| match (x, y) {
                (Extended::Finite(x), Extended::Finite(y)) => {
                    let m = x.abs().max(y.abs());
                    if m == 0.0 {
                        0.0
                    } else {
                        (x - y).abs() / m
                    }
                }
                (Extended::Infinite, Extended::Infinite) => 0.0,
                _ => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    };
    let change = rel(&per_radius[n - 1].0, &per_radius[n - 2].0).max(rel(&per_radius[n - 1].1, &per_radius[n - 2].1));
    let (hi, lo) = &per_radius[n - 1];
    Ok(AsymptoteEstimate {
        plus: curve_through(t_grid, hi)?,
        minus: curve_through(t_grid, lo)?,
        converged: change <= 1e-3,
        max_relative_change: change,
        radii: radii.to_vec(),
    })
}
