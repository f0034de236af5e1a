//! One-variable Φ-curves: ordered pieces of power sums with an optional
//! infinite tail.
//!
//! Piece `i` covers the interval `(b_{i-1}, b_i]` (with `b_{-1} = 0` and the
//! last piece unbounded), so the curve is left-continuous and the left value
//! is used at every jump.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::Extended;

/// Relative slack for monotonicity checks across breakpoints.
const SEAM_SLACK: f64 = 1e-12;
/// Iteration cap for monotone bisection.
const BISECT_ITERS: usize = 200;

/// `coef · u^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub coef: f64,
    pub exponent: f64,
}

impl PowerTerm {
    pub fn new(coef: f64, exponent: f64) -> Self {
        PowerTerm { coef, exponent }
    }

    fn is_active(&self) -> bool {
        self.coef > 0.0
    }
}

fn one() -> f64 {
    1.0
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

fn is_one(v: &f64) -> bool {
    *v == 1.0
}

/// `(Σ_k c_k (t − shift)^{q_k})^outer` on one interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub terms: Vec<PowerTerm>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub shift: f64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub outer: f64,
}

impl Piece {
    pub fn new(terms: Vec<PowerTerm>) -> Self {
        Piece { terms, shift: 0.0, outer: 1.0 }
    }

    pub fn monomial(coef: f64, exponent: f64) -> Self {
        Piece::new(vec![PowerTerm::new(coef, exponent)])
    }

    pub fn constant(value: f64) -> Self {
        Piece::monomial(value, 0.0)
    }

    pub fn value(&self, t: f64) -> f64 {
        let u = (t - self.shift).max(0.0);
        let inner: f64 = self.terms.iter().map(|term| term.coef * u.powf(term.exponent)).sum();
        if self.outer == 1.0 {
            inner
        } else {
            inner.powf(self.outer)
        }
    }

    fn active(&self) -> impl Iterator<Item = &PowerTerm> {
        self.terms.iter().filter(|t| t.is_active())
    }

    /// Terms that actually vary with `t`.
    fn varying(&self) -> impl Iterator<Item = &PowerTerm> {
        self.active().filter(|t| t.exponent > 0.0)
    }

    fn constant_part(&self) -> f64 {
        self.active().filter(|t| t.exponent == 0.0).map(|t| t.coef).sum()
    }

    pub fn is_flat(&self) -> bool {
        self.varying().next().is_none()
    }

    /// Smallest effective power of `t` near `t → shift⁺`, if any term is active.
    pub fn low_exponent(&self) -> Option<f64> {
        self.active().map(|t| t.exponent * self.outer).reduce(f64::min)
    }

    /// Largest effective power of `t` as `t → ∞`.
    pub fn high_exponent(&self) -> Option<f64> {
        self.active().map(|t| t.exponent * self.outer).reduce(f64::max)
    }

    /// Leading coefficient of the `t → ∞` asymptotics `value ~ lead · t^high`.
    fn high_coefficient(&self) -> f64 {
        let hi = match self.active().map(|t| t.exponent).reduce(f64::max) {
            Some(h) => h,
            None => return 0.0,
        };
        let c: f64 = self.active().filter(|t| t.exponent == hi).map(|t| t.coef).sum();
        c.powf(self.outer)
    }

    /// Closed form for `value(t) = level` when only one term varies.
    fn closed_form_solve(&self, level: f64) -> Option<f64> {
        let mut varying = self.varying();
        let term = *varying.next()?;
        if varying.next().is_some() {
            return None;
        }
        let inner_level = if self.outer == 1.0 { level } else { level.powf(1.0 / self.outer) };
        let rest = (inner_level - self.constant_part()) / term.coef;
        if rest <= 0.0 {
            return Some(self.shift);
        }
        Some(self.shift + rest.powf(1.0 / term.exponent))
    }

    /// Boundary of the set `{t ∈ (lo, hi] : value(t) ≥ level}` for a piece that
    /// is continuous and non-decreasing on the interval, assuming
    /// `value(lo⁺) < level ≤ value(hi)`.
    fn solve(&self, level: f64, lo: f64, hi: f64) -> f64 {
        if let Some(t) = self.closed_form_solve(level) {
            return t.clamp(lo, hi);
        }
        let (mut a, mut b) = (lo, hi);
        if !b.is_finite() {
            b = lo.max(1.0);
            while self.value(b) < level {
                b *= 2.0;
            }
        }
        for _ in 0..BISECT_ITERS {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if self.value(m) >= level {
                b = m;
            } else {
                a = m;
            }
        }
        b
    }

    fn scale_argument(&self, beta: f64) -> Piece {
        // c (βt − s)^q = c β^q (t − s/β)^q
        Piece {
            terms: self
                .terms
                .iter()
                .map(|t| PowerTerm::new(t.coef * beta.powf(t.exponent), t.exponent))
                .collect(),
            shift: self.shift / beta,
            outer: self.outer,
        }
    }

    fn scale_value(&self, k: f64) -> Piece {
        let f = k.powf(1.0 / self.outer);
        Piece {
            terms: self.terms.iter().map(|t| PowerTerm::new(t.coef * f, t.exponent)).collect(),
            shift: self.shift,
            outer: self.outer,
        }
    }

    fn validate(&self, lo: f64) -> Result<()> {
        if !(self.outer > 0.0 && self.outer.is_finite()) {
            return Err(Error::Construction(format!("outer exponent {} must be positive", self.outer)));
        }
        if !self.shift.is_finite() || self.shift > lo * (1.0 + 1e-12) + 1e-300 {
            return Err(Error::Construction(format!(
                "shift {} exceeds the left end {} of its piece",
                self.shift, lo
            )));
        }
        for t in &self.terms {
            if !(t.coef >= 0.0 && t.coef.is_finite()) {
                return Err(Error::Construction(format!("coefficient {} must be finite and ≥ 0", t.coef)));
            }
            if !(t.exponent >= 0.0 && t.exponent.is_finite()) {
                return Err(Error::Construction(format!("exponent {} must be finite and ≥ 0", t.exponent)));
            }
        }
        Ok(())
    }
}

/// A weak Φ-function of one variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiCurve {
    /// Interior breakpoints `0 < b_0 < b_1 < …`.
    #[serde(default)]
    breakpoints: Vec<f64>,
    pieces: Vec<Piece>,
    /// Values are `+∞` for `t` strictly beyond this threshold.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    infinite_tail: Option<f64>,
}

impl PhiCurve {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<Piece>, infinite_tail: Option<f64>) -> Result<Self> {
        let mut curve = PhiCurve { breakpoints, pieces, infinite_tail };
        curve.normalize_tail();
        curve.validate()?;
        Ok(curve)
    }

    /// `coef · t^exponent`.
    pub fn power(coef: f64, exponent: f64) -> Result<Self> {
        PhiCurve::new(vec![], vec![Piece::monomial(coef, exponent)], None)
    }

    /// `Σ terms` on all of `(0, ∞)`.
    pub fn sum(terms: Vec<PowerTerm>) -> Result<Self> {
        PhiCurve::new(vec![], vec![Piece::new(terms)], None)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn infinite_tail(&self) -> Option<f64> {
        self.infinite_tail
    }

    /// `(lo, hi]` covered by piece `i`, before the tail cut.
    pub fn piece_bounds(&self, i: usize) -> (f64, f64) {
        let lo = if i == 0 { 0.0 } else { self.breakpoints[i - 1] };
        let hi = self.breakpoints.get(i).copied().unwrap_or(f64::INFINITY);
        (lo, hi)
    }

    fn live_bounds(&self, i: usize) -> (f64, f64) {
        let (lo, hi) = self.piece_bounds(i);
        (lo, self.infinite_tail.map_or(hi, |b| hi.min(b)))
    }

    fn normalize_tail(&mut self) {
        let Some(tail) = self.infinite_tail else { return };
        // drop pieces that lie entirely beyond the tail
        while self.breakpoints.last().is_some_and(|&b| b >= tail) {
            self.breakpoints.pop();
            self.pieces.pop();
        }
    }

    fn validate(&self) -> Result<()> {
        if self.pieces.len() != self.breakpoints.len() + 1 {
            return Err(Error::Construction(format!(
                "{} pieces need {} breakpoints, got {}",
                self.pieces.len(),
                self.pieces.len().saturating_sub(1),
                self.breakpoints.len()
            )));
        }
        let mut prev = 0.0;
        for &b in &self.breakpoints {
            if !(b > prev && b.is_finite()) {
                return Err(Error::Construction(format!("breakpoints must increase strictly from 0, got {b}")));
            }
            prev = b;
        }
        if let Some(tail) = self.infinite_tail {
            if !(tail > 0.0 && tail.is_finite()) {
                return Err(Error::Construction(format!("infinite tail {tail} must be positive")));
            }
        }
        for (i, piece) in self.pieces.iter().enumerate() {
            piece.validate(self.piece_bounds(i).0)?;
        }
        let first = &self.pieces[0];
        if first.shift != 0.0 || first.active().any(|t| t.exponent == 0.0) {
            return Err(Error::Construction("value must tend to 0 as t → 0⁺".into()));
        }
        for i in 0..self.breakpoints.len() {
            let b = self.breakpoints[i];
            let left = self.pieces[i].value(b);
            let right = self.pieces[i + 1].value(b);
            if right < left - SEAM_SLACK * left.abs().max(1.0) {
                return Err(Error::Construction(format!(
                    "curve decreases across breakpoint {b}: {left} → {right}"
                )));
            }
        }
        if self.infinite_tail.is_none() {
            let last = self.pieces.last().expect("at least one piece");
            if last.varying().next().is_none() {
                return Err(Error::Construction("value must tend to ∞ as t → ∞".into()));
            }
            if last.high_exponent().unwrap_or(0.0) < 1.0 {
                return Err(Error::Construction("t ↦ φ(t)/t is not almost increasing at infinity".into()));
            }
        }
        if first.low_exponent().is_some_and(|e| e < 1.0) {
            return Err(Error::Construction("t ↦ φ(t)/t is not almost increasing near 0".into()));
        }
        Ok(())
    }

    fn piece_index(&self, t: f64) -> usize {
        self.breakpoints.partition_point(|&b| b < t)
    }

    /// `φ(t)`; exact up to floating point, `+∞` beyond the tail.
    pub fn eval(&self, t: f64) -> Extended {
        debug_assert!(t >= 0.0, "negative argument {t}");
        if t <= 0.0 {
            return Extended::ZERO;
        }
        if self.infinite_tail.is_some_and(|b| t > b) {
            return Extended::Infinite;
        }
        Extended::Finite(self.pieces[self.piece_index(t)].value(t))
    }

    /// Finite-valued shortcut; `f64::INFINITY` beyond the tail.
    pub fn value(&self, t: f64) -> f64 {
        self.eval(t).to_f64()
    }

    /// Generalized inverse `inf{s ≥ 0 : φ(s) ≥ τ}`.
    pub fn inverse(&self, tau: f64) -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        for (i, piece) in self.pieces.iter().enumerate() {
            let (lo, hi) = self.live_bounds(i);
            if piece.value(lo) >= tau && lo > 0.0 {
                return lo;
            }
            let top = if hi.is_finite() { piece.value(hi) } else { f64::INFINITY };
            if tau <= top {
                return piece.solve(tau, lo, hi);
            }
        }
        self.infinite_tail.expect("finite curves are unbounded")
    }

    /// `sup{s ≥ 0 : φ(s) ≤ v}`, the upper generalized inverse.
    pub fn sup_level(&self, v: f64) -> f64 {
        if v < 0.0 {
            return 0.0;
        }
        for (i, piece) in self.pieces.iter().enumerate() {
            let (lo, hi) = self.live_bounds(i);
            if lo > 0.0 && piece.value(lo) > v {
                return lo;
            }
            let top = if hi.is_finite() { piece.value(hi) } else { f64::INFINITY };
            if top <= v {
                continue;
            }
            if let Some(t) = piece.closed_form_solve(v) {
                return t.clamp(lo, hi);
            }
            // bisection on the predicate value ≤ v
            let (mut a, mut b) = (lo, hi);
            if !b.is_finite() {
                b = lo.max(1.0);
                while piece.value(b) <= v {
                    b *= 2.0;
                }
            }
            for _ in 0..BISECT_ITERS {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if piece.value(m) <= v {
                    a = m;
                } else {
                    b = m;
                }
            }
            return a;
        }
        self.infinite_tail.unwrap_or(f64::INFINITY)
    }

    /// Lowest effective exponent near 0 (`None` if the curve vanishes near 0).
    pub fn low_exponent(&self) -> Option<f64> {
        self.pieces[0].low_exponent()
    }

    /// Growth exponent at infinity; `None` when an infinite tail is present.
    pub fn high_exponent(&self) -> Option<f64> {
        if self.infinite_tail.is_some() {
            return None;
        }
        self.pieces.last().and_then(Piece::high_exponent)
    }

    /// `t ↦ φ(βt)`.
    pub fn scale_argument(&self, beta: f64) -> Result<PhiCurve> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Argument(format!("argument scale {beta} must be positive")));
        }
        PhiCurve::new(
            self.breakpoints.iter().map(|b| b / beta).collect(),
            self.pieces.iter().map(|p| p.scale_argument(beta)).collect(),
            self.infinite_tail.map(|b| b / beta),
        )
    }

    /// `t ↦ k·φ(t)`.
    pub fn scale_value(&self, k: f64) -> Result<PhiCurve> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Argument(format!("value scale {k} must be positive")));
        }
        PhiCurve::new(
            self.breakpoints.clone(),
            self.pieces.iter().map(|p| p.scale_value(k)).collect(),
            self.infinite_tail,
        )
    }

    /// `t ↦ φ(t)^p`.
    pub fn outer_power(&self, p: f64) -> Result<PhiCurve> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::Argument(format!("power {p} must be positive")));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|piece| Piece { outer: piece.outer * p, ..piece.clone() })
            .collect();
        PhiCurve::new(self.breakpoints.clone(), pieces, self.infinite_tail)
    }

    /// Same curve with value `+∞` beyond `beta0`.
    pub fn with_tail(&self, beta0: f64) -> Result<PhiCurve> {
        let tail = self.infinite_tail.map_or(beta0, |b| b.min(beta0));
        PhiCurve::new(self.breakpoints.clone(), self.pieces.clone(), Some(tail))
    }

    /// Segments `(piece, upper bound)` of this curve restricted to `(lo, hi]`.
    pub fn segments_within(&self, lo: f64, hi: f64) -> Vec<(Piece, f64)> {
        let mut out = Vec::new();
        for (i, piece) in self.pieces.iter().enumerate() {
            let (a, b) = self.piece_bounds(i);
            if b <= lo {
                continue;
            }
            if a >= hi {
                break;
            }
            out.push((piece.clone(), b.min(hi)));
        }
        out
    }

    /// Build from consecutive `(piece, upper bound)` segments; the last bound
    /// must be `+∞` unless a tail is given.
    pub fn from_segments(mut segments: Vec<(Piece, f64)>, tail: Option<f64>) -> Result<PhiCurve> {
        // merge zero-length segments
        segments.dedup_by(|b, a| b.1 <= a.1);
        let n = segments.len();
        if n == 0 {
            return Err(Error::Construction("no pieces".into()));
        }
        let breakpoints = segments[..n - 1].iter().map(|s| s.1).collect();
        let pieces = segments.into_iter().map(|s| s.0).collect();
        PhiCurve::new(breakpoints, pieces, tail)
    }

    /// `left` on `(0, at]`, `right` on `(at, ∞)`.
    pub fn splice(left: &PhiCurve, at: f64, right: &PhiCurve) -> Result<PhiCurve> {
        if !(at > 0.0 && at.is_finite()) {
            return Err(Error::Argument(format!("splice point {at} must be positive")));
        }
        if let Some(b) = left.infinite_tail.filter(|&b| b <= at) {
            let segs = left.segments_within(0.0, b);
            return PhiCurve::from_segments(segs, Some(b));
        }
        let mut segs = left.segments_within(0.0, at);
        segs.extend(right.segments_within(at, f64::INFINITY));
        // a right tail at or before the seam cuts everything past it
        let tail = right.infinite_tail.map(|b| b.max(at));
        PhiCurve::from_segments(segs, tail)
    }

    /// `t ↦ max{c, φ(t)}` for `t > at`, and `φ` itself on `(0, at]`.
    pub fn floor_beyond(&self, at: f64, c: f64) -> Result<PhiCurve> {
        let cross = self.sup_level(c);
        let mut segs = self.segments_within(0.0, at);
        if cross > at {
            segs.push((Piece::constant(c), cross));
            segs.extend(self.segments_within(cross, f64::INFINITY));
        } else {
            segs.extend(self.segments_within(at, f64::INFINITY));
        }
        PhiCurve::from_segments(segs, self.infinite_tail)
    }

    /// True when the curve is a single monomial `c·t^q` (after folding the
    /// outer power), returned as `(c, q)`.
    pub fn as_monomial(&self) -> Option<(f64, f64)> {
        if self.pieces.len() != 1 || self.infinite_tail.is_some() {
            return None;
        }
        let piece = &self.pieces[0];
        let mut active = piece.active();
        let term = *active.next()?;
        if active.next().is_some() || piece.shift != 0.0 {
            return None;
        }
        Some((term.coef.powf(piece.outer), term.exponent * piece.outer))
    }

    /// Closed-form conjugate when the curve is a monomial with exponent > 1.
    pub fn conjugate_curve(&self) -> Option<PhiCurve> {
        let (c, q) = self.as_monomial()?;
        if q <= 1.0 {
            return None;
        }
        let coef = (q - 1.0) / q * (c * q).powf(-1.0 / (q - 1.0));
        PhiCurve::power(coef, q / (q - 1.0)).ok()
    }

    /// Convex conjugate `sup_{s>0} (s·t − φ(s))`.
    pub fn conjugate(&self, t: f64) -> Extended {
        super::conjugate::conjugate(self, t)
    }

    /// Asymptotic slope `lim φ(t)/t` when the curve grows exactly linearly.
    pub(crate) fn linear_slope(&self) -> Option<f64> {
        if self.infinite_tail.is_some() {
            return None;
        }
        let last = self.pieces.last()?;
        match last.high_exponent() {
            Some(e) if (e - 1.0).abs() < 1e-15 => Some(last.high_coefficient()),
            _ => None,
        }
    }

    /// Dense log-spaced sample points plus every breakpoint and its right
    /// neighbour; used by checkers and tests.
    pub fn critical_points(&self) -> Vec<f64> {
        let mut pts = Vec::new();
        for &b in &self.breakpoints {
            pts.push(b);
            pts.push(b * (1.0 + 1e-9));
        }
        if let Some(b) = self.infinite_tail {
            pts.push(b);
        }
        pts
    }
}

/// A non-decreasing function on `[0, ∞)` with values in `[0, ∞]`.
pub trait MonotoneFunction {
    fn value_at(&self, t: f64) -> Extended;

    /// Numeric generalized inverse `inf{s ≥ 0 : f(s) ≥ τ}` by bisection.
    fn numeric_inverse(&self, tau: f64) -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        let reaches = |s: f64| self.value_at(s) >= Extended::Finite(tau);
        let mut hi = 1.0;
        let mut guard = 0;
        while !reaches(hi) {
            hi *= 2.0;
            guard += 1;
            if guard > 2000 {
                return f64::INFINITY;
            }
        }
        let mut lo = hi / 2.0;
        guard = 0;
        while reaches(lo) {
            lo /= 2.0;
            guard += 1;
            if guard > 2000 {
                return 0.0;
            }
        }
        for _ in 0..BISECT_ITERS {
            let m = 0.5 * (lo + hi);
            if m <= lo || m >= hi {
                break;
            }
            if reaches(m) {
                hi = m;
            } else {
                lo = m;
            }
        }
        hi
    }
}

impl MonotoneFunction for PhiCurve {
    fn value_at(&self, t: f64) -> Extended {
        self.eval(t)
    }

    fn numeric_inverse(&self, tau: f64) -> f64 {
        self.inverse(tau)
    }
}
