//! Convex conjugate `φ*(t) = sup_{s>0} (s·t − φ(s))` of a Φ-curve.

use super::curve::{Piece, PhiCurve};
use crate::extended::Extended;

const GRID_PER_PIECE: usize = 256;
const SAFETY_PER_DECADE: usize = 16;
const GOLDEN_ITERS: usize = 120;

pub(crate) fn conjugate(curve: &PhiCurve, t: f64) -> Extended {
    if t <= 0.0 {
        return Extended::ZERO;
    }
    if let Some(slope) = curve.linear_slope() {
        if t > slope * (1.0 + 1e-12) {
            return Extended::Infinite;
        }
    }
    if curve.infinite_tail().is_none() && curve.high_exponent().is_some_and(|e| e < 1.0) {
        return Extended::Infinite;
    }

    let gain = |piece: &Piece, s: f64| s * t - piece.value(s);
    let mut best = 0.0f64;
    let mut s_max = 0.0f64;

    for (i, piece) in curve.pieces().iter().enumerate() {
        let (lo, mut hi) = curve.piece_bounds(i);
        if let Some(b) = curve.infinite_tail() {
            hi = hi.min(b);
        }
        if hi <= lo {
            continue;
        }
        if !hi.is_finite() {
            hi = search_cap(piece, t, lo);
        }
        s_max = s_max.max(hi);
        if lo > 0.0 {
            best = best.max(gain(piece, lo));
        }
        best = best.max(gain(piece, hi));

        if let Some((c, q)) = monomial(piece) {
            if q > 1.0 {
                let s_star = (t / (c * q)).powf(1.0 / (q - 1.0));
                if s_star > lo && s_star <= hi {
                    best = best.max(s_star * t - c * s_star.powf(q));
                }
            }
            // q ≤ 1: s·t − c·s^q is convex, so the endpoints already cover it
            continue;
        }
        best = best.max(grid_search(&|s| gain(piece, s), lo, hi, GRID_PER_PIECE));
    }

    // global safety pass over a log-spaced grid
    if s_max > 0.0 {
        let s_min = s_max * 1e-12;
        let decades = (s_max / s_min).log10();
        let count = (decades * SAFETY_PER_DECADE as f64).ceil() as usize + 1;
        let g = |s: f64| s * t - curve.value(s);
        let mut best_idx = None;
        let mut best_grid = best;
        for k in 0..count {
            let s = s_min * 10f64.powf(k as f64 / SAFETY_PER_DECADE as f64);
            let v = g(s.min(s_max));
            if v > best_grid {
                best_grid = v;
                best_idx = Some(k);
            }
        }
        if let Some(k) = best_idx {
            let at = |j: f64| (s_min * 10f64.powf(j / SAFETY_PER_DECADE as f64)).min(s_max);
            let a = at(k as f64 - 1.0);
            let b = at(k as f64 + 1.0);
            best = best.max(best_grid).max(golden_max(&g, a, b));
        }
    }
    Extended::Finite(best.max(0.0))
}

/// `(c, q)` when the piece is `c·s^q` after folding the outer power.
fn monomial(piece: &Piece) -> Option<(f64, f64)> {
    if piece.shift != 0.0 {
        return None;
    }
    let mut active = piece.terms.iter().filter(|t| t.coef > 0.0);
    let term = active.next()?;
    if active.next().is_some() || term.exponent == 0.0 {
        return None;
    }
    Some((term.coef.powf(piece.outer), term.exponent * piece.outer))
}

/// Upper end of the search window on an unbounded piece.
fn search_cap(piece: &Piece, t: f64, lo: f64) -> f64 {
    let mut s = lo.max(1.0);
    for _ in 0..200 {
        if piece.value(s) >= 2.0 * t * s {
            return 4.0 * s;
        }
        s *= 2.0;
    }
    s
}

fn grid_search(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64, count: usize) -> f64 {
    let a = if lo > 0.0 { lo } else { hi * 1e-12 };
    let ratio = (hi / a).powf(1.0 / count as f64);
    let mut best = f64::NEG_INFINITY;
    let mut best_k = 0;
    let mut s = a;
    for k in 0..=count {
        let v = g(s.min(hi));
        if v > best {
            best = v;
            best_k = k;
        }
        s *= ratio;
    }
    let left = (a * ratio.powi(best_k as i32 - 1)).max(a);
    let right = (a * ratio.powi(best_k as i32 + 1)).min(hi);
    best.max(golden_max(g, left, right))
}

fn golden_max(g: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..GOLDEN_ITERS {
        if (b - a) <= 1e-15 * b.abs().max(1e-300) {
            break;
        }
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    gc.max(gd)
}

/// The conjugate of a curve, viewed as a monotone function of `t`.
pub struct Conjugate<'a>(pub &'a PhiCurve);

impl super::curve::MonotoneFunction for Conjugate<'_> {
    fn value_at(&self, t: f64) -> Extended {
        conjugate(self.0, t)
    }
}
