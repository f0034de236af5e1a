//! Constant algebra of the doubling and range-enlargement lemmas.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The doubling factor `c = (2a)^{1/(p−1)}` with `2c·φ(t) ≤ φ(ct)` under aInc_p with constant `a`.
pub fn lemma24_forward(a: f64, p: f64) -> Result<f64> {
    if !(a >= 1.0) || !(p > 1.0) {
        return Err(Error::Argument(format!("need a ≥ 1 and p > 1, got a = {a}, p = {p}")));
    }
    Ok((2.0 * a).powf(1.0 / (p - 1.0)))
}

/// The exponent `p = ln 2 / ln c + 1` recovered from a doubling factor `c > 1`.
pub fn lemma24_backward(c: f64) -> Result<f64> {
    if !(c > 1.0) {
        return Err(Error::Argument(format!("need c > 1, got {c}")));
    }
    Ok(std::f64::consts::LN_2 / c.ln() + 1.0)
}

/// Which way the range of an aInc_p estimate is enlarged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Enlarge {
    /// From `[t₂, ∞)` down to `[t₁, ∞)`.
    Lower,
    /// From `(0, t₁]` up to `(0, t₂]`.
    Upper,
}

/// The constant `a²(t₂/t₁)^{p−1}` valid on the enlarged range. Both directions share it.
pub fn lemma25_enlarge(a: f64, p: f64, t1: f64, t2: f64, direction: Enlarge) -> Result<f64> {
    if !(t1 > 0.0 && t1 <= t2) {
        return Err(Error::Argument(format!("need 0 < t₁ ≤ t₂, got t₁ = {t1}, t₂ = {t2}")));
    }
    if !(a >= 1.0) || !(p >= 1.0) {
        return Err(Error::Argument(format!("need a ≥ 1 and p ≥ 1, got a = {a}, p = {p}")));
    }
    match direction {
        Enlarge::Lower | Enlarge::Upper => Ok(a * a * (t2 / t1).powf(p - 1.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_values() {
        assert_eq!(lemma24_forward(1.0, 2.0).unwrap(), 2.0);
        assert_eq!(lemma24_forward(2.0, 2.0).unwrap(), 4.0);
        assert!((lemma24_forward(1.0, 3.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(lemma24_forward(0.5, 2.0).is_err());
    }

    #[test]
    fn backward_values() {
        assert!((lemma24_backward(2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((lemma24_backward(4.0).unwrap() - 1.5).abs() < 1e-15);
        assert!((lemma24_backward(2f64.sqrt()).unwrap() - 3.0).abs() < 1e-12);
        assert!(lemma24_backward(1.0).is_err());
    }

    #[test]
    fn enlarge_values() {
        assert_eq!(lemma25_enlarge(1.0, 2.0, 1.0, 2.0, Enlarge::Lower).unwrap(), 2.0);
        assert_eq!(lemma25_enlarge(3.0, 2.5, 1.0, 1.0, Enlarge::Upper).unwrap(), 9.0);
        assert_eq!(lemma25_enlarge(2.0, 3.0, 1.0, 4.0, Enlarge::Lower).unwrap(), 64.0);
    }
}
