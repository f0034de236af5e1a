//! Sample lattices used by the condition checkers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::f64_or_inf;
use crate::phi_core::{PhiCurve, PhiFunction};

/// A range of `t` values: `lo = 0` means the open end `0⁺`, `hi = ∞` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TInterval {
    pub lo: f64,
    #[serde(with = "f64_or_inf")]
    pub hi: f64,
}

impl TInterval {
    /// `(0, ∞)`.
    pub fn all() -> Self {
        TInterval { lo: 0.0, hi: f64::INFINITY }
    }

    /// `[lo, ∞)`.
    pub fn from(lo: f64) -> Self {
        TInterval { lo, hi: f64::INFINITY }
    }

    /// `(0, hi]`.
    pub fn up_to(hi: f64) -> Self {
        TInterval { lo: 0.0, hi }
    }

    pub fn between(lo: f64, hi: f64) -> Self {
        TInterval { lo, hi }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo >= 0.0) || !(self.hi > self.lo) {
            return Err(Error::Argument(format!("empty t-range [{}, {}]", self.lo, self.hi)));
        }
        Ok(())
    }

    pub fn reaches_zero(&self) -> bool {
        self.lo == 0.0
    }

    pub fn is_unbounded(&self) -> bool {
        self.hi == f64::INFINITY
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo && t <= self.hi && t > 0.0
    }
}

/// How random balls are drawn for (A1) and (A1').
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallSampling {
    /// Number of balls.
    pub count: usize,
    /// Point pairs `(x, y)` per ball.
    pub pairs: usize,
    /// Levels `τ ∈ [1, 1/|B|]` per pair.
    pub levels: usize,
    pub seed: u64,
    /// Box from which centers are drawn; defaults to the domain box, or `[−8, 8]ⁿ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_box: Option<Vec<[f64; 2]>>,
}

impl Default for BallSampling {
    fn default() -> Self {
        BallSampling { count: 96, pairs: 6, levels: 12, seed: 0, center_box: None }
    }
}

/// The `(x, t)` lattice a report was computed on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub x_samples: Vec<Vec<f64>>,
    pub t_min: f64,
    pub t_max: f64,
    pub per_decade: usize,
    pub refinement_rounds: usize,
    #[serde(default)]
    pub balls: BallSampling,
}

impl SampleSpec {
    pub fn new(x_samples: Vec<Vec<f64>>) -> Self {
        SampleSpec {
            x_samples,
            t_min: 1e-4,
            t_max: 1e4,
            per_decade: 64,
            refinement_rounds: 1,
            balls: BallSampling::default(),
        }
    }

    /// Default lattice over the function's probe points.
    pub fn for_phi(phi: &PhiFunction) -> Self {
        SampleSpec::new(phi.probe_points())
    }

    pub fn with_t_range(mut self, t_min: f64, t_max: f64) -> Self {
        self.t_min = t_min;
        self.t_max = t_max;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.balls.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.x_samples.is_empty() {
            return Err(Error::Argument("sample spec has no x samples".into()));
        }
        if !(self.t_min > 0.0 && self.t_max > self.t_min) || self.per_decade == 0 {
            return Err(Error::Argument(format!(
                "invalid t lattice [{}, {}] with {} points per decade",
                self.t_min, self.t_max, self.per_decade
            )));
        }
        Ok(())
    }

    /// The effective finite window `[lo, hi]` of `range` on this lattice.
    pub fn window(&self, range: &TInterval) -> (f64, f64) {
        let mut lo = if range.lo > 0.0 { range.lo.max(self.t_min) } else { self.t_min };
        let mut hi = if range.hi.is_finite() { range.hi.min(self.t_max) } else { self.t_max };
        if range.lo > self.t_max {
            lo = range.lo;
            hi = if range.hi.is_finite() { range.hi } else { lo * 1e8 };
        } else if range.hi < self.t_min {
            hi = range.hi;
            lo = if range.lo > 0.0 { range.lo } else { hi * 1e-8 };
        }
        (lo, hi)
    }

    /// Log-spaced `t` samples over the window of `range`, endpoints included.
    pub fn t_grid(&self, range: &TInterval) -> Vec<f64> {
        let (lo, hi) = self.window(range);
        log_grid(lo, hi, self.per_decade)
    }
}

/// `per_decade` log-spaced points per decade on `[lo, hi]`, both ends included.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    let decades = (hi / lo).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(1);
    let (a, b) = (lo.ln(), hi.ln());
    let mut out: Vec<f64> = (0..=n).map(|k| (a + (b - a) * k as f64 / n as f64).exp()).collect();
    out[0] = lo;
    out[n] = hi;
    out
}

/// Points where a curve changes formula, with right-hand neighbours, kept inside `[lo, hi]`.
pub fn curve_features(curve: &PhiCurve, lo: f64, hi: f64) -> Vec<f64> {
    let mut pts = Vec::new();
    let mut push = |b: f64| {
        for v in [b, b * (1.0 + 1e-9), b * (1.0 - 1e-9)] {
            if v >= lo && v <= hi {
                pts.push(v);
            }
        }
    };
    for &b in curve.breakpoints() {
        push(b);
    }
    if let Some(b) = curve.infinite_tail() {
        push(b);
    }
    pts
}

/// Sort and deduplicate a set of positive sample points.
pub fn normalize_grid(mut ts: Vec<f64>) -> Vec<f64> {
    ts.retain(|t| t.is_finite() && *t > 0.0);
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_density() {
        let spec = SampleSpec::new(vec![vec![0.0]]);
        let g = spec.t_grid(&TInterval::all());
        assert_eq!(g[0], 1e-4);
        assert_eq!(*g.last().unwrap(), 1e4);
        assert!(g.len() >= 8 * 64);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn windows_clip_and_extend() {
        let spec = SampleSpec::new(vec![vec![0.0]]);
        assert_eq!(spec.window(&TInterval::from(1.0)), (1.0, 1e4));
        assert_eq!(spec.window(&TInterval::up_to(1.0)), (1e-4, 1.0));
        assert_eq!(spec.window(&TInterval::from(1e6)), (1e6, 1e14));
    }

    #[test]
    fn empty_interval_rejected() {
        assert!(TInterval::between(2.0, 1.0).validate().is_err());
        assert!(TInterval::between(1.0, 1.0).validate().is_err());
    }
}
