//! Discretized non-centered Hardy–Littlewood maximal operator.
//!
//! Balls are centered at cell centers on a strided sub-grid and contain exactly
//! the cells whose centers lie strictly inside them. Averages divide by the
//! number of such cells inside the grid box.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::grid::{GridFunction, GridShape};
use crate::norms::GridPhi;
use crate::phi_core::PhiFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryRule {
    /// Average over `B ∩ Ω`, dividing by its measure.
    #[default]
    IntersectDomain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalConfig {
    pub radii: Vec<f64>,
    pub center_stride: usize,
    #[serde(default)]
    pub boundary_rule: BoundaryRule,
    /// Coarsen the 2D center lattice for large radii: stride `center_stride·2^k`
    /// with `2^k ≤ r / (4·center_stride·h)`.
    #[serde(default)]
    pub adaptive_stride: bool,
}

impl MaximalConfig {
    /// Defaults for a grid: in 1D every odd window `(m + ½)h` with stride 1; in 2D
    /// a `2^{1/4}` ladder from one cell to the diameter with stride 2, coarsened
    /// for large radii.
    pub fn default_for(shape: &GridShape) -> Self {
        let h = shape.spacing().iter().copied().fold(f64::INFINITY, f64::min);
        if shape.dim() == 1 {
            let n = shape.resolution[0];
            MaximalConfig {
                radii: (0..=n).map(|m| (m as f64 + 0.5) * h).collect(),
                center_stride: 1,
                boundary_rule: BoundaryRule::IntersectDomain,
                adaptive_stride: false,
            }
        } else {
            MaximalConfig {
                radii: geometric_radii(h, diameter(shape), 2f64.powf(0.25)),
                center_stride: 2,
                boundary_rule: BoundaryRule::IntersectDomain,
                adaptive_stride: true,
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.radii.is_empty() {
            return Err(Error::Argument("radius set is empty".into()));
        }
        if self.radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::Argument("radii must be positive and finite".into()));
        }
        if self.center_stride == 0 {
            return Err(Error::Argument("center stride must be ≥ 1".into()));
        }
        Ok(())
    }

    fn stride_for(&self, r: f64, h: f64, dim: usize) -> usize {
        let s = self.center_stride;
        if !self.adaptive_stride || dim < 2 {
            return s;
        }
        let room = r / (4.0 * h * s as f64);
        if room < 2.0 {
            return s;
        }
        s << (room.log2().floor() as u32)
    }
}

fn diameter(shape: &GridShape) -> f64 {
    shape.bounds.iter().map(|[lo, hi]| (hi - lo).powi(2)).sum::<f64>().sqrt()
}

/// `r₀, r₀q, r₀q², …` up to and including the first value `≥ r_max`.
pub fn geometric_radii(r0: f64, r_max: f64, q: f64) -> Vec<f64> {
    let mut out = vec![r0];
    let mut r = r0;
    while r < r_max {
        r *= q;
        out.push(r);
    }
    out
}

/// Grid as `rows × cols` (1D grids are a single row).
struct Layout {
    rows: usize,
    cols: usize,
    hy: f64,
    hx: f64,
}

impl Layout {
    fn of(shape: &GridShape) -> Self {
        let h = shape.spacing();
        if shape.dim() == 1 {
            Layout { rows: 1, cols: shape.resolution[0], hy: h[0], hx: h[0] }
        } else {
            Layout { rows: shape.resolution[0], cols: shape.resolution[1], hy: h[0], hx: h[1] }
        }
    }

    /// Half-widths (in cells) of the ball of radius `r` on rows `dy = 0, 1, …`.
    fn half_widths(&self, r: f64) -> Vec<i64> {
        let mut out = Vec::new();
        let mut dy = 0usize;
        loop {
            let rem = r * r - (dy as f64 * self.hy).powi(2);
            if rem <= 0.0 || (dy > 0 && dy >= self.rows) {
                break;
            }
            let v = rem.sqrt() / self.hx;
            out.push(v.ceil() as i64 - 1);
            dy += 1;
            if self.rows == 1 {
                break;
            }
        }
        out
    }
}

/// Averages over all balls of one radius centered on the stride lattice;
/// returns `(lattice rows, lattice cols, values)`.
fn ball_averages(prefix: &[Vec<f64>], lay: &Layout, widths: &[i64], stride: usize) -> (usize, usize, Vec<f64>) {
    let crow = lay.rows.div_ceil(stride);
    let ccol = lay.cols.div_ceil(stride);
    let k = widths.len() as i64 - 1;
    let mut out = vec![0.0; crow * ccol];
    out.par_chunks_mut(ccol).enumerate().for_each(|(a, row_out)| {
        let ci = (a * stride) as i64;
        for (b, slot) in row_out.iter_mut().enumerate() {
            let cj = (b * stride) as i64;
            let (mut sum, mut count) = (0.0, 0i64);
            for dy in -k..=k {
                let row = ci + dy;
                if row < 0 || row >= lay.rows as i64 {
                    continue;
                }
                let w = widths[dy.unsigned_abs() as usize];
                if w < 0 {
                    continue;
                }
                let lo = (cj - w).max(0);
                let hi = (cj + w).min(lay.cols as i64 - 1);
                let p = &prefix[row as usize];
                sum += p[hi as usize + 1] - p[lo as usize];
                count += hi - lo + 1;
            }
            *slot = if count > 0 { sum / count as f64 } else { 0.0 };
        }
    });
    (crow, ccol, out)
}

/// `out[x] = max(out[x], max{avg[c] : c on the lattice, x ∈ B(c, r)})`.
fn dilate(out: &mut [f64], lay: &Layout, widths: &[i64], stride: usize, avgs: (usize, usize, &[f64])) {
    let (crow, ccol, avg) = avgs;
    let k = widths.len() as i64 - 1;
    let s = stride as i64;
    out.par_chunks_mut(lay.cols).enumerate().for_each(|(xi, row_out)| {
        let xi = xi as i64;
        let mut deque: VecDeque<usize> = VecDeque::new();
        for dy in -k..=k {
            let ci = xi - dy;
            if ci < 0 || ci % s != 0 || (ci / s) as usize >= crow {
                continue;
            }
            let w = widths[dy.unsigned_abs() as usize];
            if w < 0 {
                continue;
            }
            let crow_vals = &avg[(ci / s) as usize * ccol..][..ccol];
            // sliding window over lattice columns b with |b·s − xj| ≤ w
            deque.clear();
            let mut next = 0usize;
            for xj in 0..lay.cols as i64 {
                let hi_b = (xj + w).div_euclid(s).min(ccol as i64 - 1);
                while (next as i64) <= hi_b {
                    while deque.back().is_some_and(|&b| crow_vals[b] <= crow_vals[next]) {
                        deque.pop_back();
                    }
                    deque.push_back(next);
                    next += 1;
                }
                let lo_b = (xj - w + s - 1).div_euclid(s).max(0);
                while deque.front().is_some_and(|&b| (b as i64) < lo_b) {
                    deque.pop_front();
                }
                if let Some(&b) = deque.front() {
                    let v = crow_vals[b];
                    let slot = &mut row_out[xj as usize];
                    if v > *slot {
                        *slot = v;
                    }
                }
            }
        }
    });
}

/// `Mf` on the grid of `f` (values are taken in absolute value on ingest).
///
/// The output starts from `f` itself: the ball of radius `h/2` around a cell
/// center contains only that cell.
pub fn maximal(f: &GridFunction, cfg: &MaximalConfig) -> Result<GridFunction> {
    cfg.validate()?;
    let lay = Layout::of(&f.shape);
    let h = lay.hx.min(lay.hy);
    let vals: Vec<f64> = f.values.iter().map(|v| v.abs()).collect();
    let prefix: Vec<Vec<f64>> = vals
        .chunks(lay.cols)
        .map(|row| {
            let mut p = Vec::with_capacity(row.len() + 1);
            p.push(0.0);
            let mut acc = 0.0;
            for v in row {
                acc += v;
                p.push(acc);
            }
            p
        })
        .collect();
    let mut out = vals.clone();
    for &r in &cfg.radii {
        let widths = lay.half_widths(r);
        if widths.is_empty() {
            continue;
        }
        let stride = cfg.stride_for(r, h, f.dim());
        let (crow, ccol, avg) = ball_averages(&prefix, &lay, &widths, stride);
        dilate(&mut out, &lay, &widths, stride, (crow, ccol, &avg));
    }
    GridFunction::new(f.shape.clone(), out)
}

/// `‖Mf‖/‖f‖` for one test function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormRatio {
    /// Free label: truncation radius, width, or index in a family.
    pub parameter: f64,
    pub norm_f: Extended,
    pub norm_mf: Extended,
    pub modular_mf: Extended,
    /// `None` when `f = 0` (the ratio is undefined).
    pub ratio: Option<Extended>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorNormReport {
    pub ratios: Vec<NormRatio>,
    pub max_ratio: Extended,
    /// Index of the maximizing test function.
    pub argmax: Option<usize>,
    /// Ratios strictly increase over at least four parameter values, each at
    /// least double the previous one.
    pub unbounded_evidence: bool,
}

/// Evaluate `‖Mf‖_φ / ‖f‖_φ` on each `(parameter, f)` case; each case may use
/// its own grid, and `cfg_for` picks the maximal configuration per grid.
pub fn norm_ratio_series(
    phi: &PhiFunction,
    cases: &[(f64, GridFunction)],
    cfg_for: impl Fn(&GridShape) -> MaximalConfig,
) -> Result<OperatorNormReport> {
    let mut ratios = Vec::with_capacity(cases.len());
    for (param, f) in cases {
        let gp = GridPhi::new(phi, &f.shape)?;
        if f.is_zero() {
            ratios.push(NormRatio {
                parameter: *param,
                norm_f: Extended::ZERO,
                norm_mf: Extended::ZERO,
                modular_mf: Extended::ZERO,
                ratio: None,
            });
            continue;
        }
        let mf = maximal(f, &cfg_for(&f.shape))?;
        let norm_f = gp.luxemburg(f)?;
        let norm_mf = gp.luxemburg(&mf)?;
        let ratio = match (norm_mf, norm_f) {
            (Extended::Infinite, _) => Extended::Infinite,
            (Extended::Finite(a), Extended::Finite(b)) if b > 0.0 => Extended::Finite(a / b),
            _ => Extended::Infinite,
        };
        ratios.push(NormRatio { parameter: *param, norm_f, norm_mf, modular_mf: gp.modular(&mf)?, ratio: Some(ratio) });
    }
    let mut max_ratio = Extended::ZERO;
    let mut argmax = None;
    for (i, r) in ratios.iter().enumerate() {
        if let Some(q) = r.ratio {
            if argmax.is_none() || q > max_ratio {
                max_ratio = q;
                argmax = Some(i);
            }
        }
    }
    let defined: Vec<&NormRatio> = ratios.iter().filter(|r| r.ratio.is_some()).collect();
    let unbounded_evidence = defined.len() >= 4
        && defined.windows(2).all(|w| w[1].parameter >= 2.0 * w[0].parameter * (1.0 - 1e-12) && w[1].ratio > w[0].ratio);
    Ok(OperatorNormReport { ratios, max_ratio, argmax, unbounded_evidence })
}

/// `max ‖Mf‖/‖f‖` over a family on a common configuration.
pub fn operator_norm_estimate(phi: &PhiFunction, family: &[GridFunction], cfg: &MaximalConfig) -> Result<OperatorNormReport> {
    let cases: Vec<(f64, GridFunction)> = family.iter().enumerate().map(|(i, f)| (i as f64, f.clone())).collect();
    let mut rep = norm_ratio_series(phi, &cases, |_| cfg.clone())?;
    rep.unbounded_evidence = false;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Region;

    fn brute(f: &GridFunction, cfg: &MaximalConfig) -> Vec<f64> {
        let c = f.shape.centers();
        let h = f.shape.spacing().iter().copied().fold(f64::INFINITY, f64::min);
        let lay = Layout::of(&f.shape);
        let mut out = f.values.clone();
        for &r in &cfg.radii {
            let s = cfg.stride_for(r, h, f.dim());
            for (ci, center) in c.iter().enumerate() {
                let (row, col) = (ci / lay.cols, ci % lay.cols);
                if row % s != 0 || col % s != 0 {
                    continue;
                }
                let inside: Vec<usize> = (0..c.len())
                    .filter(|&j| c[j].iter().zip(center).map(|(a, b)| (a - b).powi(2)).sum::<f64>() < r * r)
                    .collect();
                let avg = inside.iter().map(|&j| f.values[j]).sum::<f64>() / inside.len() as f64;
                for &j in &inside {
                    out[j] = out[j].max(avg);
                }
            }
        }
        out
    }

    #[test]
    fn matches_brute_force_2d() {
        let shape = GridShape::cube(2, 3.0, 12).unwrap();
        let f = GridFunction::from_fn(shape.clone(), |x| (x[0] * 1.3 + x[1]).sin().abs()).unwrap();
        for stride in [1, 2, 3] {
            let cfg = MaximalConfig { center_stride: stride, ..MaximalConfig::default_for(&shape) };
            let m = maximal(&f, &cfg).unwrap();
            let b = brute(&f, &cfg);
            for (a, b) in m.values.iter().zip(&b) {
                assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn matches_brute_force_1d() {
        let shape = GridShape::cube(1, 2.0, 40).unwrap();
        let f = GridFunction::from_fn(shape.clone(), |x| (3.0 * x[0]).cos().abs()).unwrap();
        let cfg = MaximalConfig::default_for(&shape);
        let m = maximal(&f, &cfg).unwrap();
        for (a, b) in m.values.iter().zip(&brute(&f, &cfg)) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn interval_indicator_closed_form() {
        // Mχ_(−1,1)(3) = 1/2
        let shape = GridShape::new(vec![[-8.0, 8.0]], vec![1024]).unwrap();
        let f = GridFunction::indicator(shape.clone(), &Region::Ball { center: vec![0.0], radius: 1.0 }).unwrap();
        let m = maximal(&f, &MaximalConfig::default_for(&shape)).unwrap();
        let i = shape.centers().iter().position(|c| (c[0] - 3.0).abs() < 0.01).unwrap();
        assert!((m.values[i] - 0.5).abs() < 0.01, "{}", m.values[i]);
    }

    #[test]
    fn constant_is_fixed() {
        let shape = GridShape::cube(2, 1.0, 16).unwrap();
        let f = GridFunction::constant(shape.clone(), 3.0).unwrap();
        let m = maximal(&f, &MaximalConfig::default_for(&shape)).unwrap();
        assert!(m.values.iter().all(|v| (v - 3.0).abs() < 1e-12));
    }

    #[test]
    fn empty_radius_set_is_an_error() {
        let shape = GridShape::cube(1, 1.0, 4).unwrap();
        let f = GridFunction::constant(shape, 1.0).unwrap();
        let cfg = MaximalConfig { radii: vec![], center_stride: 1, boundary_rule: BoundaryRule::IntersectDomain, adaptive_stride: false };
        assert!(matches!(maximal(&f, &cfg), Err(Error::Argument(_))));
    }
}
