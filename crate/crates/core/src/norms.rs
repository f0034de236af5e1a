//! Modulars, Luxemburg norms and the ball-norm and duality estimates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::geometry::{norm, unit_ball_volume, Region};
use crate::grid::{pairwise_sum, GridFunction, GridShape};
use crate::phi_core::{PhiCurve, PhiFunction};

/// Largest scale tried before a function is declared outside the space.
pub const LAMBDA_CEILING: f64 = 1e12;
const NORM_REL_TOL: f64 = 1e-10;

/// `φ(x, ·)` frozen at every cell center of a grid.
pub struct GridPhi {
    shape: GridShape,
    curves: Vec<PhiCurve>,
    conjugate: bool,
}

impl GridPhi {
    pub fn new(phi: &PhiFunction, shape: &GridShape) -> Result<Self> {
        if phi.dim() != shape.dim() {
            return Err(Error::Argument(format!("{}D function on a {}D grid", phi.dim(), shape.dim())));
        }
        let curves = (0..shape.len())
            .into_par_iter()
            .map(|i| phi.curve_at(&shape.center(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GridPhi { shape: shape.clone(), curves, conjugate: false })
    }

    /// The conjugate `φ*(x, ·)` at every cell.
    pub fn conjugate_of(phi: &PhiFunction, shape: &GridShape) -> Result<Self> {
        Ok(GridPhi { conjugate: true, ..GridPhi::new(phi, shape)? })
    }

    fn eval(&self, cell: usize, t: f64) -> Extended {
        if t == 0.0 {
            return Extended::ZERO;
        }
        let c = &self.curves[cell];
        if self.conjugate {
            c.conjugate(t)
        } else {
            c.eval(t)
        }
    }

    fn check(&self, f: &GridFunction) -> Result<()> {
        if f.shape != self.shape {
            return Err(Error::Argument("grid function and Φ-grid have different shapes".into()));
        }
        Ok(())
    }

    /// `∫ φ(x, f(x)/λ) dx` by the midpoint rule.
    pub fn modular_scaled(&self, f: &GridFunction, lambda: f64) -> Result<Extended> {
        self.check(f)?;
        let terms: Vec<Extended> =
            f.values.par_iter().enumerate().map(|(i, &v)| self.eval(i, v / lambda)).collect();
        if terms.iter().any(|t| t.is_infinite()) {
            return Ok(Extended::Infinite);
        }
        let finite: Vec<f64> = terms.iter().map(|t| t.to_f64()).collect();
        Ok(Extended::Finite(pairwise_sum(&finite) * f.cell_volume()))
    }

    pub fn modular(&self, f: &GridFunction) -> Result<Extended> {
        self.modular_scaled(f, 1.0)
    }

    /// `inf{λ > 0 : ∫ φ(x, f/λ) ≤ 1}`, approximated from above; `+∞` signals that
    /// the modular stays above 1 for every `λ ≤ 1e12` (f is not in the space).
    pub fn luxemburg(&self, f: &GridFunction) -> Result<Extended> {
        self.check(f)?;
        if f.is_zero() {
            return Ok(Extended::ZERO);
        }
        let fits = |lambda: f64| -> Result<bool> { Ok(self.modular_scaled(f, lambda)? <= Extended::Finite(1.0)) };
        let mut hi = f.max_value().clamp(f64::MIN_POSITIVE, LAMBDA_CEILING);
        let mut lo;
        if fits(hi)? {
            lo = hi;
            loop {
                lo *= 0.5;
                if !fits(lo)? {
                    break;
                }
                hi = lo;
                if lo < 1e-300 {
                    return Ok(Extended::Finite(lo));
                }
            }
        } else {
            loop {
                lo = hi;
                hi *= 2.0;
                if hi > LAMBDA_CEILING {
                    return Ok(Extended::Infinite);
                }
                if fits(hi)? {
                    break;
                }
            }
        }
        while hi / lo - 1.0 > NORM_REL_TOL {
            let mid = (lo * hi).sqrt();
            if fits(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(Extended::Finite(hi))
    }
}

/// `∫ φ(x, f(x)) dx`; `+∞` if any cell is infinite.
pub fn modular(phi: &PhiFunction, f: &GridFunction) -> Result<Extended> {
    GridPhi::new(phi, &f.shape)?.modular(f)
}

/// Luxemburg norm of `f`; `+∞` is the "not in the space" signal.
pub fn luxemburg_norm(phi: &PhiFunction, f: &GridFunction) -> Result<Extended> {
    GridPhi::new(phi, &f.shape)?.luxemburg(f)
}

/// Luxemburg norm of `g` with respect to the conjugate `φ*`.
pub fn luxemburg_norm_conjugate(phi: &PhiFunction, g: &GridFunction) -> Result<Extended> {
    GridPhi::conjugate_of(phi, &g.shape)?.luxemburg(g)
}

/// `‖χ_B‖` against the estimate `1/φ⁻¹(y, 1/|B|)` at sampled `y ∈ B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallNormReport {
    pub center: Vec<f64>,
    pub radius: f64,
    pub measure: f64,
    pub norm: Extended,
    /// `(y, 1/φ⁻¹(y, 1/|B|))` per sample.
    pub estimates: Vec<(Vec<f64>, f64)>,
    pub ratio_min: f64,
    pub ratio_max: f64,
}

/// Compare `‖χ_B‖_φ` on the grid with `1/φ⁻¹(y, 1/|B|)` for `y` in `y_samples ∩ B`.
pub fn ball_norm_check(
    phi: &PhiFunction,
    center: &[f64],
    radius: f64,
    shape: &GridShape,
    y_samples: &[Vec<f64>],
) -> Result<BallNormReport> {
    let dim = phi.dim();
    let measure = unit_ball_volume(dim) * radius.powi(dim as i32);
    if !(radius > 0.0) || measure > 1.0 + 1e-12 {
        return Err(Error::Argument(format!("ball of measure {measure} must be nonempty with |B| ≤ 1")));
    }
    let ball = Region::Ball { center: center.to_vec(), radius };
    let chi = GridFunction::indicator(shape.clone(), &ball)?;
    let nrm = luxemburg_norm(phi, &chi)?;
    let inside = |y: &Vec<f64>| {
        let d: Vec<f64> = y.iter().zip(center).map(|(a, b)| a - b).collect();
        norm(&d) < radius
    };
    let estimates: Vec<(Vec<f64>, f64)> = y_samples
        .iter()
        .filter(|y| inside(y))
        .map(|y| Ok((y.clone(), 1.0 / phi.inverse(y, 1.0 / measure)?)))
        .collect::<Result<_>>()?;
    if estimates.is_empty() {
        return Err(Error::Argument("no sample point lies in the ball".into()));
    }
    let ratios = estimates.iter().map(|(_, e)| nrm.to_f64() / e);
    let ratio_min = ratios.clone().fold(f64::INFINITY, f64::min);
    let ratio_max = ratios.fold(0.0, f64::max);
    Ok(BallNormReport { center: center.to_vec(), radius, measure, norm: nrm, estimates, ratio_min, ratio_max })
}

/// `∫ f g` against `‖f‖_φ ‖g‖_{φ*}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub integral: f64,
    pub norm_f: Extended,
    pub norm_g_conjugate: Extended,
    /// `∫ f g / ‖f‖_φ`: the empirical constant `C` in `∫ f g ≤ C ‖f‖_φ`.
    pub constant: f64,
    /// Young's inequality bound: `∫ f g ≤ 2 ‖f‖_φ ‖g‖_{φ*}`.
    pub young_bound: f64,
    pub holds: bool,
}

/// Lower-bound side of the norm-conjugate formula: for `‖g‖_{φ*} ≤ 1`,
/// `∫ f g ≤ C ‖f‖_φ` with `C` recorded and compared against the Young bound 2.
pub fn duality_lower_bound(phi: &PhiFunction, f: &GridFunction, g: &GridFunction) -> Result<DualityReport> {
    if f.shape != g.shape {
        return Err(Error::Argument("f and g live on different grids".into()));
    }
    let norm_g = luxemburg_norm_conjugate(phi, g)?;
    if norm_g > Extended::Finite(1.0 + 1e-6) {
        return Err(Error::Precondition(format!("‖g‖_φ* = {norm_g} exceeds 1; rescale g")));
    }
    let prod: Vec<f64> = f.values.iter().zip(&g.values).map(|(a, b)| a * b).collect();
    let integral = pairwise_sum(&prod) * f.cell_volume();
    let norm_f = luxemburg_norm(phi, f)?;
    let constant = match norm_f {
        Extended::Finite(n) if n > 0.0 => integral / n,
        Extended::Finite(_) => 0.0,
        Extended::Infinite => 0.0,
    };
    let young_bound = 2.0 * norm_f.to_f64() * norm_g.to_f64();
    let holds = integral <= young_bound * (1.0 + 1e-6) || integral == 0.0;
    Ok(DualityReport { integral, norm_f, norm_g_conjugate: norm_g, constant, young_bound, holds })
}
