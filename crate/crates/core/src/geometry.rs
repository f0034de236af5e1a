//! Spatial ingredients: domains, semialgebraic regions, parameter fields and
//! weight functions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Euclidean norm of a point.
pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Volume of the unit ball in `ℝⁿ` (ω₁ = 2, ω₂ = π).
pub fn unit_ball_volume(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => {
            // ω_n = π^{n/2} / Γ(n/2 + 1), via the recursion ω_n = 2π/n · ω_{n−2}
            2.0 * PI / dim as f64 * unit_ball_volume(dim - 2)
        }
    }
}

/// Spatial domain: an open axis-aligned box or all of `ℝⁿ`, with `n ∈ {1, 2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub dim: usize,
    #[serde(rename = "box", default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<[f64; 2]>>,
}

impl Domain {
    pub fn whole(dim: usize) -> Self {
        Domain { dim, bounds: None }
    }

    pub fn open_box(bounds: Vec<[f64; 2]>) -> Self {
        Domain { dim: bounds.len(), bounds: Some(bounds) }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Self::open_box(vec![[lo, hi]])
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.dim) {
            return Err(Error::Construction(format!("dimension {} not in {{1, 2}}", self.dim)));
        }
        if let Some(b) = &self.bounds {
            if b.len() != self.dim {
                return Err(Error::Construction("box rank differs from dimension".into()));
            }
            if b.iter().any(|[lo, hi]| !(lo < hi)) {
                return Err(Error::Construction("degenerate box".into()));
            }
        }
        Ok(())
    }

    pub fn is_bounded(&self) -> bool {
        self.bounds.is_some()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match &self.bounds {
            None => true,
            Some(b) => x.iter().zip(b).all(|(v, [lo, hi])| lo < v && v < hi),
        }
    }

    /// Distance from `x` to the complement of the domain (∞ for `ℝⁿ`).
    pub fn distance_to_boundary(&self, x: &[f64]) -> f64 {
        match &self.bounds {
            None => f64::INFINITY,
            Some(b) => x
                .iter()
                .zip(b)
                .map(|(v, [lo, hi])| (v - lo).min(hi - v))
                .fold(f64::INFINITY, f64::min)
                .max(0.0),
        }
    }

    pub fn volume(&self) -> Option<f64> {
        self.bounds.as_ref().map(|b| b.iter().map(|[lo, hi]| hi - lo).product())
    }
}

/// Semialgebraic subsets of `ℝⁿ` used by characteristic functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Region {
    Empty,
    Whole,
    Ball { center: Vec<f64>, radius: f64 },
    Rect { lower: Vec<f64>, upper: Vec<f64> },
    /// `{(x, y) : x ≥ start, |y| ≤ x^(−decay)}`, a thin unbounded cusp.
    Cusp { start: f64, decay: f64 },
    Union { parts: Vec<Region> },
    Complement { of: Box<Region> },
}

impl Region {
    /// The set `{(x, y) : x ≥ 1, −1/x² ≤ y ≤ 1/x²}` of measure 2.
    pub fn unit_cusp() -> Self {
        Region::Cusp { start: 1.0, decay: 2.0 }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Region::Empty => false,
            Region::Whole => true,
            Region::Ball { center, radius } => {
                let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                d2 < radius * radius
            }
            Region::Rect { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(v, (lo, hi))| lo <= v && v <= hi),
            Region::Cusp { start, decay } => {
                if x.len() < 2 {
                    return false;
                }
                let (a, b) = (x[0], x[1]);
                a >= *start && b.abs() <= a.powf(-decay)
            }
            Region::Union { parts } => parts.iter().any(|p| p.contains(x)),
            Region::Complement { of } => !of.contains(x),
        }
    }

    /// Lebesgue measure in `ℝ^dim` when known in closed form.
    pub fn measure(&self, dim: usize) -> Option<f64> {
        match self {
            Region::Empty => Some(0.0),
            Region::Whole | Region::Complement { .. } => None,
            Region::Ball { radius, .. } => Some(unit_ball_volume(dim) * radius.powi(dim as i32)),
            Region::Rect { lower, upper } => {
                Some(lower.iter().zip(upper).map(|(lo, hi)| (hi - lo).max(0.0)).product())
            }
            Region::Cusp { start, decay } => {
                if dim != 2 {
                    return Some(0.0);
                }
                if *decay <= 1.0 {
                    return Some(f64::INFINITY);
                }
                Some(2.0 * start.powf(1.0 - decay) / (decay - 1.0))
            }
            // upper bound only; exact when parts are disjoint
            Region::Union { parts } => parts.iter().map(|p| p.measure(dim)).sum(),
        }
    }
}

/// How a one-dimensional profile reads the spatial point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coordinate {
    /// `|x|`
    Radial,
    /// `x_i`
    Axis(usize),
}

impl Coordinate {
    fn read(self, x: &[f64]) -> f64 {
        match self {
            Coordinate::Radial => norm(x),
            Coordinate::Axis(i) => x.get(i).copied().unwrap_or(0.0),
        }
    }
}

/// A closed-form real function of the spatial point, drawn from a fixed catalog.
///
/// In JSON a bare number is a constant field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "FieldRepr", into = "FieldRepr")]
pub enum Field {
    Const(f64),
    /// `|x|`
    Norm,
    /// `Σ_k coefs[k]·|x|^k`
    Poly(Vec<f64>),
    /// `scale·(|x| + shift)^(−power)`
    RecipPow { shift: f64, power: f64, scale: f64 },
    /// Linear interpolation through `knots`, constant beyond the end knots.
    PiecewiseLinear { coordinate: Coordinate, knots: Vec<[f64; 2]> },
    /// `inside` on the region, `outside` elsewhere.
    Indicator { region: Region, inside: f64, outside: f64 },
}

impl Field {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Field::Const(v) => *v,
            Field::Norm => norm(x),
            Field::Poly(c) => {
                let r = norm(x);
                c.iter().rev().fold(0.0, |acc, a| acc * r + a)
            }
            Field::RecipPow { shift, power, scale } => scale * (norm(x) + shift).powf(-power),
            Field::PiecewiseLinear { coordinate, knots } => {
                let s = coordinate.read(x);
                piecewise_linear(knots, s)
            }
            Field::Indicator { region, inside, outside } => {
                if region.contains(x) {
                    *inside
                } else {
                    *outside
                }
            }
        }
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Field::Const(v) => Some(*v),
            _ => None,
        }
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Const(v)
    }
}

fn piecewise_linear(knots: &[[f64; 2]], s: f64) -> f64 {
    match knots {
        [] => 0.0,
        [only] => only[1],
        _ => {
            if s <= knots[0][0] {
                return knots[0][1];
            }
            for w in knots.windows(2) {
                let ([a, fa], [b, fb]) = (w[0], w[1]);
                if s <= b {
                    if b == a {
                        return fb;
                    }
                    return fa + (fb - fa) * (s - a) / (b - a);
                }
            }
            knots[knots.len() - 1][1]
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FieldRepr {
    Number(f64),
    Tagged(TaggedField),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "field", rename_all = "snake_case")]
enum TaggedField {
    Norm,
    Poly { coefs: Vec<f64> },
    RecipPow {
        #[serde(default = "one")]
        shift: f64,
        power: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    PiecewiseLinear { coordinate: Coordinate, knots: Vec<[f64; 2]> },
    Indicator {
        region: Region,
        #[serde(default = "one")]
        inside: f64,
        #[serde(default)]
        outside: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl From<FieldRepr> for Field {
    fn from(r: FieldRepr) -> Self {
        match r {
            FieldRepr::Number(v) => Field::Const(v),
            FieldRepr::Tagged(t) => match t {
                TaggedField::Norm => Field::Norm,
                TaggedField::Poly { coefs } => Field::Poly(coefs),
                TaggedField::RecipPow { shift, power, scale } => Field::RecipPow { shift, power, scale },
                TaggedField::PiecewiseLinear { coordinate, knots } => {
                    Field::PiecewiseLinear { coordinate, knots }
                }
                TaggedField::Indicator { region, inside, outside } => {
                    Field::Indicator { region, inside, outside }
                }
            },
        }
    }
}

impl From<Field> for FieldRepr {
    fn from(f: Field) -> Self {
        match f {
            Field::Const(v) => FieldRepr::Number(v),
            Field::Norm => FieldRepr::Tagged(TaggedField::Norm),
            Field::Poly(coefs) => FieldRepr::Tagged(TaggedField::Poly { coefs }),
            Field::RecipPow { shift, power, scale } => {
                FieldRepr::Tagged(TaggedField::RecipPow { shift, power, scale })
            }
            Field::PiecewiseLinear { coordinate, knots } => {
                FieldRepr::Tagged(TaggedField::PiecewiseLinear { coordinate, knots })
            }
            Field::Indicator { region, inside, outside } => {
                FieldRepr::Tagged(TaggedField::Indicator { region, inside, outside })
            }
        }
    }
}

/// Nonnegative spatial weight `h(x)`, e.g. the additive error term of weak
/// equivalence or of the decay condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "weight", rename_all = "snake_case")]
pub enum WeightFunction {
    Zero,
    Constant { value: f64 },
    Indicator { region: Region },
    /// `scale·(|x| + shift)^(−power)`
    RecipPow { shift: f64, power: f64, scale: f64 },
}

impl WeightFunction {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            WeightFunction::Zero => 0.0,
            WeightFunction::Constant { value } => *value,
            WeightFunction::Indicator { region } => {
                if region.contains(x) {
                    1.0
                } else {
                    0.0
                }
            }
            WeightFunction::RecipPow { shift, power, scale } => scale * (norm(x) + shift).powf(-power),
        }
    }

    /// `‖h‖_{L¹(Ω)}` in closed form, `None` when unknown, `Some(∞)` when divergent.
    pub fn l1_norm(&self, domain: &Domain) -> Option<f64> {
        let n = domain.dim;
        match self {
            WeightFunction::Zero => Some(0.0),
            WeightFunction::Constant { value } => {
                if *value == 0.0 {
                    Some(0.0)
                } else {
                    Some(domain.volume().map_or(f64::INFINITY, |v| v * value))
                }
            }
            WeightFunction::Indicator { region } => {
                if domain.is_bounded() {
                    // bounded by the domain volume; exact when the region lies inside
                    match region.measure(n) {
                        Some(m) => Some(m.min(domain.volume().unwrap_or(f64::INFINITY))),
                        None => domain.volume(),
                    }
                } else {
                    region.measure(n)
                }
            }
            WeightFunction::RecipPow { shift, power, scale } => {
                if domain.is_bounded() {
                    // sup-norm times volume is the only closed form on a box
                    return None;
                }
                let (c, k) = (*shift, *power);
                if c <= 0.0 || k <= n as f64 {
                    return Some(f64::INFINITY);
                }
                // ∫_{ℝⁿ} (|x|+c)^{-k} dx in polar coordinates
                let v = match n {
                    1 => 2.0 * c.powf(1.0 - k) / (k - 1.0),
                    2 => 2.0 * PI * c.powf(2.0 - k) / ((k - 1.0) * (k - 2.0)),
                    _ => return None,
                };
                Some(scale * v)
            }
        }
    }

    pub fn linf_norm(&self) -> Option<f64> {
        match self {
            WeightFunction::Zero => Some(0.0),
            WeightFunction::Constant { value } => Some(value.abs()),
            WeightFunction::Indicator { region } => Some(if matches!(region, Region::Empty) { 0.0 } else { 1.0 }),
            WeightFunction::RecipPow { shift, power, scale } => {
                if *shift <= 0.0 {
                    None
                } else {
                    Some(scale * shift.powf(-power))
                }
            }
        }
    }

    /// True when both closed-form norms exist and are finite.
    pub fn is_admissible(&self, domain: &Domain) -> bool {
        let l1 = self.l1_norm(domain).or_else(|| {
            // on a bounded box any bounded weight is integrable
            domain.volume().zip(self.linf_norm()).map(|(v, s)| v * s)
        });
        matches!((l1, self.linf_norm()), (Some(a), Some(b)) if a.is_finite() && b.is_finite())
    }
}
