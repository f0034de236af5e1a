//! x-dependent Φ-functions built from catalog parameter fields.

use serde::{Deserialize, Serialize};

use super::curve::{Piece, PhiCurve, PowerTerm};
use crate::error::{Error, Result};
use crate::extended::Extended;
use crate::geometry::{Coordinate, Domain, Field, Region};

fn one() -> f64 {
    1.0
}

/// `coef(x) · u^{exponent(x)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldTerm {
    pub coef: Field,
    pub exponent: Field,
}

impl FieldTerm {
    pub fn new(coef: impl Into<Field>, exponent: impl Into<Field>) -> Self {
        FieldTerm { coef: coef.into(), exponent: exponent.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldPiece {
    pub terms: Vec<FieldTerm>,
    #[serde(default)]
    pub shift: f64,
    #[serde(default = "one")]
    pub outer: f64,
}

impl FieldPiece {
    pub fn new(terms: Vec<FieldTerm>) -> Self {
        FieldPiece { terms, shift: 0.0, outer: 1.0 }
    }
}

/// Piecewise power sums whose breakpoints, coefficients and exponents are
/// fields of `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldCurve {
    #[serde(default)]
    pub breakpoints: Vec<Field>,
    pub pieces: Vec<FieldPiece>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infinite_tail: Option<Field>,
}

impl FieldCurve {
    pub fn at(&self, x: &[f64]) -> Result<PhiCurve> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                terms: p
                    .terms
                    .iter()
                    .map(|t| PowerTerm::new(t.coef.eval(x), t.exponent.eval(x)))
                    .collect(),
                shift: p.shift,
                outer: p.outer,
            })
            .collect();
        PhiCurve::new(
            self.breakpoints.iter().map(|b| b.eval(x)).collect(),
            pieces,
            self.infinite_tail.as_ref().map(|b| b.eval(x)),
        )
    }

    fn constant(curve: &PhiCurve) -> FieldCurve {
        FieldCurve {
            breakpoints: curve.breakpoints().iter().map(|&b| Field::Const(b)).collect(),
            pieces: curve
                .pieces()
                .iter()
                .map(|p| FieldPiece {
                    terms: p.terms.iter().map(|t| FieldTerm::new(t.coef, t.exponent)).collect(),
                    shift: p.shift,
                    outer: p.outer,
                })
                .collect(),
            infinite_tail: curve.infinite_tail().map(Field::Const),
        }
    }
}

/// Catalog kinds and transform nodes. Serialized adjacently as
/// `{"kind": ..., "params": ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum PhiSpec {
    /// x-independent curve.
    Orlicz { curve: PhiCurve },
    /// `coef · t^exponent`.
    Power {
        exponent: f64,
        #[serde(default = "one")]
        coef: f64,
    },
    /// `a(x) · t^{p(x)}`.
    VariableExponent {
        p: Field,
        #[serde(default = "one_field")]
        a: Field,
    },
    /// `t^p + a(x) t^q`.
    DoublePhase { p: f64, q: f64, a: Field },
    /// `t^{p(x)} + a(x) t^{q(x)}`.
    Vdp { p: Field, q: Field, a: Field },
    /// `t` on the cusp for `t ≤ 1`, `t²` otherwise.
    #[serde(rename = "example_3_2")]
    Example32,
    /// `t` for `t ≤ 1/(|x|+2)`, `t² + t` beyond.
    #[serde(rename = "example_3_4")]
    Example34,
    /// `t/(|x|+1)^n` for `t ≤ (|x|+1)^{-n}`, `t²` beyond.
    #[serde(rename = "example_3_5")]
    Example35,
    /// `t^{p(x)}` on `(−2, 2)` with the tent exponent `p(±2) = 1`, `p = 2` on `[−1, 1]`.
    #[serde(rename = "example_4_6")]
    Example46,
    /// Bespoke breakpoint/term lists.
    Explicit { curve: FieldCurve },
    /// `ψ₁^p` on `G × [0, 1]`, `ψ₁` elsewhere.
    Thm31Glue {
        base: Box<PhiSpec>,
        region: Region,
        p: f64,
    },
    /// `φ∞(βt)` on `[0, t₁]`, `max{φ∞(βt₁), φ(x, t)}` beyond.
    Thm47 {
        base: Box<PhiSpec>,
        phi_inf: PhiCurve,
        beta: f64,
        t1: f64,
    },
}

fn one_field() -> Field {
    Field::Const(1.0)
}

impl PhiSpec {
    /// The tent exponent of the variable-exponent example on `(−2, 2)`.
    pub fn example_4_6_exponent() -> Field {
        Field::PiecewiseLinear {
            coordinate: Coordinate::Axis(0),
            knots: vec![[-2.0, 1.0], [-1.0, 2.0], [1.0, 2.0], [2.0, 1.0]],
        }
    }

    fn field_curve(&self, dim: usize) -> Option<FieldCurve> {
        let single = |terms: Vec<FieldTerm>| FieldCurve {
            breakpoints: vec![],
            pieces: vec![FieldPiece::new(terms)],
            infinite_tail: None,
        };
        Some(match self {
            PhiSpec::Orlicz { curve } => FieldCurve::constant(curve),
            PhiSpec::Power { exponent, coef } => single(vec![FieldTerm::new(*coef, *exponent)]),
            PhiSpec::VariableExponent { p, a } => single(vec![FieldTerm { coef: a.clone(), exponent: p.clone() }]),
            PhiSpec::DoublePhase { p, q, a } => {
                single(vec![FieldTerm::new(1.0, *p), FieldTerm { coef: a.clone(), exponent: Field::Const(*q) }])
            }
            PhiSpec::Vdp { p, q, a } => single(vec![
                FieldTerm { coef: Field::Const(1.0), exponent: p.clone() },
                FieldTerm { coef: a.clone(), exponent: q.clone() },
            ]),
            PhiSpec::Example32 => {
                let in_g = |v: f64, w: f64| Field::Indicator { region: Region::unit_cusp(), inside: v, outside: w };
                // on G: t on (0, 1], t² beyond; off G: t² throughout
                FieldCurve {
                    breakpoints: vec![Field::Const(1.0)],
                    pieces: vec![
                        FieldPiece::new(vec![FieldTerm { coef: Field::Const(1.0), exponent: in_g(1.0, 2.0) }]),
                        FieldPiece::new(vec![FieldTerm::new(1.0, 2.0)]),
                    ],
                    infinite_tail: None,
                }
            }
            PhiSpec::Example34 => FieldCurve {
                breakpoints: vec![Field::RecipPow { shift: 2.0, power: 1.0, scale: 1.0 }],
                pieces: vec![
                    FieldPiece::new(vec![FieldTerm::new(1.0, 1.0)]),
                    FieldPiece::new(vec![FieldTerm::new(1.0, 2.0), FieldTerm::new(1.0, 1.0)]),
                ],
                infinite_tail: None,
            },
            PhiSpec::Example35 => {
                let n = dim as f64;
                let b = Field::RecipPow { shift: 1.0, power: n, scale: 1.0 };
                FieldCurve {
                    breakpoints: vec![b.clone()],
                    pieces: vec![
                        FieldPiece::new(vec![FieldTerm { coef: b, exponent: Field::Const(1.0) }]),
                        FieldPiece::new(vec![FieldTerm::new(1.0, 2.0)]),
                    ],
                    infinite_tail: None,
                }
            }
            PhiSpec::Example46 => single(vec![FieldTerm { coef: Field::Const(1.0), exponent: Self::example_4_6_exponent() }]),
            PhiSpec::Explicit { curve } => curve.clone(),
            PhiSpec::Thm31Glue { .. } | PhiSpec::Thm47 { .. } => return None,
        })
    }

    /// The curve `t ↦ φ(x, t)` (no domain check).
    pub fn curve_at(&self, x: &[f64], dim: usize) -> Result<PhiCurve> {
        if let Some(fc) = self.field_curve(dim) {
            return fc.at(x);
        }
        match self {
            PhiSpec::Thm31Glue { base, region, p } => {
                let psi1 = base.curve_at(x, dim)?;
                if !region.contains(x) {
                    return Ok(psi1);
                }
                PhiCurve::splice(&psi1.outer_power(*p)?, 1.0, &psi1)
            }
            PhiSpec::Thm47 { base, phi_inf, beta, t1 } => {
                let left = phi_inf.scale_argument(*beta)?;
                let level = left.value(*t1);
                let phi = base.curve_at(x, dim)?;
                let right = phi.floor_beyond(*t1, level)?;
                PhiCurve::splice(&left, *t1, &right)
            }
            _ => unreachable!("catalog kinds have field curves"),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            PhiSpec::Orlicz { .. } => "orlicz",
            PhiSpec::Power { .. } => "power",
            PhiSpec::VariableExponent { .. } => "variable_exponent",
            PhiSpec::DoublePhase { .. } => "double_phase",
            PhiSpec::Vdp { .. } => "vdp",
            PhiSpec::Example32 => "example_3_2",
            PhiSpec::Example34 => "example_3_4",
            PhiSpec::Example35 => "example_3_5",
            PhiSpec::Example46 => "example_4_6",
            PhiSpec::Explicit { .. } => "explicit",
            PhiSpec::Thm31Glue { .. } => "thm31_glue",
            PhiSpec::Thm47 { .. } => "thm47",
        }
    }

    /// True when the function does not depend on `x`.
    pub fn is_x_independent(&self) -> bool {
        match self {
            PhiSpec::Orlicz { .. } | PhiSpec::Power { .. } => true,
            PhiSpec::DoublePhase { a, .. } => a.as_const().is_some(),
            PhiSpec::VariableExponent { p, a } => p.as_const().is_some() && a.as_const().is_some(),
            PhiSpec::Vdp { p, q, a } => [p, q, a].iter().all(|f| f.as_const().is_some()),
            PhiSpec::Explicit { curve } => {
                curve.breakpoints.iter().all(|b| b.as_const().is_some())
                    && curve.infinite_tail.as_ref().is_none_or(|b| b.as_const().is_some())
                    && curve
                        .pieces
                        .iter()
                        .flat_map(|p| &p.terms)
                        .all(|t| t.coef.as_const().is_some() && t.exponent.as_const().is_some())
            }
            PhiSpec::Thm31Glue { base, region, .. } => {
                base.is_x_independent() && matches!(region, Region::Empty | Region::Whole)
            }
            PhiSpec::Thm47 { base, .. } => base.is_x_independent(),
            _ => false,
        }
    }
}

/// Record of the transform that produced a function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub transform: String,
    pub inputs: serde_json::Value,
}

/// A generalized Φ-function `φ: Ω × [0, ∞) → [0, ∞]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiFunction {
    #[serde(flatten)]
    pub spec: PhiSpec,
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl PhiFunction {
    /// Build and validate on a probe set of points.
    pub fn new(spec: PhiSpec, domain: Domain) -> Result<Self> {
        let phi = PhiFunction { spec, domain, provenance: None };
        phi.validate()?;
        Ok(phi)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn orlicz(curve: PhiCurve, dim: usize) -> Self {
        PhiFunction { spec: PhiSpec::Orlicz { curve }, domain: Domain::whole(dim), provenance: None }
    }

    pub fn power(exponent: f64, dim: usize) -> Result<Self> {
        PhiFunction::new(PhiSpec::Power { exponent, coef: 1.0 }, Domain::whole(dim))
    }

    pub fn example_3_2() -> Self {
        PhiFunction { spec: PhiSpec::Example32, domain: Domain::whole(2), provenance: None }
    }

    pub fn example_3_4(dim: usize) -> Self {
        PhiFunction { spec: PhiSpec::Example34, domain: Domain::whole(dim), provenance: None }
    }

    pub fn example_3_5(dim: usize) -> Self {
        PhiFunction { spec: PhiSpec::Example35, domain: Domain::whole(dim), provenance: None }
    }

    pub fn example_4_6() -> Self {
        PhiFunction { spec: PhiSpec::Example46, domain: Domain::interval(-2.0, 2.0), provenance: None }
    }

    pub fn dim(&self) -> usize {
        self.domain.dim
    }

    /// Points at which construction-time invariants are checked.
    pub fn probe_points(&self) -> Vec<Vec<f64>> {
        let dim = self.domain.dim;
        let mut pts = Vec::new();
        match &self.domain.bounds {
            Some(b) => {
                let steps = 9;
                let coord = |axis: usize, k: usize| {
                    let [lo, hi] = b[axis];
                    lo + (hi - lo) * (k as f64 + 0.5) / steps as f64
                };
                if dim == 1 {
                    pts.extend((0..steps).map(|k| vec![coord(0, k)]));
                } else {
                    for i in 0..steps {
                        for j in 0..steps {
                            pts.push(vec![coord(0, i), coord(1, j)]);
                        }
                    }
                }
            }
            None => {
                for &r in &[0.0, 0.5, 1.0, 1.5, 2.0, 5.0, 10.0, 100.0] {
                    if dim == 1 {
                        pts.push(vec![r]);
                        pts.push(vec![-r]);
                    } else {
                        for k in 0..8 {
                            let a = std::f64::consts::PI * k as f64 / 4.0;
                            pts.push(vec![r * a.cos(), r * a.sin()]);
                        }
                        // a point inside the cusp
                        pts.push(vec![r.max(1.0) + 0.5, 0.0]);
                    }
                }
            }
        }
        pts
    }

    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        match &self.spec {
            PhiSpec::DoublePhase { p, q, .. } if !(1.0 <= *p && p <= q) => {
                return Err(Error::Construction(format!("double phase needs 1 ≤ p ≤ q, got p={p}, q={q}")));
            }
            PhiSpec::Thm31Glue { p, .. } if *p <= 1.0 => {
                return Err(Error::Construction(format!("glue power {p} must exceed 1")));
            }
            PhiSpec::Thm47 { beta, t1, .. } if !(*beta > 0.0 && *beta <= 1.0 && *t1 > 0.0) => {
                return Err(Error::Construction("needs β ∈ (0, 1] and t₁ > 0".into()));
            }
            _ => {}
        }
        for x in self.probe_points() {
            self.spec.curve_at(&x, self.domain.dim).map_err(|e| match e {
                Error::Construction(m) => Error::Construction(format!("at x = {x:?}: {m}")),
                other => other,
            })?;
        }
        Ok(())
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if self.domain.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain { point: x.to_vec() })
        }
    }

    /// `t ↦ φ(x, t)`.
    pub fn curve_at(&self, x: &[f64]) -> Result<PhiCurve> {
        self.check_point(x)?;
        self.spec.curve_at(x, self.domain.dim)
    }

    /// `φ(x, t)`.
    pub fn eval(&self, x: &[f64], t: f64) -> Result<Extended> {
        if !(t >= 0.0) {
            return Err(Error::Argument(format!("t = {t} must be ≥ 0")));
        }
        Ok(self.curve_at(x)?.eval(t))
    }

    /// `φ⁻¹(x, τ) = inf{s ≥ 0 : φ(x, s) ≥ τ}`.
    pub fn inverse(&self, x: &[f64], tau: f64) -> Result<f64> {
        if !(tau >= 0.0) {
            return Err(Error::Argument(format!("τ = {tau} must be ≥ 0")));
        }
        Ok(self.curve_at(x)?.inverse(tau))
    }

    /// `φ*(x, t) = sup_{s>0} (st − φ(x, s))`.
    pub fn conjugate(&self, x: &[f64], t: f64) -> Result<Extended> {
        if !(t >= 0.0) {
            return Err(Error::Argument(format!("t = {t} must be ≥ 0")));
        }
        Ok(self.curve_at(x)?.conjugate(t))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("Φ-functions always serialize")
    }

    /// Parse, reporting the JSON pointer of the offending field on failure.
    pub fn from_json(text: &str) -> Result<Self> {
        let phi: PhiFunction = crate::json::parse(text)?;
        phi.validate()?;
        Ok(phi)
    }
}

/// Build a catalog family from its kind name and JSON parameters.
pub fn make_family(kind: &str, params: serde_json::Value, domain: Domain) -> Result<PhiFunction> {
    let mut doc = serde_json::json!({ "kind": kind, "domain": domain });
    if !params.is_null() {
        doc["params"] = params;
    }
    let phi: PhiFunction = crate::json::from_value(doc)?;
    phi.validate()?;
    Ok(phi)
}
