//! Inverse, conjugate and serialization properties of Φ-curves and Φ-functions.

use approx::assert_relative_eq;
use genorlicz::geometry::Domain;
use genorlicz::phi_core::{make_family, Conjugate, MonotoneFunction, Piece, PhiCurve, PhiFunction, PowerTerm};
use genorlicz::Extended;
use proptest::prelude::*;
use serde_json::json;

/// Strictly increasing power sums `Σ c_k t^{q_k}` with every exponent ≥ 1.
fn power_sum() -> impl Strategy<Value = PhiCurve> {
    prop::collection::vec((0.05f64..5.0, 1.0f64..4.0), 1..4)
        .prop_map(|terms| PhiCurve::sum(terms.into_iter().map(|(c, q)| PowerTerm::new(c, q)).collect()).unwrap())
}

/// Curves equal to `t` up to `b < 1` and to `t² + b − b²` after it, with an optional infinite tail.
fn kinked() -> impl Strategy<Value = PhiCurve> {
    (0.1f64..0.9, prop::option::of(2.5f64..10.0)).prop_map(|(b, tail)| {
        let second = Piece::new(vec![PowerTerm::new(1.0, 2.0), PowerTerm::new(b - b * b, 0.0)]);
        PhiCurve::new(vec![b], vec![Piece::monomial(1.0, 1.0), second], tail).unwrap()
    })
}

fn level() -> impl Strategy<Value = f64> {
    (-6.0f64..6.0).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #[test]
    fn inverse_never_overshoots(curve in prop_oneof![power_sum(), kinked()], t in level()) {
        if let Extended::Finite(v) = curve.eval(t) {
            let back = curve.inverse(v);
            prop_assert!(back <= t * (1.0 + 1e-8) + 1e-300, "φ⁻¹(φ({t})) = {back}");
        }
    }

    #[test]
    fn inverse_recovers_argument_on_strict_curves(curve in power_sum(), t in level()) {
        let v = curve.value(t);
        prop_assume!(v > 0.0 && v.is_finite());
        let back = curve.inverse(v);
        prop_assert!((back - t).abs() <= 1e-8 * t, "φ⁻¹(φ({t})) = {back}");
    }

    #[test]
    fn curve_of_inverse_is_identity_on_convex_curves(curve in power_sum(), tau in level()) {
        let v = curve.value(curve.inverse(tau));
        prop_assert!((v - tau).abs() <= 1e-8 * tau, "φ(φ⁻¹({tau})) = {v}");
    }

    #[test]
    fn inverse_is_monotone(curve in prop_oneof![power_sum(), kinked()], a in level(), b in level()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(curve.inverse(lo) <= curve.inverse(hi));
    }

    #[test]
    fn inverse_product_bracket_for_monomials(p in 1.05f64..6.0, c in 0.1f64..10.0, tau in (-3.0f64..3.0).prop_map(|e| 10f64.powf(e))) {
        let curve = PhiCurve::power(c, p).unwrap();
        let prod = curve.inverse(tau) * Conjugate(&curve).numeric_inverse(tau) / tau;
        prop_assert!((0.5 * (1.0 - 1e-8)..=2.0 * (1.0 + 1e-8)).contains(&prod), "product {prod}");
    }

    #[test]
    fn conjugate_is_midpoint_convex(curve in power_sum(), a in 0.01f64..20.0, b in 0.01f64..20.0) {
        let f = |t: f64| curve.conjugate(t).to_f64();
        let mid = f(0.5 * (a + b));
        prop_assert!(mid <= 0.5 * (f(a) + f(b)) * (1.0 + 1e-8) + 1e-12);
    }

    #[test]
    fn conjugate_of_scaled_power_is_dual_power(p in 1.1f64..5.0, t in 0.01f64..50.0) {
        // (t^p/p)* = t^{p'}/p'
        let curve = PhiCurve::power(1.0 / p, p).unwrap();
        let q = p / (p - 1.0);
        let want = t.powf(q) / q;
        let got = curve.conjugate(t).to_f64();
        prop_assert!((got - want).abs() <= 1e-10 * want.max(1.0), "p = {p}: {got} vs {want}");
    }

    #[test]
    fn double_phase_json_round_trip(p in 1.0f64..3.0, dq in 0.0f64..2.0, a0 in 0.0f64..2.0, a1 in 0.0f64..2.0) {
        let phi = make_family(
            "double_phase",
            json!({ "p": p, "q": p + dq, "a": { "field": "poly", "coefs": [a0, a1] } }),
            Domain::whole(2),
        ).unwrap();
        let back = PhiFunction::from_json(&phi.to_json()).unwrap();
        prop_assert_eq!(&back, &phi);
        let x = [0.3, -1.2];
        prop_assert_eq!(back.eval(&x, 1.7).unwrap(), phi.eval(&x, 1.7).unwrap());
    }
}

#[test]
fn catalog_examples_round_trip() {
    for phi in [
        PhiFunction::example_3_2(),
        PhiFunction::example_3_4(2),
        PhiFunction::example_3_5(1),
        PhiFunction::example_4_6(),
        PhiFunction::power(2.5, 1).unwrap(),
    ] {
        let back = PhiFunction::from_json(&phi.to_json()).unwrap();
        assert_eq!(back, phi);
    }
}

#[test]
fn example_3_4_closed_form_values() {
    let phi = PhiFunction::example_3_4(2);
    // at x = 0 the threshold is 1/2
    assert_eq!(phi.eval(&[0.0, 0.0], 0.5).unwrap(), Extended::Finite(0.5));
    assert_relative_eq!(phi.eval(&[0.0, 0.0], 0.6).unwrap().to_f64(), 0.96, max_relative = 1e-15);
    // φ(x, 1) = 2 everywhere
    for x in [[0.0, 0.0], [3.0, 4.0], [100.0, 0.0]] {
        assert_eq!(phi.eval(&x, 1.0).unwrap(), Extended::Finite(2.0));
    }
}

#[test]
fn infinite_tail_inverse_stops_at_threshold() {
    let capped = PhiCurve::new(vec![], vec![Piece::monomial(1.0, 2.0)], Some(2.0)).unwrap();
    assert_eq!(capped.eval(2.5), Extended::Infinite);
    assert_eq!(capped.inverse(100.0), 2.0);
    assert_eq!(capped.inverse(0.0), 0.0);
}

#[test]
fn outside_domain_is_rejected() {
    let phi = PhiFunction::example_4_6();
    assert!(phi.eval(&[2.5], 1.0).is_err());
    assert!(phi.eval(&[1.5], 1.0).is_ok());
}
