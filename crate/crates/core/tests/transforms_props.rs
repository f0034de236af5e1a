use genorlicz::conditions::{check_a0, check_ainc, check_weak_equivalence, log_grid, SampleSpec, TInterval};
use genorlicz::geometry::{Region, WeightFunction};
use genorlicz::phi_core::{PhiCurve, PhiFunction, PowerTerm};
use genorlicz::transforms::{
    prop44_repair_asymptote, prop44_t1, remark45_asymptotes, thm31_glue, thm47_construct, thm47_exponent,
    AsymptotePair,
};
use proptest::prelude::*;

fn disc() -> Region {
    Region::Ball { center: vec![1.0, -0.5], radius: 1.5 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn glued_function_keeps_space_and_normalization(q in 1.0f64..3.0, p in 1.1f64..4.0) {
        let psi1 = PhiFunction::power(q, 2).unwrap();
        let spec = SampleSpec::for_phi(&psi1);
        let glued = thm31_glue(&psi1, &disc(), p, &spec).unwrap();

        let h = WeightFunction::Indicator { region: disc() };
        let weak = check_weak_equivalence(&glued, &psi1, 1.0, &h, &spec).unwrap();
        prop_assert!(weak.holds);

        let a0 = check_a0(&glued, &spec).unwrap();
        prop_assert!(a0.holds);
        prop_assert!((a0.value("beta") - 1.0).abs() < 1e-9, "β = {}", a0.value("beta"));

        let inside: Vec<Vec<f64>> = spec.x_samples.iter().filter(|x| disc().contains(x)).cloned().collect();
        prop_assume!(!inside.is_empty());
        let on_g = SampleSpec::new(inside);
        let ainc = check_ainc(&glued, p, TInterval::up_to(1.0), &on_g).unwrap();
        prop_assert!(ainc.holds, "a = {}", ainc.value("a"));
    }

    #[test]
    fn repaired_asymptote_is_continuous_at_the_seam(
        terms in prop::collection::vec((0.05f64..5.0, 1.0f64..4.0), 1..4),
        t1 in 0.01f64..10.0,
        p in 1.05f64..4.0,
    ) {
        let curve = PhiCurve::sum(terms.into_iter().map(|(c, q)| PowerTerm::new(c, q)).collect()).unwrap();
        let repaired = prop44_repair_asymptote(&curve, t1, p).unwrap();
        let tail = repaired.pieces().last().unwrap();
        prop_assert_eq!(tail.value(t1), repaired.value(t1));
        prop_assert_eq!(repaired.value(t1), curve.value(t1));
        // one ulp-scale step right of the seam
        let right = repaired.value(t1 * (1.0 + 1e-12));
        prop_assert!((right - curve.value(t1)).abs() <= 1e-9 * curve.value(t1).max(1e-300));
    }
}

#[test]
fn remark45_is_identity_on_x_independent_input() {
    let curve = PhiCurve::sum(vec![PowerTerm::new(1.0, 1.5), PowerTerm::new(0.3, 3.0)]).unwrap();
    for dim in [1, 2] {
        let phi = PhiFunction::orlicz(curve.clone(), dim);
        let est = remark45_asymptotes(&phi, &log_grid(1e-3, 1e3, 8), &[1e2, 1e3, 1e4]).unwrap();
        assert_eq!(est.plus, curve);
        assert_eq!(est.minus, curve);
        assert!(est.converged);
        assert_eq!(est.max_relative_change, 0.0);
    }
}

#[test]
fn constructed_psi_restores_growth_and_stays_equivalent() {
    let phi = PhiFunction::example_3_5(1);
    let spec = SampleSpec::for_phi(&phi);
    let sq = PhiCurve::power(1.0, 2.0).unwrap();
    let h = WeightFunction::RecipPow { shift: 1.0, power: 2.0, scale: 1.0 };
    let beta2 = 0.5;
    let pair = AsymptotePair::new(sq.clone(), h.clone(), beta2, 1.0).unwrap();
    let t1 = prop44_t1(&phi, &sq, &spec).unwrap();
    let psi = thm47_construct(&phi, &pair, t1).unwrap();

    let p = thm47_exponent(&phi, &pair, t1, 100.0, &spec).unwrap().expect("an exponent exists");
    assert!(p > 1.0, "p' = {p}");
    let ainc = check_ainc(&psi, p, TInterval::all(), &spec).unwrap();
    assert!(ainc.holds, "a = {}", ainc.value("a"));

    let weak = check_weak_equivalence(&psi, &phi, 1.0 / (beta2 * beta2), &h, &spec).unwrap();
    assert!(weak.holds);
    assert_eq!(psi.provenance.as_ref().map(|p| p.transform.as_str()), Some("thm47_construct"));
}

#[test]
fn glue_rejects_unnormalized_base() {
    let base = PhiFunction::orlicz(PhiCurve::power(2.0, 2.0).unwrap(), 2);
    let spec = SampleSpec::for_phi(&base);
    assert!(thm31_glue(&base, &disc(), 2.0, &spec).is_err());
    assert!(thm31_glue(&PhiFunction::power(2.0, 2).unwrap(), &disc(), 1.0, &spec).is_err());
}
