use genorlicz::conditions::{
    check_a0, check_a1, check_a1prime, check_ainc, check_ainc_curve, check_equivalence, lemma24_backward,
    lemma24_forward, lemma25_enlarge, Enlarge, SampleSpec, TInterval,
};
use genorlicz::geometry::Domain;
use genorlicz::phi_core::{make_family, PhiCurve, PhiFunction, PowerTerm};
use proptest::prelude::*;
use serde_json::json;

fn coarse(spec: SampleSpec) -> SampleSpec {
    SampleSpec { per_decade: 16, ..spec }.with_t_range(1e-3, 1e3)
}

fn power_sum() -> impl Strategy<Value = PhiCurve> {
    prop::collection::vec((0.05f64..5.0, 1.0f64..4.0), 1..4)
        .prop_map(|terms| PhiCurve::sum(terms.into_iter().map(|(c, q)| PowerTerm::new(c, q)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// ψ(t) = k·φ(βt) with k ∈ [1, 2], β ∈ [½, 1] is equivalent to φ with L = 2.
    #[test]
    fn ainc_constant_survives_equivalence(curve in power_sum(), k in 1.0f64..2.0, beta in 0.5f64..1.0, p in 1.0f64..1.9) {
        let psi_curve = curve.scale_argument(beta).unwrap().scale_value(k).unwrap();
        let phi = PhiFunction::orlicz(curve, 1);
        let psi = PhiFunction::orlicz(psi_curve, 1);
        let spec = coarse(SampleSpec::for_phi(&phi));
        let l = 2.0;
        prop_assert!(check_equivalence(&phi, &psi, l, &spec).unwrap().holds);
        let a_phi = check_ainc(&phi, p, TInterval::all(), &spec).unwrap();
        prop_assume!(a_phi.holds);
        let a_psi = check_ainc(&psi, p, TInterval::all(), &spec).unwrap();
        prop_assert!(a_psi.holds);
        prop_assert!(a_psi.value("a") <= a_phi.value("a") * l.powf(2.0 * p) * (1.0 + 1e-9));
    }

    #[test]
    fn doubling_factor_round_trip(p in 1.01f64..8.0, t in 1e-3f64..1e3) {
        let c = lemma24_forward(1.0, p).unwrap();
        let phi = |s: f64| s.powf(p);
        prop_assert!((2.0 * c * phi(t) - phi(c * t)).abs() <= 1e-12 * phi(c * t));
        prop_assert!((lemma24_backward(c).unwrap() - p).abs() <= 1e-12 * p);
    }

    #[test]
    fn enlarged_range_constant_is_sound(curve in power_sum(), p in 1.0f64..3.0, t2 in 0.1f64..10.0, shrink in 1.0f64..50.0) {
        let t1 = t2 / shrink;
        let spec = coarse(SampleSpec::new(vec![vec![0.0]]));
        let upper = check_ainc_curve(&curve, p, TInterval::from(t2), &spec).unwrap();
        prop_assume!(upper.holds);
        let a = upper.value("a").max(1.0);
        let bound = lemma25_enlarge(a, p, t1, t2, Enlarge::Lower).unwrap();
        let enlarged = check_ainc_curve(&curve, p, TInterval::from(t1), &spec).unwrap();
        prop_assert!(enlarged.value("a_sampled") <= bound * (1.0 + 1e-9),
            "sampled {} above bound {bound}", enlarged.value("a_sampled"));
    }
}

#[test]
fn enlargement_bound_on_the_threshold_example() {
    let phi = PhiFunction::example_3_4(2);
    let spec = SampleSpec::for_phi(&phi);
    let (t1, t2) = (0.25, 1.0);
    let upper = check_ainc(&phi, 2.0, TInterval::from(t2), &spec).unwrap();
    assert!(upper.holds);
    let bound = lemma25_enlarge(upper.value("a"), 2.0, t1, t2, Enlarge::Lower).unwrap();
    let enlarged = check_ainc(&phi, 2.0, TInterval::from(t1), &spec).unwrap();
    assert!(enlarged.holds);
    assert!(enlarged.value("a") <= bound, "{} > {bound}", enlarged.value("a"));
    // far from the origin the threshold drops below 1/4, so φ/t² = 1 + 1/t falls from 5 towards 1
    let a = enlarged.value("a");
    assert!(a <= 5.0 && a > 4.99, "a = {a}");
}

fn catalog() -> Vec<PhiFunction> {
    vec![
        PhiFunction::example_3_2(),
        PhiFunction::example_3_4(1),
        PhiFunction::example_3_5(1),
        PhiFunction::example_4_6(),
        PhiFunction::power(1.7, 1).unwrap(),
        make_family("double_phase", json!({ "p": 1.5, "q": 2.5, "a": { "field": "poly", "coefs": [0.0, 1.0] } }), Domain::interval(0.0, 3.0))
            .unwrap(),
    ]
}

#[test]
fn a1_implies_a1prime_and_a0_with_a1prime_implies_a1() {
    for phi in catalog() {
        let spec = SampleSpec::for_phi(&phi).with_seed(7);
        let a0 = check_a0(&phi, &spec).unwrap();
        let a1 = check_a1(&phi, &spec).unwrap();
        let a1p = check_a1prime(&phi, &spec).unwrap();
        let kind = phi.spec.kind_name();
        if a1.holds {
            assert!(a1p.holds, "{kind}: A1 holds but A1' fails");
        }
        if a0.holds && a1p.holds {
            assert!(a1.holds, "{kind}: A0 and A1' hold but A1 fails");
        }
    }
}

#[test]
fn a0_for_the_threshold_example_is_golden_ratio_conjugate() {
    let phi = PhiFunction::example_3_4(2);
    let a0 = check_a0(&phi, &SampleSpec::for_phi(&phi)).unwrap();
    let want = (5f64.sqrt() - 1.0) / 2.0;
    assert!(a0.holds);
    assert!((a0.value("beta") - want).abs() < 1e-6, "β = {}", a0.value("beta"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enlarging_samples_never_rescues_a_failure(mask in prop::collection::vec(any::<bool>(), 12), p in 1.05f64..2.5, lo_exp in -3.0f64..0.0) {
        let phi = PhiFunction::example_3_4(1);
        let full = SampleSpec::for_phi(&phi);
        let subset: Vec<Vec<f64>> = full.x_samples.iter().zip(mask.iter().cycle()).filter(|(_, keep)| **keep).map(|(x, _)| x.clone()).collect();
        prop_assume!(!subset.is_empty());
        let small = SampleSpec::new(subset).with_t_range(10f64.powf(lo_exp), 1e3);
        let large = full.with_t_range(10f64.powf(lo_exp) / 10.0, 1e4);
        let range = TInterval::between(10f64.powf(lo_exp), 1e3);
        let r_small = check_ainc(&phi, p, range, &small).unwrap();
        let r_large = check_ainc(&phi, p, range, &large).unwrap();
        prop_assert!(r_small.holds || !r_large.holds);
        prop_assert!(r_large.value("a_sampled") >= r_small.value("a_sampled") * (1.0 - 1e-9));
    }
}
