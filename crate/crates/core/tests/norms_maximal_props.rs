use approx::assert_relative_eq;
use genorlicz::conditions::{check_adec, SampleSpec, TInterval};
use genorlicz::geometry::{Domain, Region};
use genorlicz::grid::{GridFunction, GridShape};
use genorlicz::maximal::{maximal, MaximalConfig};
use genorlicz::norms::{luxemburg_norm, modular};
use genorlicz::phi_core::{make_family, PhiFunction};
use genorlicz::Extended;
use proptest::prelude::*;
use serde_json::json;

fn line(cells: usize) -> GridShape {
    GridShape::new(vec![[-4.0, 4.0]], vec![cells]).unwrap()
}

fn square(cells: usize) -> GridShape {
    GridShape::cube(2, 2.0, cells).unwrap()
}

fn grid_values(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..5.0], len)
}

fn convex_catalog(dim: usize) -> Vec<PhiFunction> {
    let domain = Domain::whole(dim);
    vec![
        PhiFunction::power(2.0, dim).unwrap(),
        PhiFunction::power(1.3, dim).unwrap(),
        PhiFunction::example_3_4(dim),
        make_family("double_phase", json!({ "p": 1.5, "q": 3.0, "a": { "field": "poly", "coefs": [0.5, 0.25] } }), domain)
            .unwrap(),
    ]
}

fn bump(x: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    (-r2).exp() * 3.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn norm_below_one_means_modular_below_one(values in grid_values(64), which in 0usize..4) {
        let phi = &convex_catalog(1)[which];
        let f = GridFunction::new(line(64), values).unwrap();
        let n = luxemburg_norm(phi, &f).unwrap();
        if n <= Extended::Finite(1.0) {
            prop_assert!(modular(phi, &f).unwrap() <= Extended::Finite(1.0 + 1e-4));
        }
    }

    #[test]
    fn luxemburg_norm_is_homogeneous(values in grid_values(64), which in 0usize..4) {
        let phi = &convex_catalog(1)[which];
        let f = GridFunction::new(line(64), values).unwrap();
        prop_assume!(!f.is_zero());
        let base = luxemburg_norm(phi, &f).unwrap().to_f64();
        for c in [0.5, 2.0, 10.0] {
            let scaled = luxemburg_norm(phi, &f.scaled(c)).unwrap().to_f64();
            prop_assert!((scaled - c * base).abs() <= 1e-6 * c * base, "c = {c}: {scaled} vs {}", c * base);
        }
    }

    #[test]
    fn maximal_dominates_f_in_1d(values in grid_values(48)) {
        let f = GridFunction::new(line(48), values).unwrap();
        let mf = maximal(&f, &MaximalConfig::default_for(&f.shape)).unwrap();
        for (m, v) in mf.values.iter().zip(&f.values) {
            prop_assert!(m >= v);
        }
    }

    #[test]
    fn maximal_is_sublinear_and_homogeneous(a in grid_values(144), b in grid_values(144), c in 0.1f64..20.0) {
        let shape = square(12);
        let cfg = MaximalConfig::default_for(&shape);
        let f = GridFunction::new(shape.clone(), a).unwrap();
        let g = GridFunction::new(shape.clone(), b).unwrap();
        let sum = GridFunction::new(shape, f.values.iter().zip(&g.values).map(|(x, y)| x + y).collect()).unwrap();
        let (mf, mg, ms) = (maximal(&f, &cfg).unwrap(), maximal(&g, &cfg).unwrap(), maximal(&sum, &cfg).unwrap());
        for i in 0..ms.len() {
            prop_assert!(ms.values[i] <= (mf.values[i] + mg.values[i]) * (1.0 + 1e-12));
            prop_assert!(mf.values[i] >= f.values[i]);
        }
        let mcf = maximal(&f.scaled(c), &cfg).unwrap();
        for (x, y) in mcf.values.iter().zip(&mf.values) {
            prop_assert!((x - c * y).abs() <= 1e-12 * (c * y).max(1e-300));
        }
    }

    #[test]
    fn more_radii_and_finer_centers_never_lower_mf(values in grid_values(144), keep in prop::collection::vec(any::<bool>(), 8)) {
        let shape = square(12);
        let f = GridFunction::new(shape.clone(), values).unwrap();
        let full = MaximalConfig { adaptive_stride: false, ..MaximalConfig::default_for(&shape) };
        let radii: Vec<f64> = full.radii.iter().zip(keep.iter().cycle()).filter(|(_, k)| **k).map(|(r, _)| *r).collect();
        prop_assume!(!radii.is_empty());
        let fewer = MaximalConfig { radii, ..full.clone() };
        let finer = MaximalConfig { center_stride: 1, ..full.clone() };
        let (m_fewer, m_full, m_finer) = (maximal(&f, &fewer).unwrap(), maximal(&f, &full).unwrap(), maximal(&f, &finer).unwrap());
        for i in 0..m_full.len() {
            prop_assert!(m_fewer.values[i] <= m_full.values[i]);
            prop_assert!(m_full.values[i] <= m_finer.values[i]);
        }
    }
}

#[test]
fn modular_and_norm_are_finite_together_under_adec() {
    let shapes = [line(256), GridShape::new(vec![[0.0, 1.0]], vec![256]).unwrap()];
    for phi in convex_catalog(1) {
        let adec = check_adec(&phi, 3.0, TInterval::all(), &SampleSpec::for_phi(&phi)).unwrap();
        assert!(adec.holds, "{} fails aDec_3", phi.spec.kind_name());
        for shape in &shapes {
            let tests = [
                GridFunction::indicator(shape.clone(), &Region::Ball { center: vec![0.5], radius: 0.25 }).unwrap(),
                GridFunction::from_fn(shape.clone(), bump).unwrap(),
                GridFunction::from_fn(shape.clone(), |x| 1.0 / (x[0].abs() + 0.01)).unwrap(),
                GridFunction::constant(shape.clone(), 1e6).unwrap(),
            ];
            for f in &tests {
                let m = modular(&phi, f).unwrap();
                let n = luxemburg_norm(&phi, f).unwrap();
                assert_eq!(m.is_finite(), n.is_finite(), "{}: modular {m}, norm {n}", phi.spec.kind_name());
            }
        }
    }
}

#[test]
fn grid_refinement_moves_smooth_modulars_by_under_one_percent() {
    for phi in convex_catalog(2) {
        let coarse = modular(&phi, &GridFunction::from_fn(square(64), bump).unwrap()).unwrap().to_f64();
        let fine = modular(&phi, &GridFunction::from_fn(square(128), bump).unwrap()).unwrap().to_f64();
        assert!((fine - coarse).abs() < 0.01 * fine, "{}: {coarse} vs {fine}", phi.spec.kind_name());
    }
}

#[test]
fn indicator_norm_matches_power_closed_form() {
    // ‖χ_E‖_{Lᵖ} = |E|^{1/p}
    let shape = GridShape::new(vec![[0.0, 8.0]], vec![1024]).unwrap();
    let f = GridFunction::indicator(shape, &Region::Rect { lower: vec![1.0], upper: vec![4.0] }).unwrap();
    for p in [1.0, 1.5, 2.0, 4.0] {
        let n = luxemburg_norm(&PhiFunction::power(p, 1).unwrap(), &f).unwrap().to_f64();
        assert_relative_eq!(n, 3f64.powf(1.0 / p), max_relative = 1e-8);
    }
}

#[test]
fn one_dimensional_maximal_of_unit_interval_indicator() {
    // M χ_(−1,1)(x) = 2/(x + 1) for x ≥ 1
    let shape = GridShape::new(vec![[-64.0, 64.0]], vec![4096]).unwrap();
    let f = GridFunction::indicator(shape.clone(), &Region::Rect { lower: vec![-1.0], upper: vec![1.0] }).unwrap();
    let mf = maximal(&f, &MaximalConfig::default_for(&shape)).unwrap();
    for i in 0..shape.len() {
        let x = shape.center(i)[0];
        if (2.0..=50.0).contains(&x) {
            let want = 2.0 / (x + 1.0);
            assert!((mf.values[i] - want).abs() <= 0.05 * want, "x = {x}: {} vs {want}", mf.values[i]);
        }
    }
}
