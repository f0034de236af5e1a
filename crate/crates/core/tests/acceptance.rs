//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use genorlicz::conditions::{
    check_a0, check_a1prime, check_a2, check_ainc, check_ainc_curve, check_weak_equivalence, lemma24_backward,
    lemma24_forward, lemma25_enlarge, Enlarge, SampleSpec, TInterval,
};
use genorlicz::geometry::{Region, WeightFunction};
use genorlicz::grid::{GridFunction, GridShape};
use genorlicz::maximal::{maximal, norm_ratio_series, MaximalConfig};
use genorlicz::norms::{luxemburg_norm, modular, GridPhi};
use genorlicz::phi_core::{make_family, Conjugate, MonotoneFunction, PhiCurve, PhiFunction};
use genorlicz::transforms::{prop44_repair_asymptote, prop44_t1, thm47_construct, thm47_exponent, AsymptotePair};
use genorlicz::Extended;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Cell size shared by the 2D experiments, so larger R means more cells, not coarser ones.
const H2: f64 = 0.25;

fn square_grid(r: f64) -> GridShape {
    GridShape::cube(2, r, (2.0 * r / H2).round() as usize).unwrap()
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in [1.5, 2.0, 3.0] {
        let c = lemma24_forward(1.0, p).map_err(|e| e.to_string())?;
        for &t in &[1e-3f64, 0.37, 1.0, 2.5, 1e3] {
            let lhs = 2.0 * c * t.powf(p);
            let rhs = (c * t).powf(p);
            worst = worst.max((lhs - rhs).abs() / rhs);
        }
        let back = lemma24_backward(c).map_err(|e| e.to_string())?;
        ensure((back - p).abs() < 1e-12, || format!("round trip p = {p} gave {back}"))?;
    }
    ensure(worst < 1e-12, || format!("relative error {worst:e}"))?;
    Ok(format!("max relative error {worst:.1e}"))
}

fn criterion_2() -> Outcome {
    let phi = PhiFunction::example_3_4(2);
    let spec = SampleSpec::for_phi(&phi);
    let base = check_ainc(&phi, 2.0, TInterval::from(1.0), &spec).map_err(|e| e.to_string())?;
    let a = base.value("a");
    ensure(base.holds && a <= 2.0 + 1e-9, || format!("aInc_2 on [1, ∞) gave a = {a}"))?;
    let enlarged = lemma25_enlarge(2.0, 2.0, 0.25, 1.0, Enlarge::Lower).map_err(|e| e.to_string())?;
    ensure((enlarged - 16.0).abs() < 1e-12, || format!("a' = {enlarged}"))?;
    let wide = check_ainc(&phi, 2.0, TInterval::from(0.25), &spec).map_err(|e| e.to_string())?;
    let a_wide = wide.value("a");
    ensure(wide.holds && a_wide <= enlarged, || format!("sampled constant {a_wide} exceeds {enlarged}"))?;
    Ok(format!("a = {a:.4} on [1,∞); sampled {a_wide:.4} ≤ {enlarged} on [1/4,∞)"))
}

fn criterion_3() -> Outcome {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for p in [1.5, 2.0, 3.0] {
        let curve = PhiCurve::power(1.0, p).unwrap();
        let conj = Conjugate(&curve);
        // closed-form oracle: (t^p)* = (p−1) p^{−p'} t^{p'} with p' = p/(p−1)
        let q = p / (p - 1.0);
        let coef = (p - 1.0) * p.powf(-q);
        for k in 0..=60 {
            let tau = 10f64.powf(-3.0 + 6.0 * k as f64 / 60.0);
            let inv_conj = conj.numeric_inverse(tau);
            let oracle = (tau / coef).powf(1.0 / q);
            ensure((inv_conj - oracle).abs() < 1e-6 * oracle, || format!("p = {p}, τ = {tau}: {inv_conj} vs {oracle}"))?;
            let r = curve.inverse(tau) * inv_conj / tau;
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    // p = 2 attains the upper bracket exactly, so compare up to the numeric inverse tolerance
    let tol = 1e-8;
    ensure(lo >= 0.5 * (1.0 - tol) && hi <= 2.0 * (1.0 + tol), || format!("ratio range [{lo}, {hi}]"))?;
    Ok(format!("ratio range [{lo:.4}, {hi:.4}]"))
}

fn cusp_points() -> Vec<Vec<f64>> {
    vec![vec![1.5, 0.0], vec![2.0, 0.1], vec![3.0, -0.05], vec![6.0, 0.0]]
}

fn example_3_2_family() -> Vec<GridFunction> {
    let shape = square_grid(8.0);
    let ball = |c: [f64; 2], r: f64| Region::Ball { center: c.to_vec(), radius: r };
    let rect = |l: [f64; 2], u: [f64; 2]| Region::Rect { lower: l.to_vec(), upper: u.to_vec() };
    let regions = [
        ball([0.0, 0.0], 1.0),
        ball([0.0, 0.0], 0.5),
        ball([3.0, 0.0], 1.0),
        ball([2.0, 0.0], 0.5),
        ball([-2.0, 2.0], 1.5),
        ball([5.0, 0.0], 2.0),
        ball([1.0, 1.0], 0.3),
        rect([1.0, -0.25], [4.0, 0.25]),
        rect([-1.0, -1.0], [1.0, 1.0]),
        rect([0.0, 0.0], [2.0, 1.0]),
    ];
    regions.iter().map(|r| GridFunction::indicator(shape.clone(), r).unwrap()).collect()
}

/// Re-embed a function given on `[−8, 8]²` into the larger grid `[−R, R]²` (zero outside).
fn embed(f: &GridFunction, r: f64) -> GridFunction {
    let shape = square_grid(r);
    let src = &f.shape;
    let n_src = src.resolution[0];
    let n = shape.resolution[0];
    let off = (n - n_src) / 2;
    let mut values = vec![0.0; shape.len()];
    for i in 0..n_src {
        for j in 0..n_src {
            values[(i + off) * n + j + off] = f.values[i * n_src + j];
        }
    }
    GridFunction::new(shape, values).unwrap()
}

fn criterion_4() -> Outcome {
    let phi = PhiFunction::example_3_2();
    let spec = SampleSpec::for_phi(&phi);
    let a0 = check_a0(&phi, &spec).map_err(|e| e.to_string())?;
    ensure(a0.holds && a0.value("beta") == 1.0, || format!("A0 β = {}", a0.value("beta")))?;
    let a1 = check_a1prime(&phi, &spec).map_err(|e| e.to_string())?;
    ensure(a1.holds && (a1.value("beta") - 1.0).abs() < 1e-9, || format!("A1' β = {}", a1.value("beta")))?;
    let sq = PhiCurve::power(1.0, 2.0).unwrap();
    let h = WeightFunction::Indicator { region: Region::unit_cusp() };
    let a2 = check_a2(&phi, &sq, &h, 1.0, 1.0, &spec).map_err(|e| e.to_string())?;
    ensure(a2.holds, || format!("A2 violated at {:?}", a2.worst_witness))?;
    let on_g = SampleSpec::new(cusp_points()).with_t_range(1e-80, 1e4);
    let mut min_ratio = f64::INFINITY;
    for p in [1.1, 1.5, 2.0] {
        let r = check_ainc(&phi, p, TInterval::up_to(1.0), &on_g).map_err(|e| e.to_string())?;
        let sampled = r.value("a_sampled");
        ensure(!r.holds && sampled > 1e6, || format!("aInc_{p} on G×(0,1]: holds = {}, sampled {sampled:e}", r.holds))?;
        min_ratio = min_ratio.min(sampled);
    }
    let family = example_3_2_family();
    let mut series = Vec::new();
    for r in [8.0, 16.0, 32.0] {
        let cases: Vec<(f64, GridFunction)> = family.iter().map(|f| (r, embed(f, r))).collect();
        let rep = norm_ratio_series(&phi, &cases, MaximalConfig::default_for).map_err(|e| e.to_string())?;
        series.push(rep.ratios.iter().map(|q| q.ratio.unwrap().to_f64()).collect::<Vec<f64>>());
    }
    let mut worst_dev: f64 = 0.0;
    for k in 0..family.len() {
        let vals: Vec<f64> = series.iter().map(|s| s[k]).collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        for v in &vals {
            worst_dev = worst_dev.max((v - mean).abs() / mean);
        }
    }
    ensure(worst_dev <= 0.2, || format!("ratios drift by {:.1}% across R", 100.0 * worst_dev))?;
    let max_ratio = series.iter().flatten().copied().fold(0.0, f64::max);
    Ok(format!(
        "A0/A1'/A2 hold; aInc sampled ratio ≥ {min_ratio:.1e}; max ‖Mf‖/‖f‖ = {max_ratio:.3}, drift {:.1}%",
        100.0 * worst_dev
    ))
}

fn example_3_4_growth() -> Result<Vec<(f64, f64, f64)>, String> {
    let phi = PhiFunction::example_3_4(2);
    let mut out = Vec::new();
    for r in [8.0, 16.0, 32.0, 64.0] {
        let shape = square_grid(r);
        let f = GridFunction::indicator(shape.clone(), &Region::Ball { center: vec![0.0, 0.0], radius: 1.0 }).unwrap();
        let mf = maximal(&f, &MaximalConfig::default_for(&shape)).map_err(|e| e.to_string())?;
        let gp = GridPhi::new(&phi, &shape).map_err(|e| e.to_string())?;
        let m = gp.modular(&mf).map_err(|e| e.to_string())?.to_f64();
        let ratio = gp.luxemburg(&mf).map_err(|e| e.to_string())?.to_f64() / gp.luxemburg(&f).map_err(|e| e.to_string())?.to_f64();
        out.push((r, m, ratio));
    }
    Ok(out)
}

fn criterion_5() -> Outcome {
    let pts = example_3_4_growth()?;
    // least squares of modular against ln R
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let c1 = sxy / sxx;
    let c0 = my - c1 * mx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - c1 * x - c0).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r2 = 1.0 - ss_res / ss_tot;
    ensure(c1 > 0.0 && r2 >= 0.98, || format!("fit c₁ = {c1}, R² = {r2}"))?;
    let increasing = pts.windows(2).all(|w| w[1].2 > w[0].2);
    ensure(increasing, || format!("norm ratios {:?}", pts.iter().map(|p| p.2).collect::<Vec<_>>()))?;
    Ok(format!(
        "modular ≈ {c1:.3}·ln R + {c0:.3} (R² = {r2:.4}); ratios {}",
        pts.iter().map(|p| format!("{:.3}", p.2)).collect::<Vec<_>>().join(" < ")
    ))
}

fn criterion_6() -> Outcome {
    let r = 32.0;
    let shape = square_grid(r);
    let f = GridFunction::indicator(shape.clone(), &Region::Ball { center: vec![0.0, 0.0], radius: 1.0 }).unwrap();
    let mf = maximal(&f, &MaximalConfig::default_for(&shape)).map_err(|e| e.to_string())?;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for (i, c) in shape.centers().iter().enumerate() {
        let d = c[0].hypot(c[1]);
        if (2.0..=r / 2.0).contains(&d) {
            let v = mf.values[i] * (d + 1.0).powi(2);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    ensure(lo >= 0.125 && hi <= 8.0, || format!("Mf·(|x|+1)² ranges over [{lo}, {hi}]"))?;
    Ok(format!("Mf(x)·(|x|+1)² ∈ [{lo:.3}, {hi:.3}]"))
}

fn criterion_7() -> Outcome {
    let phi = PhiFunction::example_3_5(2);
    let spec = SampleSpec::for_phi(&phi);
    let sq = PhiCurve::power(1.0, 2.0).unwrap();
    let h = WeightFunction::RecipPow { shift: 1.0, power: 4.0, scale: 1.0 };
    let beta2 = 0.5;
    let a2 = check_a2(&phi, &sq, &h, 1.0, 1.0, &spec).map_err(|e| e.to_string())?;
    ensure(a2.holds, || "A2 of φ itself fails".into())?;
    let t1 = prop44_t1(&phi, &sq, &spec).map_err(|e| e.to_string())?;
    let pair = AsymptotePair::new(sq.clone(), h.clone(), beta2, 1.0).map_err(|e| e.to_string())?;
    let psi = thm47_construct(&phi, &pair, t1).map_err(|e| e.to_string())?;
    let p = thm47_exponent(&phi, &pair, t1, 100.0, &spec).map_err(|e| e.to_string())?.ok_or("no exponent")?;
    ensure(p > 1.0, || format!("exponent {p}"))?;
    let ainc = check_ainc(&psi, p, TInterval::all(), &spec).map_err(|e| e.to_string())?;
    ensure(ainc.holds && ainc.value("a") <= 100.0, || format!("aInc_{p}: a = {}", ainc.value("a")))?;
    let a0 = check_a0(&psi, &spec).map_err(|e| e.to_string())?;
    let a1 = check_a1prime(&psi, &spec).map_err(|e| e.to_string())?;
    ensure(a0.holds && a1.holds, || "A0 or A1' fails for ψ".into())?;
    let asym = sq.scale_argument(beta2).unwrap();
    let level = asym.value(t1);
    let a2_psi = check_a2(&psi, &asym, &WeightFunction::Zero, 1.0, level, &spec).map_err(|e| e.to_string())?;
    ensure(a2_psi.holds, || format!("A2 for ψ violated at {:?}", a2_psi.worst_witness))?;
    let weak = check_weak_equivalence(&phi, &psi, 1.0 / (beta2 * beta2), &h, &spec).map_err(|e| e.to_string())?;
    ensure(weak.holds, || format!("weak equivalence violated at {:?}", weak.worst_witness))?;
    Ok(format!(
        "t₁ = {t1}, p = {p:.4}, a = {:.3}; A0 β = {:.3}, A1' β = {:.3}, A2 (s = {level}) and φ ∼ ψ (L = 4) hold",
        ainc.value("a"),
        a0.value("beta"),
        a1.value("beta")
    ))
}

fn criterion_8() -> Outcome {
    let lin = PhiCurve::power(1.0, 1.0).unwrap();
    let repaired = prop44_repair_asymptote(&lin, 0.5, 2.0).map_err(|e| e.to_string())?;
    for k in 0..=50 {
        let t = 0.5 * k as f64 / 50.0;
        ensure(repaired.value(t) == lin.value(t), || format!("differs from φ∞ at t = {t}"))?;
    }
    let spec = SampleSpec::new(vec![vec![0.0]]);
    let r = check_ainc_curve(&repaired, 2.0, TInterval::all(), &spec).map_err(|e| e.to_string())?;
    let a = r.value("a");
    ensure(r.holds && a <= 4.0, || {
        format!("aInc_2 on (0,∞): a = {a}, sampled {:.3e}; {}", r.value("a_sampled"), r.notes.join("; "))
    })?;
    Ok(format!("equal on [0, t₁]; a = {a:.3}"))
}

fn criterion_9() -> Outcome {
    let phi = PhiFunction::example_4_6();
    let mut consts = Vec::new();
    for eps in [0.25, 0.5] {
        let lim = 2.0 - eps;
        let xs: Vec<Vec<f64>> = (0..=40)
            .map(|k| vec![-lim * (1.0 - 1e-12) + 2.0 * lim * (1.0 - 1e-12) * k as f64 / 40.0])
            .collect();
        let spec = SampleSpec::new(xs).with_t_range(1e-100, 1e4);
        let r = check_ainc(&phi, 1.0 + eps, TInterval::all(), &spec).map_err(|e| e.to_string())?;
        ensure(r.holds && r.value("a") <= 10.0, || format!("ε = {eps}: a = {}", r.value("a")))?;
        consts.push(r.value("a"));
    }
    let mut xs: Vec<Vec<f64>> = (1..=30).flat_map(|k| {
        let d = 2f64.powi(-k);
        [vec![2.0 - d], vec![-2.0 + d]]
    }).collect();
    xs.push(vec![0.0]);
    let spec = SampleSpec::new(xs).with_t_range(1e-100, 1e4);
    let mut sampled = Vec::new();
    for p in [1.05, 1.1] {
        let r = check_ainc(&phi, p, TInterval::all(), &spec).map_err(|e| e.to_string())?;
        let s = r.value("a_sampled");
        ensure(!r.holds && s > 1e3, || format!("aInc_{p} on Ω: holds = {}, sampled {s:e}", r.holds))?;
        sampled.push(s);
    }
    Ok(format!("Ω_ε constants {consts:?}; on Ω sampled ratios {:.2e}, {:.2e}", sampled[0], sampled[1]))
}

fn criterion_10() -> Outcome {
    let shape = GridShape::new(vec![[0.0, 8.0]], vec![512]).unwrap();
    let mut worst: f64 = 0.0;
    for p in [1.0, 2.0, 3.0] {
        let phi = PhiFunction::power(p, 1).unwrap();
        for e in [0.25, 1.0, 4.0] {
            let f = GridFunction::indicator(shape.clone(), &Region::Rect { lower: vec![0.0], upper: vec![e] }).unwrap();
            let n = luxemburg_norm(&phi, &f).map_err(|e| e.to_string())?.to_f64();
            let want = f64::powf(e, 1.0 / p);
            worst = worst.max((n - want).abs() / want);
        }
    }
    ensure(worst < 1e-3, || format!("closed-form error {worst:e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let small = GridShape::new(vec![[-3.0, 3.0]], vec![256]).unwrap();
    for k in 0..50 {
        let phi = random_instance(&mut rng);
        let (a, b, c) = (rng.gen_range(0.2..3.0), rng.gen_range(-2.0..2.0), rng.gen_range(0.1..2.0));
        let f = GridFunction::from_fn(small.clone(), |x| a * (-(x[0] - b).powi(2) / c).exp()).unwrap();
        let gp = GridPhi::new(&phi, &small).map_err(|e| e.to_string())?;
        let n = gp.luxemburg(&f).map_err(|e| e.to_string())?.to_f64();
        for s in [0.5, 2.0, 10.0] {
            let ns = gp.luxemburg(&f.scaled(s)).map_err(|e| e.to_string())?.to_f64();
            ensure((ns - s * n).abs() <= 1e-6 * s * n, || format!("instance {k}: ‖{s}f‖ = {ns} vs {}", s * n))?;
        }
        let unit = f.scaled(1.0 / n);
        let m = gp.modular(&unit).map_err(|e| e.to_string())?;
        ensure(m <= Extended::Finite(1.0 + 1e-4), || format!("instance {k}: modular of f/‖f‖ = {m}"))?;
        ensure(modular(&phi, &f).is_ok(), || "modular failed".into())?;
    }
    Ok(format!("closed-form error {worst:.1e}; 50 random instances homogeneous and unit-ball consistent"))
}

fn random_instance(rng: &mut ChaCha8Rng) -> PhiFunction {
    use serde_json::json;
    let domain = genorlicz::geometry::Domain::whole(1);
    match rng.gen_range(0..5) {
        0 => PhiFunction::power(rng.gen_range(1.0..4.0), 1).unwrap(),
        1 => {
            let p = rng.gen_range(1.0..2.5);
            let q = p + rng.gen_range(0.0..2.0);
            let a = json!({"field": "poly", "coefs": [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]});
            make_family("double_phase", json!({"p": p, "q": q, "a": a}), domain).unwrap()
        }
        2 => {
            let lo = rng.gen_range(1.1..2.0);
            let hi = lo + rng.gen_range(0.0..1.5);
            let p = json!({"field": "piecewise_linear", "coordinate": {"axis": 0}, "knots": [[-3.0, lo], [3.0, hi]]});
            make_family("variable_exponent", json!({"p": p}), domain).unwrap()
        }
        3 => PhiFunction::example_3_4(1),
        _ => PhiFunction::example_3_5(1),
    }
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "doubling constants round trip", criterion_1),
        (2, "range enlargement constant", criterion_2),
        (3, "inverse times conjugate inverse", criterion_3),
        (4, "Example 3.2 bundle", criterion_4),
        (5, "Example 3.4 divergence growth", criterion_5),
        (6, "Example 3.4 maximal asymptotics", criterion_6),
        (7, "construction on Example 3.5", criterion_7),
        (8, "repaired asymptote aInc_2", criterion_8),
        (9, "Example 4.6 interior vs whole domain", criterion_9),
        (10, "norm sanity", criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (n, name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| *f == n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS  {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name} ({secs:.1}s): {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
