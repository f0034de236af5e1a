//! Modulars, Luxemburg norms, conjugate norms, ball norms and duality on grids.

use genorlicz::geometry::{Domain, Region};
use genorlicz::grid::{GridFunction, GridShape};
use genorlicz::norms::{ball_norm_check, duality_lower_bound, luxemburg_norm, luxemburg_norm_conjugate, modular};
use genorlicz::phi_core::{make_family, PhiFunction};
use serde_json::json;

fn main() -> genorlicz::Result<()> {
    let shape = GridShape::new(vec![[0.0, 8.0]], vec![512])?;
    let f = GridFunction::indicator(shape.clone(), &Region::Rect { lower: vec![0.0], upper: vec![4.0] })?;
    for p in [1.0, 2.0, 3.0] {
        let phi = PhiFunction::power(p, 1)?;
        println!("‖χ_[0,4]‖ in L^{p} = {} (closed form {:.10})", luxemburg_norm(&phi, &f)?, 4f64.powf(1.0 / p));
    }

    let dp = make_family(
        "double_phase",
        json!({ "p": 1.5, "q": 2.5, "a": { "field": "poly", "coefs": [0.0, 1.0] } }),
        Domain::open_box(vec![[0.0, 8.0]]),
    )?;
    let g = GridFunction::from_fn(shape.clone(), |x| (-(x[0] - 3.0).powi(2)).exp())?;
    println!("double phase: modular = {}, norm = {}", modular(&dp, &g)?, luxemburg_norm(&dp, &g)?);

    let sq = PhiFunction::power(2.0, 1)?;
    let half = g.scaled(0.5 / luxemburg_norm_conjugate(&sq, &g)?.to_f64());
    let d = duality_lower_bound(&sq, &f, &half)?;
    println!(
        "∫fg = {:.5}, ‖f‖ = {}, ‖g‖* = {}, C = ∫fg/‖f‖ = {:.5} (Young bound {}, holds = {})",
        d.integral, d.norm_f, d.norm_g_conjugate, d.constant, d.young_bound, d.holds
    );

    let plane = GridShape::cube(2, 1.0, 128)?;
    let b = ball_norm_check(&PhiFunction::example_3_4(2), &[0.0, 0.0], 0.5, &plane, &[vec![0.0, 0.0], vec![0.2, 0.1]])?;
    println!("‖χ_B‖ / (1/φ⁻¹(y, 1/|B|)) ∈ [{:.4}, {:.4}]", b.ratio_min, b.ratio_max);
    Ok(())
}
