//! Mf ∉ L^φ for Example 3.4: the modular of M χ_B(0,1) grows like ln R.

use genorlicz::gallery::LogFit;
use genorlicz::geometry::Region;
use genorlicz::grid::{GridFunction, GridShape};
use genorlicz::maximal::{maximal, MaximalConfig};
use genorlicz::norms::GridPhi;
use genorlicz::phi_core::PhiFunction;

fn main() -> genorlicz::Result<()> {
    let phi = PhiFunction::example_3_4(2);
    let radii = [4.0, 8.0, 16.0, 32.0];
    let mut modulars = Vec::new();
    for r in radii {
        let shape = GridShape::cube(2, r, (8.0 * r) as usize)?;
        let f = GridFunction::indicator(shape.clone(), &Region::Ball { center: vec![0.0, 0.0], radius: 1.0 })?;
        let mf = maximal(&f, &MaximalConfig::default_for(&shape))?;
        let m = GridPhi::new(&phi, &shape)?.modular(&mf)?.to_f64();
        println!("R = {r:>4}: ∫ φ(x, Mf) = {m:.4}");
        modulars.push(m);
    }
    let fit = LogFit::fit(&radii, &modulars).expect("four points");
    println!("fit: {:.4}·ln R + {:.4}, R² = {:.5}", fit.c1, fit.c0, fit.r_squared);
    Ok(())
}
