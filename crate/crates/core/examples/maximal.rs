//! The discrete non-centered maximal function and operator-norm estimates.

use genorlicz::geometry::Region;
use genorlicz::grid::{GridFunction, GridShape};
use genorlicz::maximal::{maximal, operator_norm_estimate, MaximalConfig};
use genorlicz::phi_core::PhiFunction;

fn main() -> genorlicz::Result<()> {
    // 1D: for χ_(−1,1) the maximal function is 2/(|x|+1) outside the interval
    let line = GridShape::new(vec![[-64.0, 64.0]], vec![4096])?;
    let f = GridFunction::indicator(line.clone(), &Region::Rect { lower: vec![-1.0], upper: vec![1.0] })?;
    let mf = maximal(&f, &MaximalConfig::default_for(&line))?;
    for x in [2.0, 5.0, 20.0, 50.0] {
        let i = ((x + 64.0) / 128.0 * 4096.0) as usize;
        let c = line.center(i)[0];
        println!("Mf({c:.3}) = {:.5}   2/(|x|+1) = {:.5}", mf.values[i], 2.0 / (c.abs() + 1.0));
    }

    // 2D: operator-norm estimate for t² over a few balls
    let plane = GridShape::cube(2, 8.0, 64)?;
    let family: Vec<GridFunction> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&r| GridFunction::indicator(plane.clone(), &Region::Ball { center: vec![0.0, 0.0], radius: r }))
        .collect::<genorlicz::Result<_>>()?;
    let rep = operator_norm_estimate(&PhiFunction::power(2.0, 2)?, &family, &MaximalConfig::default_for(&plane))?;
    println!("max ‖Mf‖/‖f‖ over {} balls in L²: {} (argmax {:?})", family.len(), rep.max_ratio, rep.argmax);
    Ok(())
}
