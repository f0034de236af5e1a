//! Run the structural condition checkers on Example 3.4 and print a table.

use genorlicz::conditions::{check_a0, check_a1, check_a2, check_adec, check_ainc, SampleSpec, TInterval};
use genorlicz::geometry::WeightFunction;
use genorlicz::phi_core::{PhiCurve, PhiFunction};

fn main() -> genorlicz::Result<()> {
    let phi = PhiFunction::example_3_4(2);
    let spec = SampleSpec::for_phi(&phi).with_seed(1);
    let lin = PhiCurve::power(1.0, 1.0)?;
    let reports = [
        check_a0(&phi, &spec)?,
        check_a1(&phi, &spec)?,
        check_a2(&phi, &lin, &WeightFunction::Zero, 0.5, 1.0, &spec)?,
        check_ainc(&phi, 2.0, TInterval::from(1.0), &spec)?,
        check_ainc(&phi, 1.5, TInterval::up_to(1.0), &spec.clone().with_t_range(1e-40, 1e4))?,
        check_adec(&phi, 2.0, TInterval::all(), &spec)?,
    ];
    for r in &reports {
        println!("{}", r.table_row());
    }
    let failing = &reports[4];
    if let Some(w) = &failing.worst_witness {
        println!("aInc_1.5 near 0: worst pair at x = {:?}, t = {:e}, s = {:?}", w.x, w.t, w.s);
    }
    Ok(())
}
