//! The constructions that repair growth conditions: gluing a power on a
//! region, capping and repairing an asymptote, and the aInc-restoring ψ.

use genorlicz::conditions::{check_ainc, check_ainc_curve, check_weak_equivalence, SampleSpec, TInterval};
use genorlicz::geometry::{Region, WeightFunction};
use genorlicz::phi_core::{PhiCurve, PhiFunction};
use genorlicz::transforms::{
    prop44_cap, prop44_repair_asymptote, prop44_t1, remark45_asymptotes, thm31_glue, thm47_construct, AsymptotePair,
};

fn main() -> genorlicz::Result<()> {
    // glue t² onto the cusp of Example 3.2 for t ≤ 1
    let ex32 = PhiFunction::example_3_2();
    let spec = SampleSpec::for_phi(&ex32);
    let glued = thm31_glue(&ex32, &Region::unit_cusp(), 2.0, &spec)?;
    let on_g = SampleSpec::new(vec![vec![2.0, 0.0]]).with_t_range(1e-40, 1e4);
    let r = check_ainc(&glued, 1.5, TInterval::all(), &on_g)?;
    println!("glued φ on G: aInc_1.5 holds = {} (a = {})", r.holds, r.value("a"));

    // cap and repair the linear asymptote
    let lin = PhiCurve::power(1.0, 1.0)?;
    let capped = prop44_cap(&lin, 2.0)?;
    println!("capped t: value at 1 = {}, at 3 = {}", capped.eval(1.0), capped.eval(3.0));
    let repaired = prop44_repair_asymptote(&lin, 0.5, 2.0)?;
    let r = check_ainc_curve(&repaired, 2.0, TInterval::all(), &SampleSpec::new(vec![vec![0.0]]))?;
    println!("repaired asymptote: aInc_2 on (0,∞) holds = {}, a = {}", r.holds, r.value("a"));
    for note in &r.notes {
        println!("  {note}");
    }

    // restore aInc for Example 3.5 while staying weakly equivalent
    let ex35 = PhiFunction::example_3_5(2);
    let spec = SampleSpec::for_phi(&ex35);
    let sq = PhiCurve::power(1.0, 2.0)?;
    let h = WeightFunction::RecipPow { shift: 1.0, power: 4.0, scale: 1.0 };
    let t1 = prop44_t1(&ex35, &sq, &spec)?;
    let psi = thm47_construct(&ex35, &AsymptotePair::new(sq, h.clone(), 0.5, 1.0)?, t1)?;
    let inc = check_ainc(&psi, 2.0, TInterval::all(), &spec)?;
    let weak = check_weak_equivalence(&ex35, &psi, 4.0, &h, &spec)?;
    println!("ψ: t₁ = {t1}, aInc_2 holds = {} (a = {:.4}), φ ∼ ψ = {}", inc.holds, inc.value("a"), weak.holds);

    // asymptotes of Example 3.4 from shells
    let ts = [0.01, 0.1, 1.0, 10.0];
    let est = remark45_asymptotes(&PhiFunction::example_3_4(2), &ts, &[1e2, 1e3, 1e4])?;
    for t in ts {
        println!("φ∞⁺({t}) = {:.6}   t² + t = {:.6}", est.plus.value(t), t * t + t);
    }
    Ok(())
}
