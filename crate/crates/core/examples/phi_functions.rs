//! Build Φ-functions from the catalog, evaluate them, invert them, and
//! round-trip them through JSON.

use genorlicz::geometry::Domain;
use genorlicz::phi_core::{make_family, MonotoneFunction, PhiCurve, PhiFunction};
use serde_json::json;

fn main() -> genorlicz::Result<()> {
    let sq = PhiCurve::power(1.0, 2.0)?;
    println!("t²: φ(3) = {}, φ⁻¹(9) = {}, φ*(4) = {}", sq.value(3.0), sq.inverse(9.0), sq.conjugate(4.0));

    let ex = PhiFunction::example_3_4(2);
    for x in [[0.0, 0.0], [10.0, 0.0]] {
        let t = 0.1;
        println!("example 3.4 at x = {x:?}: φ(x, {t}) = {}, φ⁻¹(x, 1) = {:.6}", ex.eval(&x, t)?, ex.inverse(&x, 1.0)?);
    }

    // a variable exponent rising from 1.5 to 3 along the first axis
    let vexp = make_family(
        "variable_exponent",
        json!({ "p": { "field": "piecewise_linear", "coordinate": { "axis": 0 }, "knots": [[-1.0, 1.5], [1.0, 3.0]] } }),
        Domain::interval(-1.0, 1.0),
    )?;
    let c = vexp.curve_at(&[0.5])?;
    println!("variable exponent at x = 0.5: φ(2) = {:.6} (2^2.625 = {:.6})", c.value(2.0), 2f64.powf(2.625));
    println!("numeric inverse of its conjugate at 1: {:.6}", genorlicz::phi_core::Conjugate(&c).numeric_inverse(1.0));

    let text = vexp.to_json();
    let back = PhiFunction::from_json(&text)?;
    assert_eq!(back, vexp);
    println!("JSON round trip ok:\n{text}");

    match PhiFunction::from_json(r#"{"kind": "power", "params": {"exponent": "two"}, "domain": {"dim": 1}}"#) {
        Err(e) => println!("rejected as expected: {e}"),
        Ok(_) => unreachable!("a string exponent must not parse"),
    }
    Ok(())
}
