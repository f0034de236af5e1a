//! Constants relating almost increasing growth to doubling-type inequalities.

use genorlicz::conditions::{lemma24_backward, lemma24_forward, lemma25_enlarge, Enlarge};

fn main() -> genorlicz::Result<()> {
    for p in [1.5, 2.0, 3.0] {
        let c = lemma24_forward(1.0, p)?;
        let back = lemma24_backward(c)?;
        println!("p = {p}: c = {c:.6}, 2c·t^p = (ct)^p, recovered p = {back}");
    }
    let a = lemma25_enlarge(2.0, 2.0, 0.25, 1.0, Enlarge::Lower)?;
    println!("aInc_2 with a = 2 on [1,∞) extends to [1/4,∞) with a' = {a}");
    let a = lemma25_enlarge(2.0, 2.0, 1.0, 4.0, Enlarge::Upper)?;
    println!("aInc_2 with a = 2 on (0,1] extends to (0,4] with a' = {a}");
    Ok(())
}
