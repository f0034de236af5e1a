//! Constant extraction by dyadic ladder plus bisection.

/// Largest `β ∈ (0, 1]` satisfying a predicate that is monotone (true for all
/// smaller β once true), to `bisections` halvings after the ladder.
pub fn largest_passing(mut pred: impl FnMut(f64) -> bool, floor: f64, bisections: usize) -> Option<f64> {
    if pred(1.0) {
        return Some(1.0);
    }
    let mut fail = 1.0;
    let mut pass = 0.5;
    loop {
        if pass < floor {
            return None;
        }
        if pred(pass) {
            break;
        }
        fail = pass;
        pass *= 0.5;
    }
    for _ in 0..bisections {
        let mid = 0.5 * (pass + fail);
        if pred(mid) {
            pass = mid;
        } else {
            fail = mid;
        }
    }
    Some(pass)
}

/// Smallest `L ≥ 1` satisfying a predicate monotone in `L`, up to `ceiling`.
pub fn least_passing(mut pred: impl FnMut(f64) -> bool, ceiling: f64, bisections: usize) -> Option<f64> {
    largest_passing(|beta| pred(1.0 / beta), 1.0 / ceiling, bisections).map(|b| 1.0 / b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_threshold() {
        let b = largest_passing(|b| b <= 0.3, 1e-12, 60).unwrap();
        assert!((b - 0.3).abs() < 1e-12);
        assert_eq!(largest_passing(|_| true, 1e-12, 60), Some(1.0));
        assert_eq!(largest_passing(|_| false, 1e-6, 60), None);
        let l = least_passing(|l| l >= 3.0, 1e6, 60).unwrap();
        assert!((l - 3.0).abs() < 1e-9);
    }
}
