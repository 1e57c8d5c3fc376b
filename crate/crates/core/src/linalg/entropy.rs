use crate::error::{domain, Result};

/// Binary Shannon entropy in bits, `h(0) = h(1) = 0`.
///
/// Evaluated as `g(x) + g(1 - x)` with `g(p) = -p log₂ p`, so
/// `h(x) == h(1 - x)` holds bit-for-bit whenever `1 - (1 - x) == x`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("x", x, "[0, 1]"));
    }
    let y = 1.0 - x;
    // sum the smaller term first so both orderings round the same way
    let (s, l) = if x <= y { (x, y) } else { (y, x) };
    Ok(term(s) + term(l))
}

#[inline]
fn term(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let h = binary_entropy(0.02).unwrap();
        assert!((h - 0.141_440_542_541_820_64).abs() < 1e-15);
    }

    #[test]
    fn domain() {
        assert!(binary_entropy(-1e-12).is_err());
        assert!(binary_entropy(1.0 + 1e-12).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }
}
