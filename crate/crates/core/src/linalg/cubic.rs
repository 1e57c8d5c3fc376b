use crate::error::{Error, Result};

/// Largest real root of `c3 x³ + c2 x² + c1 x + c0`.
///
/// Uses the trigonometric form whenever the depressed cubic has three real
/// roots (including the repeated-root boundary) and Cardano otherwise. A
/// repeated largest root snaps to the matching critical point; a simple one
/// gets Newton polish steps on the original polynomial.
pub fn cubic_max_real_root(c3: f64, c2: f64, c1: f64, c0: f64) -> Result<f64> {
    let scale = c3.abs().max(c2.abs()).max(c1.abs()).max(c0.abs());
    if ![c3, c2, c1, c0].iter().all(|c| c.is_finite()) {
        return Err(Error::InvalidInput("cubic coefficients must be finite".into()));
    }
    if c3 == 0.0 || c3.abs() <= 1e-300_f64.max(f64::EPSILON * scale * 1e-6) {
        return Err(Error::InvalidInput(format!(
            "cubic leading coefficient is degenerate: {c3}"
        )));
    }
    let (a, b, c) = (c2 / c3, c1 / c3, c0 / c3);
    // x = t - a/3 turns the monic cubic into t³ + p t + q.
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;

    let t = if p < 0.0 {
        let r = (-p / 3.0).sqrt();
        let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
        let tiny = 64.0 * f64::EPSILON * (q / 2.0).powi(2).max((p / 3.0).powi(3).abs());
        if disc <= tiny {
            // Three real roots (or a double root within rounding).
            let arg = (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0);
            2.0 * r * (arg.acos() / 3.0).cos()
        } else {
            cardano(p, q, disc)
        }
    } else if p == 0.0 {
        (-q).cbrt()
    } else {
        let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
        cardano(p, q, disc)
    };

    let mut x = t - shift;
    let poly = |x: f64| ((x + a) * x + b) * x + c;
    let dpoly = |x: f64| (3.0 * x + 2.0 * a) * x + b;

    // A repeated largest root is a simple root of the derivative, which the
    // quadratic formula resolves to full precision.
    if let Some(xc) = largest_critical_point(a, b) {
        let mag = 1.0 + xc.abs();
        let size = mag.powi(3) + a.abs() * mag * mag + b.abs() * mag + c.abs();
        if (x - xc).abs() <= 1e-4 * mag && poly(xc).abs() <= 1e-13 * size {
            return Ok(xc);
        }
    }

    for _ in 0..4 {
        let fx = poly(x);
        let dfx = dpoly(x);
        if fx == 0.0 || dfx == 0.0 {
            break;
        }
        let step = fx / dfx;
        let next = x - step;
        // Only accept steps that improve the residual; near a double root
        // Newton can wander.
        if !next.is_finite() || poly(next).abs() >= fx.abs() {
            break;
        }
        x = next;
    }
    Ok(x)
}

/// Larger root of `3x² + 2a x + b`, if real.
fn largest_critical_point(a: f64, b: f64) -> Option<f64> {
    let disc = a * a - 3.0 * b;
    if disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    // roots are (-a ± s)/3; pick the stable form for the larger one
    if a <= 0.0 {
        Some((-a + s) / 3.0)
    } else if s - a == 0.0 {
        Some(0.0)
    } else {
        Some(b / (-a - s))
    }
}

fn cardano(p: f64, q: f64, disc: f64) -> f64 {
    let s = disc.max(0.0).sqrt();
    let u = (-q / 2.0 + s).cbrt();
    let v = (-q / 2.0 - s).cbrt();
    let t = u + v;
    if p != 0.0 && u != 0.0 && t.abs() < 1e-8 * u.abs() {
        // cancellation in u + v; use v = -p / (3u)
        u - p / (3.0 * u)
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_root_above_simple() {
        // (x-4)²(x-2)
        let x = cubic_max_real_root(1.0, -10.0, 32.0, -32.0).unwrap();
        assert!((x - 4.0).abs() < 1e-12, "{x}");
    }

    #[test]
    fn double_root_below_simple() {
        // (x-1)²(x-3)
        let x = cubic_max_real_root(1.0, -5.0, 7.0, -3.0).unwrap();
        assert!((x - 3.0).abs() < 1e-12, "{x}");
    }

    #[test]
    fn unit_cube_root() {
        assert!((cubic_max_real_root(1.0, 0.0, 0.0, -1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn triple_root() {
        // (x-2)³
        let x = cubic_max_real_root(1.0, -6.0, 12.0, -8.0).unwrap();
        assert!((x - 2.0).abs() < 1e-12, "{x}");
    }

    #[test]
    fn three_distinct() {
        // 2(x+1)(x-0.5)(x-7)
        let x = cubic_max_real_root(2.0, -13.0, -8.0, 7.0).unwrap();
        assert!((x - 7.0).abs() < 1e-12, "{x}");
    }

    #[test]
    fn single_real_root() {
        // (x-1.5)(x²+x+1)
        let x = cubic_max_real_root(1.0, -0.5, -0.5, -1.5).unwrap();
        assert!((x - 1.5).abs() < 1e-14, "{x}");
    }

    #[test]
    fn degenerate_leading() {
        assert!(cubic_max_real_root(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(cubic_max_real_root(f64::NAN, 1.0, 1.0, 1.0).is_err());
    }
}
