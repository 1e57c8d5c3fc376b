use super::{Interval, ScalarOutput};
use crate::error::{Error, Result};

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

const MAX_ITER: usize = 400;

/// Brent's method on a sign-changing bracket.
///
/// Returns as soon as `|f(x)| <= tol` or the bracket shrinks below `tol`.
/// Every step that fails to halve the bracket is replaced by bisection, so
/// convergence is guaranteed for continuous `f`.
pub fn find_root<F, R>(mut f: F, bracket: Interval, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> R,
    R: ScalarOutput,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "root tolerance must be positive, got {tol}"
        )));
    }
    let mut eval = |x: f64| -> Result<f64> {
        let y = f(x).into_result()?;
        if y.is_nan() {
            return Err(Error::InvalidInput(format!("function returned NaN at x = {x}")));
        }
        Ok(y)
    };

    let (mut a, mut b) = (bracket.lo(), bracket.hi());
    let (mut fa, mut fb) = (eval(a)?, eval(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let m = 0.5 * (c - b);
        if fb.abs() <= tol || m.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(m) };
        fb = eval(b)?;
    }
    Err(Error::Computation(format!(
        "root finder exhausted {MAX_ITER} iterations near x = {b}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn linear() {
        let x = find_root(|x| x - 1.0, iv(0.0, 2.0), 1e-12).unwrap();
        assert!((x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosh_ratio_inverse() {
        let w = 0.6;
        let x = find_root(|x: f64| (2.0 * x).cosh() - 2.0 * w * x.cosh(), iv(0.0, 2.0), 1e-14).unwrap();
        assert!(((2.0 * x).cosh() / (2.0 * x.cosh()) - w).abs() < 1e-12);
    }

    #[test]
    fn endpoint_root() {
        assert_eq!(find_root(|x| x, iv(0.0, 1.0), 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn no_sign_change() {
        let err = find_root(|x| x * x + 1.0, iv(-1.0, 1.0), 1e-12).unwrap_err();
        assert!(matches!(err, Error::Bracket { .. }));
    }

    #[test]
    fn discontinuous_still_terminates() {
        let x = find_root(|x: f64| if x < 0.3 { -1.0 } else { 1.0 }, iv(0.0, 1.0), 1e-12).unwrap();
        assert!((x - 0.3).abs() < 1e-11);
    }

    #[test]
    fn fallible_closure() {
        let x = find_root(|x: f64| -> Result<f64> { Ok(x.powi(3) - 8.0) }, iv(0.0, 5.0), 1e-13).unwrap();
        assert!((x - 2.0).abs() < 1e-12);
        let err = find_root(
            |_| -> Result<f64> { Err(Error::Computation("boom".into())) },
            iv(0.0, 1.0),
            1e-12,
        );
        assert!(err.is_err());
    }
}
