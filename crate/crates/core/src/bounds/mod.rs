//! Leaked-information eigenvalues `Ω^(ν)(λ)` for ν = 0, 1, 2 in closed form,
//! the phase-error boundaries they induce, and their entropy-domain
//! support functions.
//!
//! Every phase-error bound here has the form `e_ph ≤ λ·e_b + Ω^(ν)(λ)`;
//! the boundary curve is the lower envelope of those lines over `λ > 0`.

mod boundary;
mod entropy;

use serde::Serialize;

use crate::error::{domain, require_in, require_positive, Error, Result};
use crate::linalg::{cubic_max_real_root, eig_max, find_root, minimize_scalar, Interval, DEFAULT_ROOT_TOL};
use crate::operators::{pi_matrix, pi_ph, BitPattern, BlockConfig, SpectralOracle};

pub use boundary::{
    eph_boundary, sp_eph_boundary, sp_omega, BoundaryCurve, BoundaryPoint, CurveKind, LeakageBound, PhaseErrorBoundary,
    LAMBDA_DOMAIN,
};
pub use entropy::{h_clamped, omega_h, omega_h_with, EntropyBoundary, GAMMA_DOMAIN};

/// Slope beyond which the one-photon plus branch goes negative: `3 + √5`.
pub const ONE_PHOTON_MAX_SLOPE: f64 = 5.236_067_977_499_79;

/// Bit-error rate below which the steepest slope `3 + √5` is optimal for
/// one photon: `(10 - 3√5)/22`.
pub const ONE_PHOTON_KNEE: f64 = 0.149_627_093_977_301_4;

/// Which block family attains an `Ω` value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Restricted blocks with `weight(a) = ν + 1`.
    Plus,
    /// Full blocks with `weight(a) = ν - 1`.
    Minus,
    /// Maximum of both, when the winner is not tracked.
    Combined,
}

/// One evaluated leaked-information eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaValue {
    pub lambda: f64,
    pub nu: usize,
    pub value: f64,
    pub branch: Branch,
    pub plus: Option<f64>,
    pub minus: Option<f64>,
}

/// Zero-photon value `-λ/2`.
pub fn omega0(lambda: f64) -> Result<f64> {
    require_positive("lambda", lambda)?;
    Ok(-0.5 * lambda)
}

/// Plus branch for one photon, `(3 - 2λ + √(1 + 2λ²))/4`; defined for `λ >= 0`.
pub fn omega1_plus(lambda: f64) -> Result<f64> {
    require_in("lambda", lambda, 0.0, f64::MAX, "[0, inf)")?;
    Ok(one_photon_plus(lambda))
}

#[inline]
fn one_photon_plus(lambda: f64) -> f64 {
    (3.0 - 2.0 * lambda + (1.0 + 2.0 * lambda * lambda).sqrt()) / 4.0
}

/// One-photon value: the plus branch up to `3 + √5`, zero beyond.
pub fn omega1(lambda: f64) -> Result<f64> {
    require_positive("lambda", lambda)?;
    if lambda <= ONE_PHOTON_MAX_SLOPE {
        Ok(one_photon_plus(lambda).max(0.0))
    } else {
        Ok(0.0)
    }
}

/// Bit-error rate at which the line of slope `λ'` through the one-photon
/// plus branch meets the line of slope `3 + √5`.
pub fn knee_secant(lambda_prime: f64) -> f64 {
    let s5 = 5f64.sqrt();
    (3.0 - s5 - lambda_prime) / (2.0 * (3.0 - 2.0 * lambda_prime - (1.0 + 2.0 * lambda_prime * lambda_prime).sqrt()))
}

/// Tightest one-photon phase-error bound at bit-error rate `e_b`, capped at 1.
pub fn eph1_bound(e_b: f64) -> Result<f64> {
    require_in("e_b", e_b, 0.0, 0.5, "[0, 1/2]")?;
    if e_b <= ONE_PHOTON_KNEE {
        return Ok((ONE_PHOTON_MAX_SLOPE * e_b).min(1.0));
    }
    let m = minimize_scalar(
        |lambda: f64| lambda * e_b + one_photon_plus(lambda),
        Interval::new(0.0, ONE_PHOTON_MAX_SLOPE)?,
        1e-10,
    )?;
    Ok(m.value.min(1.0))
}

/// Two-photon plus branch for `L >= 4`: a quarter of the largest root of
/// `x³ + (6λ-10)x² + (32-40λ+9λ²)x + (-32+64λ-32λ²+2λ³)`.
pub fn omega2_plus(lambda: f64) -> Result<f64> {
    require_positive("lambda", lambda)?;
    let l = lambda;
    let x = cubic_max_real_root(
        1.0,
        6.0 * l - 10.0,
        32.0 - 40.0 * l + 9.0 * l * l,
        -32.0 + 64.0 * l - 32.0 * l * l + 2.0 * l * l * l,
    )?;
    Ok(x / 4.0)
}

/// Two-photon plus branch for a given block. With three pulses the only
/// weight-3 block is `I - λΠ`, and `Π` has a null vector, so the value is 1.
pub fn omega2_plus_for(cfg: &BlockConfig, lambda: f64) -> Result<f64> {
    require_positive("lambda", lambda)?;
    if cfg.pulses() == 3 {
        Ok(1.0)
    } else {
        omega2_plus(lambda)
    }
}

/// Two-photon minus branch: the single excitation sits on pulse 2.
///
/// For `L <= 4` the other weight-1 labels are compared directly and an
/// error is returned if any of them beats pulse 2.
pub fn omega2_minus(cfg: &BlockConfig, lambda: f64) -> Result<f64> {
    require_positive("lambda", lambda)?;
    let l = cfg.pulses();
    let pi = pi_matrix(cfg).scaled(lambda);
    let block = |k: usize| -> Result<f64> {
        let a = BitPattern::from_ones(l, &[k])?;
        eig_max(&(&pi_ph(cfg, &a)? - &pi))
    };
    let value = block(1)?;
    if l <= 4 {
        for k in (0..l).filter(|&k| k != 1) {
            let other = block(k)?;
            if other > value + 1e-12 {
                return Err(Error::Computation(format!(
                    "L = {l}, lambda = {lambda}: excitation at pulse {} gives {other} > {value}",
                    k + 1
                )));
            }
        }
    }
    Ok(value)
}

/// Two-photon value with the winning branch recorded.
pub fn omega2(cfg: &BlockConfig, lambda: f64) -> Result<OmegaValue> {
    let plus = omega2_plus_for(cfg, lambda)?;
    let minus = omega2_minus(cfg, lambda)?;
    let (value, branch) = if plus > minus {
        (plus, Branch::Plus)
    } else {
        (minus, Branch::Minus)
    };
    Ok(OmegaValue {
        lambda,
        nu: 2,
        value,
        branch,
        plus: Some(plus),
        minus: Some(minus),
    })
}

/// Closed-form `Ω^(ν)(λ)` for `ν ∈ {0, 1, 2}`.
pub fn omega(cfg: &BlockConfig, nu: usize, lambda: f64) -> Result<OmegaValue> {
    match nu {
        0 => Ok(OmegaValue {
            lambda,
            nu,
            value: omega0(lambda)?,
            branch: Branch::Plus,
            plus: Some(-0.5 * lambda),
            minus: None,
        }),
        1 => {
            let plus = omega1_plus(lambda)?;
            let value = omega1(lambda)?;
            Ok(OmegaValue {
                lambda,
                nu,
                value,
                branch: if plus > 0.0 { Branch::Plus } else { Branch::Minus },
                plus: Some(plus),
                minus: Some(0.0),
            })
        }
        2 => omega2(cfg, lambda),
        _ => Err(domain("nu", nu as f64, "{0, 1, 2}")),
    }
}

/// Oracle counterpart of [`omega`] for any prediction model.
pub fn omega_enumerated(oracle: &SpectralOracle, nu: usize, lambda: f64) -> Result<OmegaValue> {
    let l = oracle.config().pulses();
    let plus = if nu < l {
        Some(oracle.omega_plus(lambda, nu)?.value)
    } else {
        None
    };
    let minus = if nu >= 1 {
        Some(oracle.omega_minus(lambda, nu)?.value)
    } else {
        None
    };
    let (value, branch) = match (plus, minus) {
        (Some(p), Some(m)) if p > m => (p, Branch::Plus),
        (_, Some(m)) => (plus.map_or(m, |p| p.max(m)), Branch::Minus),
        (Some(p), None) => (p, Branch::Plus),
        (None, None) => return Err(Error::InvalidInput(format!("no blocks for nu = {nu}"))),
    };
    Ok(OmegaValue {
        lambda,
        nu,
        value,
        branch,
        plus,
        minus,
    })
}

/// Slope where the two-photon branches cross; plus wins below, minus above.
///
/// Located by a sign scan on a log grid over `[1e-3, 1e3]`, then refined by
/// root finding. Three-pulse blocks have no crossing.
pub fn lambda_tilde(cfg: &BlockConfig) -> Result<f64> {
    let gap = |lambda: f64| -> Result<f64> { Ok(omega2_plus_for(cfg, lambda)? - omega2_minus(cfg, lambda)?) };
    let (lo, hi, n) = (1e-3f64.ln(), 1e3f64.ln(), 241);
    let mut prev_lambda = lo.exp();
    let mut prev = gap(prev_lambda)?;
    for k in 1..n {
        let lambda = (lo + (hi - lo) * k as f64 / (n - 1) as f64).exp();
        let cur = gap(lambda)?;
        if prev > 0.0 && cur <= 0.0 {
            return find_root(gap, Interval::new(prev_lambda, lambda)?, DEFAULT_ROOT_TOL);
        }
        prev_lambda = lambda;
        prev = cur;
    }
    Err(Error::Computation(format!(
        "no two-photon branch crossing for L = {} on [1e-3, 1e3]; plus - minus = {prev} at the top end",
        cfg.pulses()
    )))
}

/// Probability weight `p(α, z)` of Alice's Z outcome `z` given the pulse
/// amplitude `α`; overlap `⟨-α|α⟩ = e^{-2α²}`.
pub fn prediction_weight(alpha: f64, z: u8) -> Result<f64> {
    require_positive("alpha", alpha)?;
    let a2 = alpha * alpha;
    let c = (-2.0 * a2).exp();
    let num = match z {
        0 => (1.0 + c) * (1.0 + c),
        // 1 - c without cancellation for small α
        1 => {
            let d = -(-2.0 * a2).exp_m1();
            d * d
        }
        _ => return Err(domain("z", z as f64, "{0, 1}")),
    };
    Ok(num / (2.0 * (1.0 + c * c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let s5 = 5f64.sqrt();
        assert!((ONE_PHOTON_MAX_SLOPE - (3.0 + s5)).abs() < 1e-15);
        assert!((ONE_PHOTON_KNEE - (10.0 - 3.0 * s5) / 22.0).abs() < 1e-16);
        assert!((knee_secant(ONE_PHOTON_MAX_SLOPE) - ONE_PHOTON_KNEE).abs() < 1e-14);
    }

    #[test]
    fn zero_and_one_photon() {
        assert_eq!(omega0(1.0).unwrap(), -0.5);
        assert_eq!(omega0(2.0).unwrap(), -1.0);
        assert!(omega0(0.0).is_err());
        assert!(omega1(ONE_PHOTON_MAX_SLOPE).unwrap().abs() < 1e-12);
        assert!((omega1(1e-9).unwrap() - 1.0).abs() < 1e-8);
        assert!((omega1(1.0).unwrap() - 0.683_012_701_892_219_3).abs() < 1e-15);
        assert_eq!(omega1(6.0).unwrap(), 0.0);
    }

    #[test]
    fn one_photon_bound() {
        assert_eq!(eph1_bound(0.0).unwrap(), 0.0);
        assert!((eph1_bound(0.02).unwrap() - ONE_PHOTON_MAX_SLOPE * 0.02).abs() < 1e-15);
        assert!((eph1_bound(0.2).unwrap() - 0.882_287_565_553_229_5).abs() < 1e-12);
        assert!(eph1_bound(0.6).is_err());
        // continuity across the knee
        let below = eph1_bound(ONE_PHOTON_KNEE).unwrap();
        let above = eph1_bound(ONE_PHOTON_KNEE + 1e-9).unwrap();
        assert!((above - below).abs() < 1e-8);
    }

    #[test]
    fn two_photon_plus() {
        assert!((omega2_plus(1e-12).unwrap() - 1.0).abs() < 1e-6);
        assert!((omega2_plus(1.0).unwrap() - 0.890_388_203_202_207_6).abs() < 1e-12);
        let c3 = BlockConfig::new(3).unwrap();
        assert_eq!(omega2_plus_for(&c3, 7.0).unwrap(), 1.0);
    }

    #[test]
    fn crossover_anchors() {
        let anchors = [
            (4, 8.469_132_818_651_424),
            (5, 9.526_726_314_012_429),
            (10, 10.825_915_895_679_481),
        ];
        for (l, expect) in anchors {
            let t = lambda_tilde(&BlockConfig::new(l).unwrap()).unwrap();
            assert!((t - expect).abs() < 1e-8, "L={l}: {t}");
        }
        assert!(lambda_tilde(&BlockConfig::new(3).unwrap()).is_err());
    }

    #[test]
    fn two_photon_branches() {
        let c = BlockConfig::new(10).unwrap();
        assert_eq!(omega2(&c, 0.5).unwrap().branch, Branch::Plus);
        assert_eq!(omega2(&c, 50.0).unwrap().branch, Branch::Minus);
    }

    #[test]
    fn prediction_weights() {
        for alpha in [0.05, 0.0775, 0.5, 1.0, 3.0] {
            let p0 = prediction_weight(alpha, 0).unwrap();
            let p1 = prediction_weight(alpha, 1).unwrap();
            assert!((p0 + p1 - 1.0).abs() < 1e-15);
            let coth = 1.0 / (alpha * alpha).tanh();
            assert!((p0 / p1 / (coth * coth) - 1.0).abs() < 1e-12);
        }
        assert!(prediction_weight(0.0, 0).is_err());
        assert!(prediction_weight(1.0, 2).is_err());
    }
}
