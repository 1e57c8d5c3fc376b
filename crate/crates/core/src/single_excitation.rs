//! Exact eigen-solution of `ph(a) - λΠ` when `a` has a single set bit.
//!
//! Rows are labelled by centered indices `j ∈ {-(L-1)/2, …, (L-1)/2}`, which
//! are half-integers for even `L`. Internally a centered index is stored
//! doubled (`J = 2j`) so it stays an integer; [`centered_to_position`] and
//! [`position_to_centered`] convert to 1-based pulse positions.
//!
//! For an excitation at centered index `m`, an ansatz vector built from
//! hyperbolic cosines is an eigenvector with eigenvalue `(λ/2)(cosh x - 1)`
//! exactly when `x` is a root of the secular function [`secular`]. Taking
//! the largest root and comparing across `m` shows that an excitation next to
//! the block edge leaks the most.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, require_in, require_positive, Error, Result};
use crate::linalg::{eig_max, eig_pairs, find_root, Interval, SymMatrix};
use crate::operators::{omega_minus_oracle, pi_matrix, pi_ph, BitPattern, BlockConfig};

const SCAN_STEP: f64 = 0.05;
const SCAN_CAP: f64 = 50.0;
const ROOT_TOL: f64 = 1e-15;

/// 1-based pulse position of doubled centered index `twice_j`.
pub fn centered_to_position(pulses: usize, twice_j: i64) -> Result<usize> {
    let l = pulses as i64;
    if twice_j.abs() > l - 1 || (twice_j + l - 1) % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "doubled centered index {twice_j} is off the grid for L = {pulses}"
        )));
    }
    Ok(((twice_j + l + 1) / 2) as usize)
}

/// Doubled centered index of 1-based pulse position `p`.
pub fn position_to_centered(pulses: usize, p: usize) -> Result<i64> {
    if !(1..=pulses).contains(&p) {
        return Err(Error::InvalidInput(format!("position {p} outside 1..={pulses}")));
    }
    Ok(2 * p as i64 - pulses as i64 - 1)
}

fn check_pulses(pulses: usize) -> Result<()> {
    if pulses < 5 {
        Err(Error::InvalidInput(format!(
            "the secular machinery needs L >= 5, got {pulses}"
        )))
    } else {
        Ok(())
    }
}

/// `2 e^{-s} cosh(k)` for `|k| <= s` without overflow.
#[inline]
fn cosh_scaled(k: f64, s: f64) -> f64 {
    (k - s).exp() + (-k - s).exp()
}

/// Secular function
/// `½cosh Lx - 2w cosh(L-1)x + (2w² - ½)cosh(L-2)x + 2w² cosh(L-4)x
///  + 2w(2w cosh x - cosh 2x) cosh((L-3)xy)`.
pub fn secular(pulses: usize, x: f64, w: f64, y: f64) -> Result<f64> {
    check_secular_args(pulses, x, w, y)?;
    let l = pulses as f64;
    Ok(0.5 * (l * x).cosh() - 2.0 * w * ((l - 1.0) * x).cosh()
        + (2.0 * w * w - 0.5) * ((l - 2.0) * x).cosh()
        + 2.0 * w * w * ((l - 4.0) * x).cosh()
        + 2.0 * w * (2.0 * w * x.cosh() - (2.0 * x).cosh()) * ((l - 3.0) * x * y).cosh())
}

/// `secular(…) · 2e^{-Lx}`: same sign, finite for every `x` in the scan range.
pub fn secular_scaled(pulses: usize, x: f64, w: f64, y: f64) -> Result<f64> {
    check_secular_args(pulses, x, w, y)?;
    let l = pulses as f64;
    let s = l * x;
    let c = |k: f64| cosh_scaled(k * x, s);
    let mixed = 2.0 * w * x.cosh() - (2.0 * x).cosh();
    Ok(0.5 * c(l) - 2.0 * w * c(l - 1.0)
        + (2.0 * w * w - 0.5) * c(l - 2.0)
        + 2.0 * w * w * c(l - 4.0)
        + 2.0 * w * mixed * cosh_scaled((l - 3.0) * x * y, s))
}

fn check_secular_args(pulses: usize, x: f64, w: f64, y: f64) -> Result<()> {
    check_pulses(pulses)?;
    require_in("x", x, 0.0, f64::MAX, "[0, inf)")?;
    require_positive("w", w)?;
    require_in("y", y, -1.0, 1.0, "[-1, 1]")
}

/// Inverse of `x ↦ cosh 2x / (2 cosh x)` on `x >= 0`; zero for `w <= 1/2`.
pub fn cosh_ratio_inverse(w: f64) -> Result<f64> {
    require_positive("w", w)?;
    if w <= 0.5 {
        return Ok(0.0);
    }
    // at acosh(2w) the difference equals 4w² - 1 > 0
    let hi = (2.0 * w).acosh();
    find_root(
        |x: f64| (2.0 * x).cosh() - 2.0 * w * x.cosh(),
        Interval::new(0.0, hi)?,
        ROOT_TOL,
    )
}

/// Largest root in `x` of the secular function.
///
/// Scans upward from [`cosh_ratio_inverse`]`(w)` in steps of 0.05 up to 50,
/// keeps the last negative-to-nonnegative transition and refines it. The
/// zero at `x_w` itself (present for `L = 5` or `w = 1/2`) is skipped when
/// the function dips below zero right after it.
pub fn largest_secular_root(pulses: usize, w: f64, y: f64) -> Result<f64> {
    check_secular_args(pulses, 0.0, w, y)?;
    let x_w = cosh_ratio_inverse(w)?;
    let f = |x: f64| secular_scaled(pulses, x, w, y);
    let steps = ((SCAN_CAP - x_w) / SCAN_STEP).ceil() as usize;
    let mut bracket = None;
    let mut prev_x = x_w;
    let mut prev = f(x_w)?;
    if prev.abs() <= 1e-13 {
        // F vanishes at x_w for L = 5 or w = 1/2; a root can sit just above
        // it, inside the first scan cell, so start from the negative side.
        let mut delta = 1e-9 * (1.0 + x_w);
        while delta < SCAN_STEP {
            let v = f(x_w + delta)?;
            if v < 0.0 {
                prev_x = x_w + delta;
                prev = v;
                break;
            }
            delta *= 2.0;
        }
    }
    for k in 1..=steps {
        let x = (x_w + k as f64 * SCAN_STEP).min(SCAN_CAP);
        let cur = f(x)?;
        if prev < 0.0 && cur >= 0.0 {
            bracket = Some((prev_x, x));
        }
        prev_x = x;
        prev = cur;
    }
    if prev < 0.0 {
        return Err(Error::Computation(format!(
            "secular function still negative at x = {SCAN_CAP} (L = {pulses}, w = {w}, y = {y})"
        )));
    }
    match bracket {
        Some((lo, hi)) => find_root(f, Interval::new(lo, hi)?, ROOT_TOL),
        None if f(x_w)?.abs() <= 1e-14 => Ok(x_w),
        None => Err(Error::Computation(format!(
            "no sign change of the secular function above x = {x_w} (L = {pulses}, w = {w}, y = {y})"
        ))),
    }
}

/// Edge weight `cosh((L-1)/2 + s·m)x - 2w cosh((L-3)/2 + s·m)x`, with `m`
/// given doubled.
pub fn edge_weight(pulses: usize, x: f64, w: f64, twice_m: i64, s: i8) -> Result<f64> {
    edge_weight_scaled(pulses, x, w, twice_m, s, 0.0)
}

fn edge_weight_scaled(pulses: usize, x: f64, w: f64, twice_m: i64, s: i8, shift: f64) -> Result<f64> {
    if s != 1 && s != -1 {
        return Err(domain("s", s as f64, "{-1, 1}"));
    }
    let l = pulses as f64;
    let sm = s as f64 * twice_m as f64 / 2.0;
    let a = ((l - 1.0) / 2.0 + sm) * x;
    let b = ((l - 3.0) / 2.0 + sm) * x;
    Ok(0.5 * cosh_scaled(a, shift) - w * cosh_scaled(b, shift))
}

/// Largest secular root for the excitation at doubled centered index `twice_m`.
pub fn excitation_root(pulses: usize, lambda: f64, twice_m: i64) -> Result<f64> {
    check_pulses(pulses)?;
    require_positive("lambda", lambda)?;
    let y = twice_m as f64 / (pulses as f64 - 3.0);
    largest_secular_root(pulses, 1.0 / lambda, y)
}

/// `(λ/2)(cosh x - 1)` at the largest secular root.
pub fn analytic_eigenvalue(pulses: usize, lambda: f64, twice_m: i64) -> Result<f64> {
    let x = excitation_root(pulses, lambda, twice_m)?;
    Ok(0.5 * lambda * (x.cosh() - 1.0))
}

/// Ansatz eigenvector for the excitation at `twice_m` (`|m| <= (L-3)/2`),
/// evaluated at the largest secular root and scaled to unit max-norm.
///
/// Entries: block edges get `g_s/√2`, position `m` gets `g_1 g_{-1}`, and the
/// pulses strictly between the left edge and `m` (between `m` and the right
/// edge) get `g_{-1}` (`g_1`) times a cosh tail decaying toward `m`.
pub fn analytic_eigenvector(pulses: usize, lambda: f64, twice_m: i64) -> Result<Vec<f64>> {
    let x = excitation_root(pulses, lambda, twice_m)?;
    ansatz_vector(pulses, lambda, twice_m, x)
}

/// Ansatz vector at an arbitrary `x`.
pub fn ansatz_vector(pulses: usize, lambda: f64, twice_m: i64, x: f64) -> Result<Vec<f64>> {
    check_pulses(pulses)?;
    require_positive("lambda", lambda)?;
    let l = pulses as i64;
    if twice_m.abs() > l - 3 || (twice_m + l - 1) % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "ansatz needs |m| <= (L-3)/2 on the grid, got doubled m = {twice_m} for L = {pulses}"
        )));
    }
    let w = 1.0 / lambda;
    let half = (pulses as f64 - 1.0) / 2.0 * x;
    // every entry carries the common factor e^{-(L-1)x}
    let g_plus = edge_weight_scaled(pulses, x, w, twice_m, 1, half)?;
    let g_minus = edge_weight_scaled(pulses, x, w, twice_m, -1, half)?;
    let tail = |k: f64| 0.5 * cosh_scaled(k * x, half);

    let mut v = vec![0.0; pulses];
    for p in 1..=pulses {
        let j2 = position_to_centered(pulses, p)?;
        v[p - 1] = if j2 == l - 1 {
            g_plus * (-half).exp() * std::f64::consts::FRAC_1_SQRT_2
        } else if j2 == -(l - 1) {
            g_minus * (-half).exp() * std::f64::consts::FRAC_1_SQRT_2
        } else if j2 == twice_m {
            g_plus * g_minus
        } else if j2 < twice_m {
            g_minus * tail((l - 1 + j2) as f64 / 2.0)
        } else {
            g_plus * tail((l - 1 - j2) as f64 / 2.0)
        };
    }
    let scale = v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    if scale <= 0.0 || !scale.is_finite() {
        return Err(Error::Computation(format!(
            "ansatz vector degenerate (max |v| = {scale}) at L = {pulses}, lambda = {lambda}"
        )));
    }
    Ok(v.into_iter().map(|e| e / scale).collect())
}

/// `ph(a) - λΠ` for the excitation at doubled centered index `twice_m`,
/// written out from its three closed-form cases (edge, next to edge,
/// interior).
pub fn single_excitation_operator(pulses: usize, lambda: f64, twice_m: i64) -> Result<SymMatrix> {
    check_pulses(pulses)?;
    require_positive("lambda", lambda)?;
    centered_to_position(pulses, twice_m)?;
    let l = pulses as i64;
    let s = twice_m.signum();
    let delta = |a: i64, b: i64| if a == b { 1.0 } else { 0.0 };
    let diag_weight = |j2: i64| -> f64 {
        if twice_m.abs() == l - 1 {
            delta(j2, s * (l - 3))
        } else if twice_m.abs() == l - 3 {
            2.0 * delta(j2, s * (l - 1)) + delta(j2, s * (l - 5))
        } else {
            delta(j2, twice_m - 2) + delta(j2, twice_m + 2)
        }
    };
    let edge = std::f64::consts::SQRT_2 - 1.0;
    Ok(SymMatrix::from_upper_fn(pulses, |p, q| {
        let j2 = -(l - 1) + 2 * p as i64;
        let k2 = -(l - 1) + 2 * q as i64;
        if p == q {
            (diag_weight(j2) - lambda) / 2.0
        } else if q == p + 1 {
            lambda * (1.0 + edge * delta((j2 + k2).abs(), 2 * (l - 2))) / 4.0
        } else {
            0.0
        }
    }))
}

/// Per-excitation diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcitationEntry {
    /// Centered index `m` (half-integer for even `L`).
    pub m: f64,
    pub position: usize,
    pub x_max: Option<f64>,
    pub analytic_eigenvalue: Option<f64>,
    pub top_eigenvalue: f64,
    /// `‖A v - μ v‖ / ‖v‖` for the ansatz pair.
    pub residual: Option<f64>,
    /// Whether every ansatz entry is strictly positive.
    pub positive: Option<bool>,
    /// Largest entrywise deviation from the operator built by the generic
    /// block builder.
    pub builder_mismatch: f64,
}

/// One named pass/fail check with the quantity it was judged on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
}

/// Outcome of [`certify`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub pulses: usize,
    pub lambda: f64,
    pub entries: Vec<ExcitationEntry>,
    pub oracle_pattern: BitPattern,
    pub oracle_value: f64,
    pub checks: Vec<Check>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Tolerances used by [`certify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyTolerances {
    pub residual: f64,
    pub eigenvalue: f64,
    pub builder: f64,
    pub tie: f64,
}

impl Default for CertifyTolerances {
    fn default() -> Self {
        Self {
            residual: 1e-8,
            eigenvalue: 1e-9,
            builder: 1e-14,
            tie: 1e-12,
        }
    }
}

/// Certifies that the excitation at pulse 2 (or its mirror) maximizes the
/// top eigenvalue over all single excitations.
///
/// For `L >= 5`: (a) every ansatz pair satisfies the eigen-equation; (b) for
/// interior excitations the ansatz eigenvalue is the top eigenvalue and the
/// ansatz is positive; (c) the next-to-edge eigenvalue dominates every
/// other excitation; (d) exhaustive enumeration picks pulse 2. For `L < 5`
/// only the direct comparison (c, d) applies.
pub fn certify(cfg: &BlockConfig, lambda: f64) -> Result<CertificateReport> {
    certify_with(cfg, lambda, CertifyTolerances::default())
}

pub fn certify_with(cfg: &BlockConfig, lambda: f64, tol: CertifyTolerances) -> Result<CertificateReport> {
    require_positive("lambda", lambda)?;
    let l = cfg.pulses();
    let li = l as i64;
    let pi = pi_matrix(cfg).scaled(lambda);
    let analytic = l >= 5;

    let entries = (1..=l)
        .into_par_iter()
        .map(|p| -> Result<ExcitationEntry> {
            let twice_m = position_to_centered(l, p)?;
            let a = BitPattern::from_ones(l, &[p - 1])?;
            let generic = &pi_ph(cfg, &a)? - &pi;
            let top = eig_max(&generic)?;
            let mut entry = ExcitationEntry {
                m: twice_m as f64 / 2.0,
                position: p,
                x_max: None,
                analytic_eigenvalue: None,
                top_eigenvalue: top,
                residual: None,
                positive: None,
                builder_mismatch: 0.0,
            };
            if !analytic {
                return Ok(entry);
            }
            let closed = single_excitation_operator(l, lambda, twice_m)?;
            entry.builder_mismatch = closed.max_abs_diff(&generic);
            if twice_m.abs() <= li - 3 {
                let x = excitation_root(l, lambda, twice_m)?;
                let mu = 0.5 * lambda * (x.cosh() - 1.0);
                let v = ansatz_vector(l, lambda, twice_m, x)?;
                let av = closed.mul_vec(&v);
                let norm = v.iter().map(|e| e * e).sum::<f64>().sqrt();
                let res = av.iter().zip(&v).map(|(a, b)| (a - mu * b).powi(2)).sum::<f64>().sqrt() / norm;
                entry.x_max = Some(x);
                entry.analytic_eigenvalue = Some(mu);
                entry.residual = Some(res);
                entry.positive = Some(v.iter().all(|&e| e > 0.0));
            }
            Ok(entry)
        })
        .collect::<Result<Vec<_>>>()?;

    let oracle = omega_minus_oracle(cfg, lambda, 2)?;
    let mut checks = Vec::new();

    if analytic {
        let worst_builder = entries.iter().map(|e| e.builder_mismatch).fold(0.0, f64::max);
        checks.push(Check {
            name: "closed_form_operator".into(),
            passed: worst_builder <= tol.builder,
            residual: worst_builder,
        });
        let worst_res = entries.iter().filter_map(|e| e.residual).fold(0.0, f64::max);
        checks.push(Check {
            name: "ansatz_eigen_equation".into(),
            passed: worst_res <= tol.residual,
            residual: worst_res,
        });
        let interior: Vec<&ExcitationEntry> = entries.iter().filter(|e| (2.0 * e.m).abs() as i64 <= li - 5).collect();
        let worst_top = interior
            .iter()
            .map(|e| (e.analytic_eigenvalue.unwrap_or(f64::NAN) - e.top_eigenvalue).abs())
            .fold(0.0, f64::max);
        checks.push(Check {
            name: "interior_ansatz_is_top".into(),
            passed: worst_top <= tol.eigenvalue,
            residual: worst_top,
        });
        let negatives = interior.iter().filter(|e| e.positive != Some(true)).count();
        checks.push(Check {
            name: "interior_ansatz_positive".into(),
            passed: negatives == 0,
            residual: negatives as f64,
        });
        let next_to_edge = entries
            .iter()
            .filter(|e| (2.0 * e.m).abs() as i64 == li - 3)
            .filter_map(|e| e.analytic_eigenvalue)
            .fold(f64::NEG_INFINITY, f64::max);
        let others = entries
            .iter()
            .filter(|e| (2.0 * e.m).abs() as i64 != li - 3)
            .map(|e| e.analytic_eigenvalue.unwrap_or(e.top_eigenvalue))
            .fold(f64::NEG_INFINITY, f64::max);
        checks.push(Check {
            name: "next_to_edge_dominates_ansatz".into(),
            passed: next_to_edge + tol.eigenvalue >= others,
            residual: (others - next_to_edge).max(0.0),
        });
    }

    let pulse2 = entries[1].top_eigenvalue;
    let best_other = entries
        .iter()
        .filter(|e| e.position != 2)
        .map(|e| e.top_eigenvalue)
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check {
        name: "pulse_two_dominates".into(),
        passed: pulse2 + tol.tie >= best_other,
        residual: (best_other - pulse2).max(0.0),
    });
    let ones = oracle.pattern.ones();
    let mirror_tie = ones == vec![l - 2] && (entries[l - 2].top_eigenvalue - pulse2).abs() <= tol.tie;
    checks.push(Check {
        name: "enumeration_picks_pulse_two".into(),
        passed: ones == vec![1] || mirror_tie,
        residual: (oracle.value - pulse2).abs(),
    });

    Ok(CertificateReport {
        pulses: l,
        lambda,
        entries,
        oracle_pattern: oracle.pattern,
        oracle_value: oracle.value,
        checks,
    })
}

/// Top eigenvector of the closed-form operator, sign-fixed to a positive sum.
pub fn top_eigenvector(pulses: usize, lambda: f64, twice_m: i64) -> Result<Vec<f64>> {
    let a = single_excitation_operator(pulses, lambda, twice_m)?;
    let mut v = eig_pairs(&a)?.swap_remove(0).vector;
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|e| *e = -*e);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_conversion() {
        assert_eq!(centered_to_position(5, -4).unwrap(), 1);
        assert_eq!(centered_to_position(5, 0).unwrap(), 3);
        assert_eq!(centered_to_position(6, 5).unwrap(), 6);
        assert!(centered_to_position(6, 0).is_err());
        assert!(centered_to_position(5, 6).is_err());
        for l in 5..9 {
            for p in 1..=l {
                assert_eq!(centered_to_position(l, position_to_centered(l, p).unwrap()).unwrap(), p);
            }
        }
    }

    #[test]
    fn scaled_secular_keeps_sign() {
        for &(x, w, y) in &[(0.3, 0.8, 0.2), (1.7, 0.4, -0.9), (4.0, 3.0, 1.0)] {
            let raw = secular(9, x, w, y).unwrap();
            let scaled = secular_scaled(9, x, w, y).unwrap();
            let expect = raw * 2.0 * (-9.0 * x).exp();
            assert!(
                (scaled - expect).abs() <= 1e-12 * expect.abs().max(1e-300),
                "{raw} {scaled}"
            );
        }
        assert!(secular_scaled(9, 50.0, 2.0, 0.5).unwrap().is_finite());
    }

    #[test]
    fn cosh_ratio_inverse_values() {
        assert_eq!(cosh_ratio_inverse(0.3).unwrap(), 0.0);
        assert_eq!(cosh_ratio_inverse(0.5).unwrap(), 0.0);
        let x = cosh_ratio_inverse(1.0).unwrap();
        assert!(((2.0 * x).cosh() - 2.0 * x.cosh()).abs() < 1e-12);
    }

    #[test]
    fn edge_weight_at_origin() {
        assert!((edge_weight(7, 0.0, 0.3, 2, 1).unwrap() - 0.4).abs() < 1e-15);
        assert!(edge_weight(7, 0.0, 0.3, 2, 0).is_err());
    }

    #[test]
    fn eigenpair_small() {
        let v = analytic_eigenvector(6, 1.0, -3).unwrap();
        let a = single_excitation_operator(6, 1.0, -3).unwrap();
        let mu = analytic_eigenvalue(6, 1.0, -3).unwrap();
        let av = a.mul_vec(&v);
        for (x, y) in av.iter().zip(&v) {
            assert!((x - mu * y).abs() < 1e-10);
        }
    }

    #[test]
    fn perron_vector_positive() {
        let v = top_eigenvector(6, 1.0, -3).unwrap();
        assert!(v.iter().all(|&e| e > 0.0), "{v:?}");
    }

    #[test]
    fn certificate_small_blocks() {
        for l in 3..=6 {
            let r = certify(&BlockConfig::new(l).unwrap(), 1.0).unwrap();
            assert!(r.passed(), "L={l}: {:?}", r.failures().collect::<Vec<_>>());
        }
    }
}
