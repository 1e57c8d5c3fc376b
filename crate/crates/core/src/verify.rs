//! Self-check suite: every closed form against the enumeration oracle, plus
//! the single-excitation certificate, collected into one report.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{omega0, omega1, omega1_plus, omega2_minus, omega2_plus};
use crate::error::{Error, Result};
use crate::linalg::{eig_max, Interval};
use crate::operators::{BitPattern, BlockConfig, PhaseErrorModel, SpectralOracle};
use crate::single_excitation::certify;

/// Which parameters the suite covers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    /// Largest block length for the two-photon argmax check.
    pub l_max: usize,
    /// Largest block length for the one-photon and zero-photon checks.
    pub one_photon_l_max: usize,
    /// Largest block length for the single-excitation certificate.
    pub certify_l_max: usize,
    /// Block length for the two-photon plus-branch enumeration.
    pub two_photon_pulses: usize,
    pub one_photon_lambdas: Vec<f64>,
    pub two_photon_lambda_range: (f64, f64),
    pub two_photon_samples: usize,
    pub argmax_lambdas: Vec<f64>,
    pub certify_lambdas: Vec<f64>,
    /// Diagonal shift applied to the enumerated side only; a nonzero value
    /// must make the suite fail.
    pub canary: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            l_max: 30,
            one_photon_l_max: 16,
            certify_l_max: 15,
            two_photon_pulses: 12,
            one_photon_lambdas: vec![0.1, 0.3, 1.0, 3.0, 10.0, 3.0 + 5f64.sqrt()],
            two_photon_lambda_range: (1e-3, 30.0),
            two_photon_samples: 50,
            argmax_lambdas: vec![0.2, 1.0, 5.0, 20.0],
            certify_lambdas: vec![0.2, 1.0, 5.0],
            canary: None,
        }
    }
}

impl VerifyConfig {
    /// Caps every block-length range at `l_max`.
    pub fn with_l_max(mut self, l_max: usize) -> Self {
        self.l_max = l_max;
        self.one_photon_l_max = self.one_photon_l_max.min(l_max);
        self.certify_l_max = self.certify_l_max.min(l_max);
        self.two_photon_pulses = self.two_photon_pulses.min(l_max);
        self
    }

    pub fn with_canary(mut self, eps: f64) -> Self {
        self.canary = Some(eps);
        self
    }

    fn oracle_cfg(&self, pulses: usize) -> Result<BlockConfig> {
        let cfg = BlockConfig::new(pulses)?;
        Ok(match self.canary {
            Some(eps) => cfg.with_pi_perturbation(eps),
            None => cfg,
        })
    }
}

/// Outcome of one named check, aggregated over its parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Worst residual over the sweep.
    pub residual: f64,
    /// Absent when each case carries its own tolerance.
    pub tolerance: Option<f64>,
    pub cases: usize,
    /// First failing case, empty on success.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Case {
    label: String,
    residual: f64,
    passed: bool,
}

impl Case {
    fn within(label: String, residual: f64, tol: f64) -> Self {
        Self {
            label,
            residual,
            passed: residual <= tol,
        }
    }
}

fn aggregate(name: &str, tolerance: Option<f64>, cases: Vec<Case>) -> CheckResult {
    let residual = cases.iter().map(|c| c.residual).fold(0.0, f64::max);
    let failing = cases.iter().find(|c| !c.passed);
    CheckResult {
        name: name.into(),
        passed: failing.is_none() && !cases.is_empty(),
        residual,
        tolerance,
        cases: cases.len(),
        detail: failing
            .map(|c| format!("{} (residual {:e})", c.label, c.residual))
            .unwrap_or_default(),
    }
}

fn comp_oracle(cfg: &VerifyConfig, pulses: usize) -> Result<SpectralOracle> {
    Ok(SpectralOracle::new(
        cfg.oracle_cfg(pulses)?,
        PhaseErrorModel::Complementarity,
    ))
}

fn sweep<T, F>(items: Vec<T>, f: F) -> Result<Vec<Case>>
where
    T: Send + Sync,
    F: Fn(&T) -> Result<Case> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

fn grid(lo: usize, hi: usize, lambdas: &[f64]) -> Vec<(usize, f64)> {
    (lo..=hi).flat_map(|l| lambdas.iter().map(move |&x| (l, x))).collect()
}

fn zero_photon(cfg: &VerifyConfig) -> Result<CheckResult> {
    let tol = 1e-12;
    let cases = sweep(
        grid(3, cfg.one_photon_l_max, &cfg.one_photon_lambdas),
        |&(l, lambda)| {
            let oracle = comp_oracle(cfg, l)?.omega_plus(lambda, 0)?.value;
            Ok(Case::within(
                format!("L={l} lambda={lambda}"),
                (omega0(lambda)? - oracle).abs(),
                tol,
            ))
        },
    )?;
    Ok(aggregate("zero_photon_closed_form", Some(tol), cases))
}

fn one_photon_plus(cfg: &VerifyConfig) -> Result<CheckResult> {
    let tol = 1e-9;
    let cases = sweep(
        grid(3, cfg.one_photon_l_max, &cfg.one_photon_lambdas),
        |&(l, lambda)| {
            let oracle = comp_oracle(cfg, l)?.omega_plus(lambda, 1)?.value;
            Ok(Case::within(
                format!("L={l} lambda={lambda}"),
                (omega1_plus(lambda)? - oracle).abs(),
                tol,
            ))
        },
    )?;
    Ok(aggregate("one_photon_plus_branch", Some(tol), cases))
}

fn one_photon_total(cfg: &VerifyConfig) -> Result<CheckResult> {
    let tol = 1e-9;
    let cases = sweep(
        grid(3, cfg.one_photon_l_max, &cfg.one_photon_lambdas),
        |&(l, lambda)| {
            let oracle = comp_oracle(cfg, l)?.omega(lambda, 1)?;
            Ok(Case::within(
                format!("L={l} lambda={lambda}"),
                (omega1(lambda)? - oracle).abs(),
                tol,
            ))
        },
    )?;
    Ok(aggregate("one_photon_closed_form", Some(tol), cases))
}

fn two_photon_lambdas(cfg: &VerifyConfig) -> Result<Vec<f64>> {
    let (lo, hi) = cfg.two_photon_lambda_range;
    Ok(Interval::new(lo.ln(), hi.ln())?
        .linspace(cfg.two_photon_samples.max(2))
        .into_iter()
        .map(f64::exp)
        .collect())
}

fn two_photon_plus(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let lambdas = two_photon_lambdas(cfg)?;
    let l = cfg.two_photon_pulses;
    if l < 4 {
        return Err(Error::InvalidInput(format!(
            "the two-photon plus branch needs L >= 4, got {l}"
        )));
    }
    let oracle = comp_oracle(cfg, l)?;
    let head = BitPattern::from_ones(l, &[0, 1, 2])?;
    let tol_head = 1e-10;
    let heads = sweep(lambdas.clone(), |&lambda| {
        let direct = eig_max(&oracle.restricted_block(lambda, &head)?)?;
        Ok(Case::within(
            format!("lambda={lambda}"),
            (omega2_plus(lambda)? - direct).abs(),
            tol_head,
        ))
    })?;
    let tol_all = 1e-9;
    let all = sweep(lambdas, |&lambda| {
        let best = oracle.omega_plus(lambda, 2)?.value;
        Ok(Case::within(
            format!("L={l} lambda={lambda}"),
            (omega2_plus(lambda)? - best).abs(),
            tol_all,
        ))
    })?;
    Ok(vec![
        aggregate("two_photon_plus_leading_block", Some(tol_head), heads),
        aggregate("two_photon_plus_branch", Some(tol_all), all),
    ])
}

fn two_photon_minus(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let items = grid(5, cfg.l_max, &cfg.argmax_lambdas);
    let tol_value = 1e-9;
    let values = sweep(items.clone(), |&(l, lambda)| {
        let closed = omega2_minus(&BlockConfig::new(l)?, lambda)?;
        let best = comp_oracle(cfg, l)?.omega_minus(lambda, 2)?.value;
        Ok(Case::within(
            format!("L={l} lambda={lambda}"),
            (closed - best).abs(),
            tol_value,
        ))
    })?;
    let tol_tie = 1e-12;
    let argmax = sweep(items, |&(l, lambda)| {
        let oracle = comp_oracle(cfg, l)?;
        let best = oracle.omega_minus(lambda, 2)?;
        let label = format!("L={l} lambda={lambda} argmax={}", best.pattern);
        let ones = best.pattern.ones();
        let (residual, passed) = if ones == [1] {
            (0.0, true)
        } else {
            let mirror = oracle.full_block(lambda, &BitPattern::from_ones(l, &[1])?)?;
            let gap = (best.value - eig_max(&mirror)?).abs();
            (gap, ones == [l - 2] && gap <= tol_tie)
        };
        Ok(Case {
            label,
            residual,
            passed,
        })
    })?;
    Ok(vec![
        aggregate("two_photon_minus_branch", Some(tol_value), values),
        aggregate("two_photon_minus_argmax", Some(tol_tie), argmax),
    ])
}

fn single_excitation(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let items = grid(5, cfg.certify_l_max, &cfg.certify_lambdas);
    let reports = items
        .par_iter()
        .map(|&(l, lambda)| certify(&cfg.oracle_cfg(l)?, lambda))
        .collect::<Result<Vec<_>>>()?;
    let mut names: Vec<String> = Vec::new();
    for r in &reports {
        for c in &r.checks {
            if !names.contains(&c.name) {
                names.push(c.name.clone());
            }
        }
    }
    Ok(names
        .iter()
        .map(|name| {
            let cases = reports
                .iter()
                .flat_map(|r| {
                    r.checks.iter().filter(|c| &c.name == name).map(|c| Case {
                        label: format!("L={} lambda={}", r.pulses, r.lambda),
                        residual: c.residual,
                        passed: c.passed,
                    })
                })
                .collect();
            aggregate(&format!("single_excitation_{name}"), None, cases)
        })
        .collect())
}

/// Runs every check.
pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.l_max < 5 {
        return Err(Error::InvalidInput(format!(
            "the suite needs l_max >= 5, got {}",
            cfg.l_max
        )));
    }
    let mut checks = vec![zero_photon(cfg)?, one_photon_plus(cfg)?, one_photon_total(cfg)?];
    checks.extend(two_photon_plus(cfg)?);
    checks.extend(two_photon_minus(cfg)?);
    checks.extend(single_excitation(cfg)?);
    Ok(VerifyReport {
        config: cfg.clone(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}
