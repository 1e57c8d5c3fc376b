//! Brute-force spectral oracle: enumerates every Alice label of the relevant
//! weight and takes the largest eigenvalue over all blocks.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use super::{phase_error_operator_conjugated, pi_matrix, BitPattern, BlockConfig, PhaseErrorModel};
use crate::error::{require_positive, Error, Result};
use crate::linalg::{eig_max, SymMatrix};

/// Largest number of patterns a single enumeration may visit.
pub const PATTERN_LIMIT: u128 = 1_000_000;

/// Ties closer than this keep the earlier pattern.
const TIE_TOL: f64 = 1e-12;

/// Winning block of an enumeration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleMax {
    pub value: f64,
    pub pattern: BitPattern,
}

/// Whether a block acts on all of Bob's space or only on the set pulses of
/// its label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    Full,
    Restricted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectedBlock {
    pub pattern: BitPattern,
    pub kind: BlockKind,
}

/// Spectral oracle bound to one block length and prediction model.
#[derive(Debug, Clone, Copy)]
pub struct SpectralOracle {
    cfg: BlockConfig,
    model: PhaseErrorModel,
}

impl SpectralOracle {
    pub fn new(cfg: BlockConfig, model: PhaseErrorModel) -> Self {
        Self { cfg, model }
    }

    pub fn config(&self) -> &BlockConfig {
        &self.cfg
    }

    pub fn model(&self) -> PhaseErrorModel {
        self.model
    }

    /// `ph(a) - λ Π` on all of Bob's space.
    pub fn full_block(&self, lambda: f64, a: &BitPattern) -> Result<SymMatrix> {
        let ph = phase_error_operator_conjugated(&self.cfg, a, self.model)?;
        let pi = pi_matrix(&self.cfg);
        Ok(&ph - &pi.scaled(lambda))
    }

    /// `ph(a) - λ Π` compressed to the pulses where `a_i = 1`.
    pub fn restricted_block(&self, lambda: f64, a: &BitPattern) -> Result<SymMatrix> {
        if a.weight() == 0 {
            return Err(Error::InvalidInput("restricted block needs a nonzero pattern".into()));
        }
        Ok(self.full_block(lambda, a)?.restrict(&a.ones()))
    }

    /// Maximum over full blocks with `weight(a) = ν - 1`.
    pub fn omega_minus(&self, lambda: f64, nu: usize) -> Result<OracleMax> {
        require_positive("lambda", lambda)?;
        if nu == 0 {
            return Err(Error::InvalidInput("the minus branch needs at least one photon".into()));
        }
        self.scan(nu - 1, |a| eig_max(&self.full_block(lambda, a)?))
    }

    /// Maximum over restricted blocks with `weight(a) = ν + 1`.
    pub fn omega_plus(&self, lambda: f64, nu: usize) -> Result<OracleMax> {
        require_positive("lambda", lambda)?;
        self.scan(nu + 1, |a| eig_max(&self.restricted_block(lambda, a)?))
    }

    /// Larger of the two branches; the minus branch is absent for `ν = 0`
    /// and the plus branch for `ν + 1 > L`.
    pub fn omega(&self, lambda: f64, nu: usize) -> Result<f64> {
        let plus = (nu < self.cfg.pulses())
            .then(|| self.omega_plus(lambda, nu))
            .transpose()?;
        let minus = (nu >= 1).then(|| self.omega_minus(lambda, nu)).transpose()?;
        match (plus, minus) {
            (Some(p), Some(m)) => Ok(p.value.max(m.value)),
            (Some(p), None) => Ok(p.value),
            (None, Some(m)) => Ok(m.value),
            (None, None) => Err(Error::InvalidInput(format!("no blocks for nu = {nu}"))),
        }
    }

    /// Evaluates `f` over all patterns of weight `k` in parallel, then
    /// reduces in combination order so the earliest set-bit positions win
    /// ties.
    fn scan<F>(&self, k: usize, f: F) -> Result<OracleMax>
    where
        F: Fn(&BitPattern) -> Result<f64> + Sync,
    {
        let patterns = patterns_of_weight(self.cfg.pulses(), k)?;
        let values: Vec<f64> = patterns.par_iter().map(&f).collect::<Result<_>>()?;
        let mut best = 0;
        for (idx, &v) in values.iter().enumerate().skip(1) {
            if v > values[best] + TIE_TOL {
                best = idx;
            }
        }
        let pattern = patterns.into_iter().nth(best).expect("nonempty enumeration");
        Ok(OracleMax {
            value: values[best],
            pattern,
        })
    }
}

/// Full-block maximum for the complementarity model.
pub fn omega_minus_oracle(cfg: &BlockConfig, lambda: f64, nu: usize) -> Result<OracleMax> {
    SpectralOracle::new(*cfg, PhaseErrorModel::Complementarity).omega_minus(lambda, nu)
}

/// Restricted-block maximum for the complementarity model.
pub fn omega_plus_oracle(cfg: &BlockConfig, lambda: f64, nu: usize) -> Result<OracleMax> {
    SpectralOracle::new(*cfg, PhaseErrorModel::Complementarity).omega_plus(lambda, nu)
}

/// Blocks of the conjugated `ν`-photon projector: full blocks for weights
/// `ν - 1, ν - 3, …` and restricted blocks for weight `ν + 1`.
pub fn p_nu_conjugated_blocks(cfg: &BlockConfig, nu: usize) -> Result<Vec<ProjectedBlock>> {
    let l = cfg.pulses();
    let mut out = Vec::new();
    let mut w = nu as isize - 1;
    while w >= 0 {
        for pattern in patterns_of_weight(l, w as usize)? {
            out.push(ProjectedBlock {
                pattern,
                kind: BlockKind::Full,
            });
        }
        w -= 2;
    }
    if nu < l {
        for pattern in patterns_of_weight(l, nu + 1)? {
            out.push(ProjectedBlock {
                pattern,
                kind: BlockKind::Restricted,
            });
        }
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
        if c > u64::MAX as u128 {
            return c;
        }
    }
    c
}

/// All length-`len` patterns of weight `k`, in combination order.
pub(crate) fn patterns_of_weight(len: usize, k: usize) -> Result<Vec<BitPattern>> {
    if k > len {
        return Err(Error::InvalidInput(format!("weight {k} exceeds pattern length {len}")));
    }
    let count = binomial(len, k);
    if count > PATTERN_LIMIT {
        return Err(Error::Resource {
            count,
            limit: PATTERN_LIMIT,
        });
    }
    Ok((0..len)
        .combinations(k)
        .map(|ones| BitPattern::from_ones(len, &ones).expect("indices in range"))
        .collect())
}
