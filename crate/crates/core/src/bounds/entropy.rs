use rayon::prelude::*;

use super::boundary::{BoundaryCurve, CurveKind, PhaseErrorBoundary};
use crate::error::{domain, Result};
use crate::linalg::{binary_entropy, golden_section, Interval};
use crate::operators::{BlockConfig, PhaseErrorModel};

/// Range of entropy slopes `γ` searched by the key-rate optimizer.
pub const GAMMA_DOMAIN: (f64, f64) = (1e-3, 1e2);

const SUPPORT_GRID: usize = 1025;

/// Privacy-amplification cost of phase-error rate `p`: `h(p)` below 1/2 and a
/// full bit from 1/2 on, where `h` would otherwise start to decrease.
pub fn h_clamped(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain("p", p, "[0, 1]"));
    }
    if p >= 0.5 {
        Ok(1.0)
    } else {
        binary_entropy(p)
    }
}

/// Entropy-domain boundary `e_b ↦ h_clamped(e_ph(e_b))` and its support
/// function `Ω_h(γ) = sup_{e_b} h_clamped(e_ph(e_b)) - γ·e_b`.
#[derive(Debug, Clone)]
pub struct EntropyBoundary {
    phase: PhaseErrorBoundary,
    e_b: Vec<f64>,
    cost: Vec<f64>,
}

impl EntropyBoundary {
    pub fn new(cfg: BlockConfig, model: PhaseErrorModel, nu: usize) -> Result<Self> {
        Self::from_phase(PhaseErrorBoundary::new(cfg, model, nu)?, SUPPORT_GRID)
    }

    /// Tabulates `phase` on `grid_points` evenly spaced bit-error rates.
    pub fn from_phase(phase: PhaseErrorBoundary, grid_points: usize) -> Result<Self> {
        let e_b = Interval::new(0.0, 0.5)?.linspace(grid_points.max(3));
        let cost = e_b
            .par_iter()
            .map(|&e| h_clamped(phase.value(e)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { phase, e_b, cost })
    }

    pub fn phase_boundary(&self) -> &PhaseErrorBoundary {
        &self.phase
    }

    pub fn curve(&self) -> BoundaryCurve {
        BoundaryCurve {
            nu: self.phase.nu(),
            kind: CurveKind::EntropyCost,
            points: self.e_b.iter().copied().zip(self.cost.iter().copied()).collect(),
        }
    }

    /// Exact cost at one bit-error rate.
    pub fn cost_at(&self, e_b: f64) -> Result<f64> {
        h_clamped(self.phase.value(e_b)?)
    }

    /// Support value of the tabulated piecewise-linear curve. The supremum
    /// of a linear functional over a polyline sits at a vertex.
    pub fn support(&self, gamma: f64) -> Result<f64> {
        check_gamma(gamma)?;
        Ok(self
            .e_b
            .iter()
            .zip(&self.cost)
            .map(|(e, h)| h - gamma * e)
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Support value of the exact curve: best tabulated vertex, then
    /// golden-section on the two neighbouring cells.
    pub fn support_refined(&self, gamma: f64) -> Result<f64> {
        check_gamma(gamma)?;
        let mut best_k = 0;
        let mut best = f64::NEG_INFINITY;
        for (k, (e, h)) in self.e_b.iter().zip(&self.cost).enumerate() {
            let v = h - gamma * e;
            if v > best {
                best = v;
                best_k = k;
            }
        }
        let lo = self.e_b[best_k.saturating_sub(1)];
        let hi = self.e_b[(best_k + 1).min(self.e_b.len() - 1)];
        let m = golden_section(
            |e: f64| -> Result<f64> { Ok(gamma * e - self.cost_at(e)?) },
            Interval::new(lo, hi)?,
            1e-12,
        )?;
        Ok(best.max(-m.value))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma >= 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(domain("gamma", gamma, "[0, inf)"))
    }
}

/// Complementarity support value `Ω_h^(ν)(γ)`.
pub fn omega_h(cfg: &BlockConfig, nu: usize, gamma: f64) -> Result<f64> {
    omega_h_with(cfg, PhaseErrorModel::Complementarity, nu, gamma)
}

pub fn omega_h_with(cfg: &BlockConfig, model: PhaseErrorModel, nu: usize, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    EntropyBoundary::new(*cfg, model, nu)?.support_refined(gamma)
}
