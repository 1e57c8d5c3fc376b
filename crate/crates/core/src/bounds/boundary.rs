use rayon::prelude::*;
use serde::Serialize;

use super::{eph1_bound, omega, omega_enumerated};
use crate::error::{domain, require_in, Result};
use crate::linalg::{golden_section, Interval};
use crate::operators::{BlockConfig, PhaseErrorModel, SpectralOracle};

/// Slopes searched when forming lower envelopes, log-scaled.
pub const LAMBDA_DOMAIN: (f64, f64) = (1e-4, 1e3);

const LAMBDA_GRID: usize = 129;
const LAMBDA_TOL: f64 = 1e-10;

/// Source of `Ω^(ν)(λ)`: closed forms for complementarity, block
/// enumeration for the random-guess baseline.
#[derive(Debug, Clone, Copy)]
pub struct LeakageBound {
    cfg: BlockConfig,
    model: PhaseErrorModel,
}

impl LeakageBound {
    pub fn new(cfg: BlockConfig, model: PhaseErrorModel) -> Self {
        Self { cfg, model }
    }

    pub fn config(&self) -> &BlockConfig {
        &self.cfg
    }

    pub fn model(&self) -> PhaseErrorModel {
        self.model
    }

    pub fn omega(&self, nu: usize, lambda: f64) -> Result<f64> {
        if nu > 2 {
            return Err(domain("nu", nu as f64, "{0, 1, 2}"));
        }
        match self.model {
            PhaseErrorModel::Complementarity => Ok(omega(&self.cfg, nu, lambda)?.value),
            PhaseErrorModel::ShorPreskill => {
                let oracle = SpectralOracle::new(self.cfg, self.model);
                Ok(omega_enumerated(&oracle, nu, lambda)?.value)
            }
        }
    }
}

/// What a curve's second coordinate measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    PhaseError,
    EntropyCost,
}

/// Upper boundary sampled at increasing bit-error rates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCurve {
    pub nu: usize,
    pub kind: CurveKind,
    pub points: Vec<(f64, f64)>,
}

impl BoundaryCurve {
    pub fn e_b(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    pub fn is_strictly_increasing_in_e_b(&self) -> bool {
        self.points.windows(2).all(|w| w[0].0 < w[1].0)
    }
}

/// One envelope point together with the slope that attains it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub e_b: f64,
    pub bound: f64,
    pub lambda: f64,
}

/// Lower envelope `inf_λ λ·e_b + Ω^(ν)(λ)` for one photon number.
///
/// `Ω` is tabulated once on a log-spaced slope grid; each query scans the
/// table and refines around the best slope with golden-section search.
/// The objective is convex in `λ`, so the local refinement is global.
#[derive(Debug, Clone)]
pub struct PhaseErrorBoundary {
    leak: LeakageBound,
    nu: usize,
    log_grid: Vec<f64>,
    omegas: Vec<f64>,
}

impl PhaseErrorBoundary {
    pub fn new(cfg: BlockConfig, model: PhaseErrorModel, nu: usize) -> Result<Self> {
        Self::with_domain(cfg, model, nu, LAMBDA_DOMAIN, LAMBDA_GRID)
    }

    pub fn with_domain(
        cfg: BlockConfig,
        model: PhaseErrorModel,
        nu: usize,
        lambda_domain: (f64, f64),
        grid_points: usize,
    ) -> Result<Self> {
        if nu > 2 {
            return Err(domain("nu", nu as f64, "{0, 1, 2}"));
        }
        if lambda_domain.0.is_nan() || lambda_domain.0 <= 0.0 {
            return Err(domain("lambda_lo", lambda_domain.0, "(0, inf)"));
        }
        let leak = LeakageBound::new(cfg, model);
        let log_grid = Interval::new(lambda_domain.0.ln(), lambda_domain.1.ln())?.linspace(grid_points.max(3));
        let omegas = log_grid
            .par_iter()
            .map(|u| leak.omega(nu, u.exp()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            leak,
            nu,
            log_grid,
            omegas,
        })
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn leakage(&self) -> &LeakageBound {
        &self.leak
    }

    /// Tabulated `(λ, Ω(λ))` pairs.
    pub fn table(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.log_grid.iter().map(|u| u.exp()).zip(self.omegas.iter().copied())
    }

    /// Bound at `e_b`, clamped to `[0, 1]`.
    pub fn value(&self, e_b: f64) -> Result<f64> {
        Ok(self.point(e_b)?.bound)
    }

    pub fn point(&self, e_b: f64) -> Result<BoundaryPoint> {
        require_in("e_b", e_b, 0.0, 0.5, "[0, 1/2]")?;
        if self.nu == 1 && self.leak.model() == PhaseErrorModel::Complementarity {
            let bound = eph1_bound(e_b)?.clamp(0.0, 1.0);
            return Ok(BoundaryPoint {
                e_b,
                bound,
                lambda: f64::NAN,
            });
        }
        let mut best_k = 0;
        let mut best = f64::INFINITY;
        for (k, (&u, &om)) in self.log_grid.iter().zip(&self.omegas).enumerate() {
            let v = u.exp() * e_b + om;
            if v < best {
                best = v;
                best_k = k;
            }
        }
        let mut best_u = self.log_grid[best_k];
        let lo = self.log_grid[best_k.saturating_sub(1)];
        let hi = self.log_grid[(best_k + 1).min(self.log_grid.len() - 1)];
        let refined = golden_section(
            |u: f64| -> Result<f64> {
                let lambda = u.exp();
                Ok(lambda * e_b + self.leak.omega(self.nu, lambda)?)
            },
            Interval::new(lo, hi)?,
            LAMBDA_TOL,
        )?;
        if refined.value < best {
            best = refined.value;
            best_u = refined.x;
        }
        Ok(BoundaryPoint {
            e_b,
            bound: best.clamp(0.0, 1.0),
            lambda: best_u.exp(),
        })
    }

    /// Points at each `e_b`, evaluated in parallel, order preserved.
    pub fn points(&self, e_b: &[f64]) -> Result<Vec<BoundaryPoint>> {
        e_b.par_iter().map(|&e| self.point(e)).collect()
    }

    pub fn curve(&self, e_b: &[f64]) -> Result<BoundaryCurve> {
        let pts = self.points(e_b)?;
        Ok(BoundaryCurve {
            nu: self.nu,
            kind: CurveKind::PhaseError,
            points: pts.into_iter().map(|p| (p.e_b, p.bound)).collect(),
        })
    }
}

/// Complementarity phase-error boundary at one point.
pub fn eph_boundary(cfg: &BlockConfig, nu: usize, e_b: f64) -> Result<f64> {
    PhaseErrorBoundary::new(*cfg, PhaseErrorModel::Complementarity, nu)?.value(e_b)
}

/// Random-guess baseline `Ω^(ν)(λ)` from block enumeration.
pub fn sp_omega(cfg: &BlockConfig, nu: usize, lambda: f64) -> Result<f64> {
    LeakageBound::new(*cfg, PhaseErrorModel::ShorPreskill).omega(nu, lambda)
}

/// Random-guess baseline phase-error boundary at one point.
pub fn sp_eph_boundary(cfg: &BlockConfig, nu: usize, e_b: f64) -> Result<f64> {
    PhaseErrorBoundary::new(*cfg, PhaseErrorModel::ShorPreskill, nu)?.value(e_b)
}
