//! Asymptotic key rate per sending pulse.
//!
//! Channel: `η = 0.1·10^(-0.02·l)` for fiber length `l` km; a block of `L`
//! pulses at mean photon number `α²` per pulse is detected with probability
//! `Q = (L-1)ηα² e^{-(L+1)ηα²}`. The detected mass is split over emitted
//! photon numbers in the order least favourable to the legitimate parties
//! ([`allocate_qnu`]); only `ν ≤ 2` contributes secret bits.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{EntropyBoundary, GAMMA_DOMAIN};
use crate::error::{domain, require_in, require_positive, Result};
use crate::linalg::{binary_entropy, golden_section, minimize_scalar_with, Interval, MinimizeOptions};
use crate::operators::{BlockConfig, PhaseErrorModel};

/// Range of mean photon numbers per pulse searched by [`KeyRateEngine::optimize_alpha`].
pub const ALPHA_SQ_DOMAIN: (f64, f64) = (1e-6, 1.0);

const ALPHA_TOL: f64 = 1e-8;
const GAMMA_TOL: f64 = 1e-10;

/// Search domains and coarse grid sizes for the two optimizations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchGrids {
    pub alpha_sq: (f64, f64),
    pub alpha_points: usize,
    pub gamma: (f64, f64),
    pub gamma_points: usize,
}

impl Default for SearchGrids {
    fn default() -> Self {
        Self {
            alpha_sq: ALPHA_SQ_DOMAIN,
            alpha_points: 64,
            gamma: GAMMA_DOMAIN,
            gamma_points: 129,
        }
    }
}

impl SearchGrids {
    fn validate(&self) -> Result<()> {
        for (name, (lo, hi), n) in [
            ("alpha_sq", self.alpha_sq, self.alpha_points),
            ("gamma", self.gamma, self.gamma_points),
        ] {
            if !(lo > 0.0 && hi > lo && hi.is_finite()) {
                return Err(domain(name, lo, "0 < lo < hi < inf"));
            }
            if n < 3 {
                return Err(domain(name, n as f64, "at least 3 grid points"));
            }
        }
        Ok(())
    }
}

/// Transmittance including detection efficiency at `distance_km`.
pub fn eta_from_distance(distance_km: f64) -> Result<f64> {
    require_in("distance_km", distance_km, 0.0, f64::MAX, "[0, inf)")?;
    Ok(0.1 * 10f64.powf(-0.02 * distance_km))
}

/// One operating point of the link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelPoint {
    pub distance_km: f64,
    pub eta: f64,
    pub e_b: f64,
}

impl ChannelPoint {
    pub fn from_distance(distance_km: f64, e_b: f64) -> Result<Self> {
        let eta = eta_from_distance(distance_km)?;
        Self::new(distance_km, eta, e_b)
    }

    pub fn new(distance_km: f64, eta: f64, e_b: f64) -> Result<Self> {
        require_in("distance_km", distance_km, 0.0, f64::MAX, "[0, inf)")?;
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(domain("eta", eta, "(0, 1]"));
        }
        require_in("e_b", e_b, 0.0, 0.5, "[0, 1/2]")?;
        Ok(Self { distance_km, eta, e_b })
    }
}

/// Source settings for one key-rate evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    pub cfg: BlockConfig,
    pub alpha_sq: f64,
    pub model: PhaseErrorModel,
}

impl ProtocolParams {
    pub fn new(cfg: BlockConfig, alpha_sq: f64, model: PhaseErrorModel) -> Result<Self> {
        require_positive("alpha_sq", alpha_sq)?;
        Ok(Self { cfg, alpha_sq, model })
    }

    /// Mean photon number of the whole block, `Lα²`.
    pub fn block_mean(&self) -> f64 {
        self.cfg.pulses() as f64 * self.alpha_sq
    }
}

/// Detection probability per block.
pub fn detection_rate(cfg: &BlockConfig, eta: f64, alpha_sq: f64) -> Result<f64> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(domain("eta", eta, "(0, 1]"));
    }
    require_positive("alpha_sq", alpha_sq)?;
    let l = cfg.pulses() as f64;
    let mu = eta * alpha_sq;
    Ok((l - 1.0) * mu * (-(l + 1.0) * mu).exp())
}

/// Poisson probability of `nu` photons at the given mean.
pub fn poisson_p(nu: usize, mean: f64) -> Result<f64> {
    require_positive("mean", mean)?;
    let log_fact: f64 = (2..=nu).map(|k| (k as f64).ln()).sum();
    Ok((nu as f64 * mean.ln() - mean - log_fact).exp())
}

/// `P(N > nu)`, summed from the upper side so small tails keep full
/// relative precision.
fn poisson_tail(nu: usize, mean: f64) -> Result<f64> {
    let mut term = poisson_p(nu + 1, mean)?;
    let mut sum = 0.0;
    let mut k = nu + 1;
    while term > 0.0 {
        sum += term;
        if k as f64 > mean && term <= sum * 1e-18 {
            break;
        }
        k += 1;
        term *= mean / k as f64;
    }
    Ok(sum.min(1.0))
}

/// Split of the detected mass over photon numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Allocation {
    pub q: f64,
    pub nu_min: usize,
    /// `Q^(ν)` for `ν = 0, 1, 2`.
    pub q_nu: [f64; 3],
}

impl Allocation {
    pub fn secure_mass(&self) -> f64 {
        self.q_nu.iter().sum()
    }
}

/// Fills detections from the largest photon numbers downward: every
/// `ν > ν_min` is detected with its full Poisson weight and `ν_min` takes
/// the remainder.
pub fn allocate_qnu(q: f64, cfg: &BlockConfig, alpha_sq: f64) -> Result<Allocation> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(domain("Q", q, "(0, 1]"));
    }
    let mean = ProtocolParams::new(*cfg, alpha_sq, PhaseErrorModel::Complementarity)?.block_mean();
    let mut nu_min = 0;
    let mut tail = poisson_tail(0, mean)?;
    while tail >= q {
        nu_min += 1;
        tail = poisson_tail(nu_min, mean)?;
    }
    let mut q_nu = [0.0; 3];
    for (nu, slot) in q_nu.iter_mut().enumerate() {
        *slot = if nu > nu_min {
            poisson_p(nu, mean)?
        } else if nu == nu_min {
            q - tail
        } else {
            0.0
        };
    }
    Ok(Allocation { q, nu_min, q_nu })
}

/// Key rate at one channel point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeyRateResult {
    pub pulses: usize,
    pub model: PhaseErrorModel,
    pub distance_km: f64,
    pub eta: f64,
    pub e_b: f64,
    /// Key bits per sending pulse, floored at zero.
    pub g: f64,
    /// Unfloored rate.
    pub g_raw: f64,
    pub no_key: bool,
    pub alpha_sq_opt: f64,
    pub gamma_opt: f64,
    pub q: f64,
    pub q_nu: Vec<(usize, f64)>,
    pub nu_min: usize,
}

/// Key-rate evaluator with the entropy boundaries for `ν = 0, 1, 2`
/// tabulated once.
#[derive(Debug, Clone)]
pub struct KeyRateEngine {
    cfg: BlockConfig,
    model: PhaseErrorModel,
    grids: SearchGrids,
    boundaries: [EntropyBoundary; 3],
}

impl KeyRateEngine {
    pub fn new(cfg: BlockConfig, model: PhaseErrorModel) -> Result<Self> {
        let mut built = (0..3usize)
            .into_par_iter()
            .map(|nu| EntropyBoundary::new(cfg, model, nu))
            .collect::<Result<Vec<_>>>()?
            .into_iter();
        let mut next = || built.next().expect("three boundaries");
        let boundaries = [next(), next(), next()];
        Ok(Self {
            cfg,
            model,
            grids: SearchGrids::default(),
            boundaries,
        })
    }

    pub fn with_grids(mut self, grids: SearchGrids) -> Result<Self> {
        grids.validate()?;
        self.grids = grids;
        Ok(self)
    }

    pub fn grids(&self) -> &SearchGrids {
        &self.grids
    }

    pub fn config(&self) -> &BlockConfig {
        &self.cfg
    }

    pub fn model(&self) -> PhaseErrorModel {
        self.model
    }

    pub fn boundary(&self, nu: usize) -> Result<&EntropyBoundary> {
        self.boundaries
            .get(nu)
            .ok_or_else(|| domain("nu", nu as f64, "{0, 1, 2}"))
    }

    /// Upper bound on the privacy-amplification cost per block,
    /// `γ·e_b·Q + Q + Σ_ν Q^(ν)(Ω_h^(ν)(γ) - 1)`.
    pub fn pa_cost(&self, gamma: f64, e_b: f64, alloc: &Allocation) -> Result<f64> {
        require_positive("gamma", gamma)?;
        require_in("e_b", e_b, 0.0, 0.5, "[0, 1/2]")?;
        let mut cost = gamma * e_b * alloc.q + alloc.q;
        for (nu, &qn) in alloc.q_nu.iter().enumerate() {
            cost += qn * (self.boundaries[nu].support(gamma)? - 1.0);
        }
        Ok(cost)
    }

    /// Key rate at a fixed intensity; the slope `γ` is optimized.
    pub fn key_rate(&self, point: &ChannelPoint, alpha_sq: f64) -> Result<KeyRateResult> {
        let q = detection_rate(&self.cfg, point.eta, alpha_sq)?;
        let alloc = allocate_qnu(q, &self.cfg, alpha_sq)?;
        let best = minimize_scalar_with(
            |g: f64| self.pa_cost(g, point.e_b, &alloc),
            Interval::new(self.grids.gamma.0, self.grids.gamma.1)?,
            MinimizeOptions::log()
                .with_grid(self.grids.gamma_points)
                .with_tol(GAMMA_TOL),
        )?;
        let l = self.cfg.pulses() as f64;
        let g_raw = (q - q * binary_entropy(point.e_b)? - best.value) / l;
        Ok(KeyRateResult {
            pulses: self.cfg.pulses(),
            model: self.model,
            distance_km: point.distance_km,
            eta: point.eta,
            e_b: point.e_b,
            g: g_raw.max(0.0),
            g_raw,
            no_key: g_raw <= 0.0,
            alpha_sq_opt: alpha_sq,
            gamma_opt: best.x,
            q,
            q_nu: alloc.q_nu.iter().copied().enumerate().collect(),
            nu_min: alloc.nu_min,
        })
    }

    /// Key rate maximized over the intensity: log-spaced grid, then
    /// golden-section search in `ln α²` around the best grid point.
    pub fn optimize_alpha(&self, point: &ChannelPoint) -> Result<KeyRateResult> {
        let (lo, hi) = self.grids.alpha_sq;
        let grid = Interval::new(lo.ln(), hi.ln())?.linspace(self.grids.alpha_points);
        let coarse = grid
            .par_iter()
            .map(|u| self.key_rate(point, u.exp()))
            .collect::<Result<Vec<_>>>()?;
        let mut best_k = 0;
        for (k, r) in coarse.iter().enumerate().skip(1) {
            if r.g_raw > coarse[best_k].g_raw {
                best_k = k;
            }
        }
        let lo = grid[best_k.saturating_sub(1)];
        let hi = grid[(best_k + 1).min(grid.len() - 1)];
        let refined = golden_section(
            |u: f64| -> Result<f64> { Ok(-self.key_rate(point, u.exp())?.g_raw) },
            Interval::new(lo, hi)?,
            ALPHA_TOL,
        )?;
        let mut best = coarse.into_iter().nth(best_k).expect("nonempty grid");
        if -refined.value > best.g_raw {
            best = self.key_rate(point, refined.x.exp())?;
        }
        Ok(best)
    }

    /// [`Self::optimize_alpha`] at each distance, order preserved.
    pub fn distance_sweep(&self, e_b: f64, distances: &[f64]) -> Result<Vec<KeyRateResult>> {
        distances
            .par_iter()
            .map(|&d| self.optimize_alpha(&ChannelPoint::from_distance(d, e_b)?))
            .collect()
    }
}

/// One-shot key rate at a fixed intensity.
pub fn key_rate(
    cfg: &BlockConfig,
    point: &ChannelPoint,
    alpha_sq: f64,
    model: PhaseErrorModel,
) -> Result<KeyRateResult> {
    KeyRateEngine::new(*cfg, model)?.key_rate(point, alpha_sq)
}

/// One-shot key rate at the best intensity.
pub fn optimize_alpha(cfg: &BlockConfig, point: &ChannelPoint, model: PhaseErrorModel) -> Result<KeyRateResult> {
    KeyRateEngine::new(*cfg, model)?.optimize_alpha(point)
}

pub fn distance_sweep(
    cfg: &BlockConfig,
    e_b: f64,
    distances: &[f64],
    model: PhaseErrorModel,
) -> Result<Vec<KeyRateResult>> {
    KeyRateEngine::new(*cfg, model)?.distance_sweep(e_b, distances)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(l: usize) -> BlockConfig {
        BlockConfig::new(l).unwrap()
    }

    #[test]
    fn channel_values() {
        assert_eq!(eta_from_distance(0.0).unwrap(), 0.1);
        assert!((eta_from_distance(50.0).unwrap() - 0.01).abs() < 1e-17);
        assert!(ChannelPoint::from_distance(0.0, 0.6).is_err());
        assert!(eta_from_distance(-1.0).is_err());
    }

    #[test]
    fn detection_reference() {
        let q = detection_rate(&cfg(10), 0.1, 0.01).unwrap();
        assert!((q - 0.008_901_542_508_978_318).abs() < 1e-17);
        assert!(detection_rate(&cfg(10), 0.0, 0.01).is_err());
    }

    #[test]
    fn poisson_values() {
        assert!((poisson_p(0, 1.0).unwrap() - (-1f64).exp()).abs() < 1e-16);
        assert!((poisson_p(2, 0.06).unwrap() - 0.001_695_176_160_451_647_7).abs() < 1e-17);
        let total: f64 = (0..=50).map(|k| poisson_p(k, 5.0).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let tail = poisson_tail(1, 0.06).unwrap();
        let direct = 1.0 - poisson_p(0, 0.06).unwrap() - poisson_p(1, 0.06).unwrap();
        assert!((tail - direct).abs() < 1e-15);
    }

    #[test]
    fn allocation_whole_distribution() {
        let a = allocate_qnu(1.0, &cfg(10), 0.006).unwrap();
        assert_eq!(a.nu_min, 0);
        for nu in 0..3 {
            assert!((a.q_nu[nu] - poisson_p(nu, 0.06).unwrap()).abs() < 1e-15);
        }
        assert!(allocate_qnu(0.0, &cfg(10), 0.006).is_err());
        assert!(allocate_qnu(1.5, &cfg(10), 0.006).is_err());
    }

    #[test]
    fn allocation_inequalities() {
        let a = allocate_qnu(0.005, &cfg(10), 0.006).unwrap();
        assert_eq!(a.nu_min, 1);
        let t0 = poisson_tail(0, 0.06).unwrap();
        let t1 = poisson_tail(1, 0.06).unwrap();
        assert!(t1 < 0.005 && 0.005 <= t0);
        assert_eq!(a.q_nu[0], 0.0);
        assert!((a.q_nu[1] + t1 - 0.005).abs() < 1e-16);
    }

    #[test]
    fn noiseless_and_saturated() {
        let e = KeyRateEngine::new(cfg(6), PhaseErrorModel::Complementarity).unwrap();
        let ok = e
            .key_rate(&ChannelPoint::from_distance(0.0, 0.0).unwrap(), 0.01)
            .unwrap();
        assert!(ok.g > 0.0 && !ok.no_key);
        assert!(ok.g <= ok.q / 6.0);
        let bad = e
            .key_rate(&ChannelPoint::from_distance(0.0, 0.5).unwrap(), 0.01)
            .unwrap();
        assert!(bad.no_key && bad.g == 0.0);
    }
}
