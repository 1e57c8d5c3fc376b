use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dpsqkd_core::PhaseErrorModel;

#[derive(Debug, Parser)]
#[command(
    name = "dpsqkd",
    version,
    about = "Phase-error and key-rate bounds for DPS QKD blocks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Accepted for interface stability; every computation is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Leaked-information eigenvalue Ω(λ) on a slope grid.
    Bound(BoundArgs),
    /// Phase-error boundary e_ph(e_b) on a bit-error grid.
    Curve(CurveArgs),
    /// Optimized key rate per sending pulse over a distance sweep.
    Keyrate(KeyrateArgs),
    /// Closed forms against enumeration; exits 1 on any failure.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelChoice {
    Comp,
    Sp,
    Both,
}

impl ModelChoice {
    pub fn models(self) -> Vec<PhaseErrorModel> {
        match self {
            ModelChoice::Comp => vec![PhaseErrorModel::Complementarity],
            ModelChoice::Sp => vec![PhaseErrorModel::ShorPreskill],
            ModelChoice::Both => PhaseErrorModel::ALL.to_vec(),
        }
    }
}

/// `lo:hi:n`, log-spaced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl LogGrid {
    pub fn values(&self) -> Vec<f64> {
        let (a, b) = (self.lo.ln(), self.hi.ln());
        let n = self.points;
        (0..n)
            .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
            .collect()
    }
}

impl FromStr for LogGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else {
            return Err(format!("expected lo:hi:n, got {s:?}"));
        };
        let lo: f64 = lo.parse().map_err(|e| format!("lo: {e}"))?;
        let hi: f64 = hi.parse().map_err(|e| format!("hi: {e}"))?;
        let points: usize = n.parse().map_err(|e| format!("n: {e}"))?;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(format!("need 0 < lo < hi < inf, got {lo}:{hi}"));
        }
        if points < 2 {
            return Err(format!("need at least 2 points, got {points}"));
        }
        Ok(Self { lo, hi, points })
    }
}

fn parse_e_b(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=0.5).contains(&v) {
        Ok(v)
    } else {
        Err(format!("bit-error rate must lie in [0, 0.5], got {v}"))
    }
}

fn parse_nonneg(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a finite value >= 0, got {v}"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a finite value > 0, got {v}"))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundArgs {
    /// Pulses per block.
    #[arg(long = "L", default_value_t = 10, value_parser = clap::value_parser!(u64).range(3..))]
    pub pulses: u64,

    /// Emitted photon number.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=2))]
    pub nu: u8,

    #[arg(long, value_enum, default_value_t = ModelChoice::Comp)]
    pub model: ModelChoice,

    /// Slope grid `lo:hi:n`, log-spaced.
    #[arg(long = "lambda-grid", default_value = "1e-3:1e3:121")]
    pub lambda_grid: LogGrid,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CurveArgs {
    #[arg(long = "L", default_value_t = 10, value_parser = clap::value_parser!(u64).range(3..))]
    pub pulses: u64,

    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=2))]
    pub nu: u8,

    #[arg(long, value_enum, default_value_t = ModelChoice::Both)]
    pub model: ModelChoice,

    /// Evaluate a single bit-error rate instead of the grid.
    #[arg(long, value_parser = parse_e_b)]
    pub eb: Option<f64>,

    /// Evenly spaced bit-error rates on [0, 0.5].
    #[arg(long = "eb-points", default_value_t = 501, value_parser = clap::value_parser!(u64).range(2..))]
    pub eb_points: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KeyrateArgs {
    #[arg(long = "L", default_value_t = 10, value_parser = clap::value_parser!(u64).range(3..))]
    pub pulses: u64,

    /// Bit-error rate, constant over distance.
    #[arg(long, default_value_t = 0.02, value_parser = parse_e_b)]
    pub eb: f64,

    #[arg(long, value_enum, default_value_t = ModelChoice::Both)]
    pub model: ModelChoice,

    /// First distance in km.
    #[arg(long = "dist-start", default_value_t = 0.0, value_parser = parse_nonneg)]
    pub dist_start: f64,

    /// Last distance in km, inclusive.
    #[arg(long = "dist-end", default_value_t = 100.0, value_parser = parse_nonneg)]
    pub dist_end: f64,

    #[arg(long = "dist-step", default_value_t = 5.0, value_parser = parse_positive)]
    pub dist_step: f64,

    /// Mean-photon-number search `lo:hi:n`, log-spaced.
    #[arg(long = "alpha-grid", default_value = "1e-6:1:64")]
    pub alpha_grid: LogGrid,

    /// Entropy-slope search `lo:hi:n`, log-spaced.
    #[arg(long = "gamma-grid", default_value = "1e-3:1e2:129")]
    pub gamma_grid: LogGrid,
}

impl KeyrateArgs {
    pub fn distances(&self) -> Result<Vec<f64>, String> {
        if self.dist_end < self.dist_start {
            return Err(format!(
                "--dist-end {} is below --dist-start {}",
                self.dist_end, self.dist_start
            ));
        }
        let n = ((self.dist_end - self.dist_start) / self.dist_step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|k| self.dist_start + k as f64 * self.dist_step).collect())
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Largest block length covered by the argmax check; other checks cap
    /// lower.
    #[arg(long = "L-max", default_value_t = 30, value_parser = clap::value_parser!(u64).range(5..))]
    pub l_max: u64,

    /// Negative control: shift the enumerated bit-error diagonal by this.
    #[arg(long, hide = true)]
    pub canary: Option<f64>,
}
