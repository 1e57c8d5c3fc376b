//! Security bounds for the differential-phase-shift (DPS) QKD protocol.
//!
//! The crate computes, for blocks of `L` weak coherent pulses:
//!
//! - the leaked-information eigenvalues `Ω^(ν)(λ)` for `ν = 0, 1, 2` emitted
//!   photons, both in closed form and by brute-force enumeration of the
//!   block-diagonal operator structure ([`bounds`], [`operators`]);
//! - the phase-error-rate boundaries `e_ph ≤ λ·e_b + Ω(λ)` and their entropy
//!   support functions ([`bounds`]);
//! - the asymptotic key-generation rate with Poisson photon-number
//!   allocation and optimization over the pulse intensity ([`keyrate`]);
//! - the analytic eigen-solution of the single-excitation operators that
//!   certifies which excitation position leaks the most ([`single_excitation`]).
//!
//! Every closed form is paired with an independent spectral oracle, and the
//! [`verify`] module bundles those cross-checks into a machine-readable report.
//!
//! All computation is deterministic: identical inputs produce bit-identical
//! outputs regardless of thread count.

#![forbid(unsafe_code)]

pub mod bounds;
mod error;
pub mod keyrate;
pub mod linalg;
pub mod operators;
pub mod single_excitation;
pub mod verify;

pub use bounds::{BoundaryCurve, Branch, CurveKind, EntropyBoundary, OmegaValue, PhaseErrorBoundary};
pub use error::{Error, Result};
pub use keyrate::{ChannelPoint, KeyRateEngine, KeyRateResult, ProtocolParams};
pub use linalg::{Interval, SymMatrix};
pub use operators::{BitPattern, BlockConfig, PhaseErrorModel, SpectralOracle};
