//! Shared fixtures for the benchmarks.

use dpsqkd_core::keyrate::KeyRateEngine;
use dpsqkd_core::{BitPattern, BlockConfig, PhaseErrorModel, Result, SpectralOracle, SymMatrix};

/// Block length used throughout the figures.
pub const PULSES: usize = 10;

pub fn block() -> BlockConfig {
    BlockConfig::new(PULSES).expect("valid block length")
}

pub fn comp_oracle(pulses: usize) -> SpectralOracle {
    SpectralOracle::new(
        BlockConfig::new(pulses).expect("valid block length"),
        PhaseErrorModel::Complementarity,
    )
}

/// Full block for a single excitation at the second pulse, the two-photon
/// minus-branch maximizer.
pub fn second_pulse_block(pulses: usize, lambda: f64) -> Result<SymMatrix> {
    let oracle = comp_oracle(pulses);
    oracle.full_block(lambda, &BitPattern::from_ones(pulses, &[1])?)
}

pub fn engine(model: PhaseErrorModel) -> KeyRateEngine {
    KeyRateEngine::new(block(), model).expect("engine builds")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        let m = second_pulse_block(8, 1.0).unwrap();
        assert_eq!(m.dim(), 8);
        assert_eq!(block().pulses(), PULSES);
    }
}
