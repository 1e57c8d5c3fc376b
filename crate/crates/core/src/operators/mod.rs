//! Operator families on Bob's `L`-dimensional single-photon space.
//!
//! Basis state `|i⟩_B` (1-based pulse position `i`) is matrix row `i - 1`.
//! Alice's side enters only through Z-basis labels [`BitPattern`], since the
//! conjugated error operators are block diagonal in those labels.

mod oracle;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

pub use oracle::{
    omega_minus_oracle, omega_plus_oracle, p_nu_conjugated_blocks, BlockKind, OracleMax, ProjectedBlock,
    SpectralOracle, PATTERN_LIMIT,
};

/// Number of pulses per block, `L >= 3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockConfig {
    pulses: usize,
    pi_perturbation: f64,
}

impl BlockConfig {
    pub fn new(pulses: usize) -> Result<Self> {
        if pulses < 3 {
            return Err(Error::InvalidInput(format!(
                "a block needs at least 3 pulses, got {pulses}"
            )));
        }
        Ok(Self {
            pulses,
            pi_perturbation: 0.0,
        })
    }

    /// Negative control: shifts every diagonal entry of the bit-error matrix
    /// by `eps`, so closed forms stop matching the enumerated spectra.
    #[doc(hidden)]
    pub fn with_pi_perturbation(mut self, eps: f64) -> Self {
        self.pi_perturbation = eps;
        self
    }

    #[inline]
    pub fn pulses(&self) -> usize {
        self.pulses
    }

    /// Interference weight of pulse `i` (1-based): 1 at the block edges, 1/2 inside.
    pub fn kappa(&self, i: usize) -> f64 {
        assert!((1..=self.pulses).contains(&i), "pulse index {i} out of range");
        if i == 1 || i == self.pulses {
            1.0
        } else {
            0.5
        }
    }

    fn check_slot(&self, j: usize) -> Result<()> {
        if (1..self.pulses).contains(&j) {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "detection slot {j} outside 1..={}",
                self.pulses - 1
            )))
        }
    }

    fn check_pattern(&self, a: &BitPattern) -> Result<()> {
        if a.len() == self.pulses {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "pattern {a} has length {}, block has {} pulses",
                a.len(),
                self.pulses
            )))
        }
    }
}

/// Alice's Z-basis label `a_1 a_2 … a_L`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitPattern {
    bits: Vec<bool>,
    weight: usize,
}

impl BitPattern {
    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
            weight: 0,
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        let weight = bits.iter().filter(|&&b| b).count();
        Self { bits, weight }
    }

    /// Pattern of length `len` with ones at the given 0-based indices.
    pub fn from_ones(len: usize, ones: &[usize]) -> Result<Self> {
        let mut bits = vec![false; len];
        for &k in ones {
            if k >= len {
                return Err(Error::InvalidInput(format!(
                    "index {k} outside a pattern of length {len}"
                )));
            }
            bits[k] = true;
        }
        Ok(Self::from_bits(bits))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.weight
    }

    /// Bit at 0-based index `k`.
    #[inline]
    pub fn bit(&self, k: usize) -> bool {
        self.bits[k]
    }

    /// Bit at 1-based pulse `i`; positions outside `1..=L` read as 0.
    #[inline]
    fn at(&self, i: usize) -> bool {
        i >= 1 && i <= self.bits.len() && self.bits[i - 1]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// 0-based indices of the set bits, ascending.
    pub fn ones(&self) -> Vec<usize> {
        (0..self.bits.len()).filter(|&k| self.bits[k]).collect()
    }

    /// Mirror image `i -> L + 1 - i`.
    pub fn reversed(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.reverse();
        Self {
            bits,
            weight: self.weight,
        }
    }

    /// Copy with bit `k` (0-based) toggled.
    pub fn flipped(&self, k: usize) -> Self {
        let mut bits = self.bits.clone();
        bits[k] = !bits[k];
        Self::from_bits(bits)
    }

    /// `true` if every set bit of `other` is set here.
    pub fn covers(&self, other: &BitPattern) -> bool {
        self.len() == other.len() && self.bits.iter().zip(&other.bits).all(|(&a, &b)| a || !b)
    }
}

impl fmt::Display for BitPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitPattern({self})")
    }
}

impl FromStr for BitPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidInput(format!("bad bit character {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.is_empty() {
            return Err(Error::InvalidInput("empty bit pattern".into()));
        }
        Ok(Self::from_bits(bits))
    }
}

impl Serialize for BitPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitPattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// How Alice predicts her Z-basis outcome `z_j` when `z_{j+1} = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseErrorModel {
    /// Always predict `z_j = 0`, exploiting the weak-intensity prior.
    Complementarity,
    /// Guess `z_j` uniformly at random.
    ShorPreskill,
}

impl PhaseErrorModel {
    pub const ALL: [PhaseErrorModel; 2] = [PhaseErrorModel::Complementarity, PhaseErrorModel::ShorPreskill];

    pub fn short_name(&self) -> &'static str {
        match self {
            PhaseErrorModel::Complementarity => "comp",
            PhaseErrorModel::ShorPreskill => "sp",
        }
    }
}

/// Bob's POVM element for slot `j` and interference outcome `s`: the scaled
/// projector onto `(√κ_j |j⟩ + (-1)^s √κ_{j+1} |j+1⟩)/√2`.
pub fn bob_povm(cfg: &BlockConfig, j: usize, s: u8) -> Result<SymMatrix> {
    let filter = filter(cfg, j)?;
    filter.povm(s)
}

/// Two-row filter for slot `j`, mapping Bob's space onto a qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct Filter {
    rows: [Vec<f64>; 2],
    slot: usize,
}

impl Filter {
    /// Row for computational outcome `s` (`⟨s| F`).
    pub fn row(&self, s: u8) -> Result<&[f64]> {
        match s {
            0 | 1 => Ok(&self.rows[s as usize]),
            _ => Err(Error::InvalidInput(format!("outcome must be 0 or 1, got {s}"))),
        }
    }

    /// Row for `⟨−| F`, supported on pulse `j` only.
    pub fn minus_row(&self) -> Vec<f64> {
        combine(&self.rows[0], &self.rows[1], -1.0)
    }

    /// Row for `⟨+| F`, supported on pulse `j + 1` only.
    pub fn plus_row(&self) -> Vec<f64> {
        combine(&self.rows[0], &self.rows[1], 1.0)
    }

    /// `F† P(|s⟩) F`.
    pub fn povm(&self, s: u8) -> Result<SymMatrix> {
        Ok(SymMatrix::outer(self.row(s)?))
    }

    /// `F† F`.
    pub fn gram(&self) -> SymMatrix {
        let a = SymMatrix::outer(&self.rows[0]);
        let b = SymMatrix::outer(&self.rows[1]);
        &a + &b
    }

    pub fn slot(&self) -> usize {
        self.slot
    }
}

fn combine(r0: &[f64], r1: &[f64], sign: f64) -> Vec<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    r0.iter().zip(r1).map(|(a, b)| s * (a + sign * b)).collect()
}

/// `F_j = √κ_j |−⟩⟨j| + √κ_{j+1} |+⟩⟨j+1|`, stored in the computational basis.
pub fn filter(cfg: &BlockConfig, j: usize) -> Result<Filter> {
    cfg.check_slot(j)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let l = cfg.pulses();
    let (left, right) = (cfg.kappa(j).sqrt() * s, cfg.kappa(j + 1).sqrt() * s);
    let mut r0 = vec![0.0; l];
    let mut r1 = vec![0.0; l];
    r0[j - 1] = left;
    r0[j] = right;
    r1[j - 1] = -left;
    r1[j] = right;
    Ok(Filter {
        rows: [r0, r1],
        slot: j,
    })
}

/// Conjugated bit-error operator: tridiagonal with 1/2 on the diagonal,
/// `-1/(2√2)` on the two edge couplings and `-1/4` elsewhere.
pub fn pi_matrix(cfg: &BlockConfig) -> SymMatrix {
    let l = cfg.pulses();
    let diag = vec![0.5 + cfg.pi_perturbation; l];
    let edge = -0.25 * std::f64::consts::SQRT_2;
    let off: Vec<f64> = (1..l)
        .map(|i| if i == 1 || i == l - 1 { edge } else { -0.25 })
        .collect();
    SymMatrix::tridiagonal(&diag, &off).expect("consistent lengths")
}

/// Conjugated phase-error block for label `a`: diagonal, pulse `i` weighted
/// by `κ_i` times the number of set neighbours.
pub fn pi_ph(cfg: &BlockConfig, a: &BitPattern) -> Result<SymMatrix> {
    cfg.check_pattern(a)?;
    let l = cfg.pulses();
    let diag: Vec<f64> = (1..=l)
        .map(|i| {
            let n = a.at(i - 1) as u8 + a.at(i + 1) as u8;
            cfg.kappa(i) * n as f64
        })
        .collect();
    Ok(SymMatrix::diagonal(&diag))
}

/// Diagonal projector onto the pulses where `a_i = 1`.
pub fn p_a(cfg: &BlockConfig, a: &BitPattern) -> Result<SymMatrix> {
    cfg.check_pattern(a)?;
    let diag: Vec<f64> = a.bits().iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    Ok(SymMatrix::diagonal(&diag))
}

/// Phase-error operator after conjugation, restricted to Alice label `a`.
///
/// Built from the per-slot prediction rule rather than a closed form. The
/// conjugation maps `P(|a'⟩) ⊗ P(|i⟩)` to `P(|a' ⊕ e_i⟩) ⊗ P(|i⟩)`, so the
/// entry for pulse `i` reads the pre-conjugation pair `a ⊕ e_i` on each
/// slot touching `i`. For slot `j`, the pair `(x, y)` on qubits `j, j+1`
/// becomes `z_j = x`, `z_{j+1} = x ⊕ y`; Bob's photon at `j` or `j + 1`
/// reads as `|−⟩` or `|+⟩` respectively.
pub fn phase_error_operator_conjugated(cfg: &BlockConfig, a: &BitPattern, model: PhaseErrorModel) -> Result<SymMatrix> {
    cfg.check_pattern(a)?;
    let l = cfg.pulses();
    let diag: Vec<f64> = (1..=l)
        .map(|i| {
            let pre = a.flipped(i - 1);
            let mut weight = 0.0;
            for j in [i.wrapping_sub(1), i] {
                if !(1..l).contains(&j) {
                    continue;
                }
                let photon_on_left = i == j;
                weight += slot_error(pre.at(j), pre.at(j + 1), photon_on_left, model);
            }
            cfg.kappa(i) * weight
        })
        .collect();
    Ok(SymMatrix::diagonal(&diag))
}

/// Probability that Alice mispredicts `z_j` for pre-CNOT pair `(x, y)`.
fn slot_error(x: bool, y: bool, photon_on_left: bool, model: PhaseErrorModel) -> f64 {
    let z_j = x;
    let z_next = x ^ y;
    if z_next {
        // |−⟩ at pulse j suggests z_j = 1, |+⟩ at j + 1 suggests z_j = 0
        let guess = photon_on_left;
        if guess != z_j {
            1.0
        } else {
            0.0
        }
    } else {
        match model {
            PhaseErrorModel::Complementarity => z_j as u8 as f64,
            PhaseErrorModel::ShorPreskill => 0.5,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(l: usize) -> BlockConfig {
        BlockConfig::new(l).unwrap()
    }

    fn pat(s: &str) -> BitPattern {
        s.parse().unwrap()
    }

    #[test]
    fn block_needs_three_pulses() {
        assert!(BlockConfig::new(2).is_err());
        assert_eq!(cfg(3).kappa(2), 0.5);
        assert_eq!(cfg(3).kappa(3), 1.0);
    }

    #[test]
    fn pattern_roundtrip() {
        let a = pat("0100110");
        assert_eq!(a.weight(), 3);
        assert_eq!(a.to_string(), "0100110");
        assert_eq!(a.ones(), vec![1, 4, 5]);
        assert_eq!(a.reversed().to_string(), "0110010");
        assert!("01x".parse::<BitPattern>().is_err());
        assert!(pat("1101").covers(&pat("0101")));
        assert!(!pat("1001").covers(&pat("0101")));
    }

    #[test]
    fn povm_small_block() {
        let m = bob_povm(&cfg(3), 1, 0).unwrap();
        let r = std::f64::consts::SQRT_2 / 4.0;
        let expect = SymMatrix::from_rows(&[vec![0.5, r, 0.0], vec![r, 0.25, 0.0], vec![0.0, 0.0, 0.0]]).unwrap();
        assert!(m.max_abs_diff(&expect) < 1e-15);
        assert!(bob_povm(&cfg(3), 3, 0).is_err());
        assert!(bob_povm(&cfg(3), 0, 0).is_err());
    }

    #[test]
    fn filter_rows() {
        let c = cfg(6);
        for j in 1..6 {
            let f = filter(&c, j).unwrap();
            let minus = f.minus_row();
            let plus = f.plus_row();
            let n2 = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
            assert!((n2(&minus) - c.kappa(j)).abs() < 1e-15);
            assert!((n2(&plus) - c.kappa(j + 1)).abs() < 1e-15);
            assert!(minus[j].abs() < 1e-16 && plus[j - 1].abs() < 1e-16);
        }
    }

    #[test]
    fn pi_small_block() {
        let r = -std::f64::consts::SQRT_2 / 4.0;
        let expect = SymMatrix::from_rows(&[vec![0.5, r, 0.0], vec![r, 0.5, r], vec![0.0, r, 0.5]]).unwrap();
        assert!(pi_matrix(&cfg(3)).max_abs_diff(&expect) < 1e-16);
    }

    #[test]
    fn pi_ph_examples() {
        let c = cfg(5);
        assert_eq!(pi_ph(&c, &pat("01000")).unwrap().diag(), vec![1.0, 0.0, 0.5, 0.0, 0.0]);
        assert_eq!(pi_ph(&c, &pat("00000")).unwrap().diag(), vec![0.0; 5]);
        assert!(pi_ph(&c, &pat("0100")).is_err());
    }

    #[test]
    fn p_a_examples() {
        let c = cfg(4);
        assert_eq!(p_a(&c, &pat("1010")).unwrap().diag(), vec![1.0, 0.0, 1.0, 0.0]);
        assert_eq!(p_a(&c, &pat("1111")).unwrap(), SymMatrix::identity(4));
    }

    #[test]
    fn complementarity_matches_closed_form() {
        for l in 3..=8 {
            let c = cfg(l);
            for mask in 0u32..(1 << l) {
                let a = BitPattern::from_bits((0..l).map(|k| mask >> k & 1 == 1).collect());
                let mech = phase_error_operator_conjugated(&c, &a, PhaseErrorModel::Complementarity).unwrap();
                assert_eq!(mech, pi_ph(&c, &a).unwrap(), "L={l} a={a}");
            }
        }
    }

    #[test]
    fn shor_preskill_on_support() {
        // on pulses with a_i = 1 the random guess can only add error weight
        let c = cfg(6);
        for mask in 0u32..64 {
            let a = BitPattern::from_bits((0..6).map(|k| mask >> k & 1 == 1).collect());
            let sp = phase_error_operator_conjugated(&c, &a, PhaseErrorModel::ShorPreskill).unwrap();
            let comp = pi_ph(&c, &a).unwrap();
            for k in a.ones() {
                assert!(sp.get(k, k) >= comp.get(k, k));
            }
        }
        let zero = phase_error_operator_conjugated(&c, &BitPattern::zeros(6), PhaseErrorModel::ShorPreskill).unwrap();
        assert_eq!(zero.trace(), 0.0);
    }
}
