//! Full Alice-Bob space check of the block-diagonal reduction for small
//! blocks: the error operators are built on `2^L · L` dimensions, conjugated
//! by `U = Σ_i X_i ⊗ P(|i⟩_B)` and compared block by block.

use dpsqkd_core::operators::{
    bob_povm, phase_error_operator_conjugated, pi_matrix, pi_ph, BitPattern, BlockConfig, PhaseErrorModel,
};

type Dense = Vec<Vec<f64>>;

fn zeros(n: usize) -> Dense {
    vec![vec![0.0; n]; n]
}

fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut c = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn transpose(a: &Dense) -> Dense {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

/// Qubit `k` (0-based, most significant first) of Alice's label index.
fn bit(label: usize, k: usize, l: usize) -> usize {
    (label >> (l - 1 - k)) & 1
}

fn index(label: usize, pulse: usize, l: usize) -> usize {
    label * l + pulse
}

fn conjugator(l: usize) -> Dense {
    let n = (1 << l) * l;
    let mut u = zeros(n);
    for label in 0..1 << l {
        for pulse in 0..l {
            let flipped = label ^ (1 << (l - 1 - pulse));
            u[index(flipped, pulse, l)][index(label, pulse, l)] = 1.0;
        }
    }
    u
}

/// Phase-error operator in the frame before the conjugation, summed over slots.
fn phase_error_full(cfg: &BlockConfig) -> Dense {
    let l = cfg.pulses();
    let mut e = zeros((1 << l) * l);
    for j in 1..l {
        for label in 0..1 << l {
            let (x, y) = (bit(label, j - 1, l), bit(label, j, l));
            let mut add = |pulse: usize| {
                let k = index(label, pulse - 1, l);
                e[k][k] += cfg.kappa(pulse);
            };
            match (x, y) {
                (1, 1) => {
                    add(j);
                    add(j + 1);
                }
                (0, 1) => add(j),
                (1, 0) => add(j + 1),
                _ => {}
            }
        }
    }
    e
}

/// Bit-error operator: Alice's two qubits in the Hadamard basis, Bob's
/// interference outcome opposite to their parity.
fn bit_error_full(cfg: &BlockConfig) -> Dense {
    let l = cfg.pulses();
    let n = (1 << l) * l;
    let mut e = zeros(n);
    for j in 1..l {
        for s in 0..2u8 {
            for t in 0..2u8 {
                let bob = bob_povm(cfg, j, s ^ t ^ 1).unwrap();
                let sign = |bit: usize, h: u8| if bit == 1 && h == 1 { -1.0 } else { 1.0 };
                for r in 0..1 << l {
                    for c in 0..1 << l {
                        // ⟨r|P(H|s⟩)P(H|t⟩)|c⟩ on qubits j, j+1, identity elsewhere
                        let others = (0..l)
                            .filter(|&k| k != j - 1 && k != j)
                            .all(|k| bit(r, k, l) == bit(c, k, l));
                        if !others {
                            continue;
                        }
                        let a = 0.5 * sign(bit(r, j - 1, l), s) * sign(bit(c, j - 1, l), s);
                        let b = 0.5 * sign(bit(r, j, l), t) * sign(bit(c, j, l), t);
                        for p in 0..l {
                            for q in 0..l {
                                e[index(r, p, l)][index(c, q, l)] += a * b * bob.get(p, q);
                            }
                        }
                    }
                }
            }
        }
    }
    e
}

fn label_pattern(label: usize, l: usize) -> BitPattern {
    BitPattern::from_bits((0..l).map(|k| bit(label, k, l) == 1).collect())
}

#[test]
fn phase_error_blocks_match() {
    for l in [3, 4] {
        let cfg = BlockConfig::new(l).unwrap();
        let u = conjugator(l);
        let e = phase_error_full(&cfg);
        let conj = matmul(&matmul(&u, &e), &transpose(&u));
        for r in 0..conj.len() {
            for c in 0..conj.len() {
                assert!(
                    (conj[r][c] - e[r][c]).abs() < 1e-15,
                    "conjugation changed entry ({r},{c})"
                );
            }
        }
        for label in 0..1 << l {
            let a = label_pattern(label, l);
            let block = pi_ph(&cfg, &a).unwrap();
            let mechanism = phase_error_operator_conjugated(&cfg, &a, PhaseErrorModel::Complementarity).unwrap();
            for p in 0..l {
                for q in 0..l {
                    let full = conj[index(label, p, l)][index(label, q, l)];
                    assert!((full - block.get(p, q)).abs() < 1e-15, "L={l} a={a} ({p},{q})");
                    assert!((full - mechanism.get(p, q)).abs() < 1e-15, "L={l} a={a} ({p},{q})");
                }
            }
            for other in (0..1 << l).filter(|&o| o != label) {
                for p in 0..l {
                    for q in 0..l {
                        assert_eq!(conj[index(label, p, l)][index(other, q, l)], 0.0);
                    }
                }
            }
        }
    }
}

#[test]
fn bit_error_becomes_identity_times_pi() {
    for l in [3, 4] {
        let cfg = BlockConfig::new(l).unwrap();
        let u = conjugator(l);
        let conj = matmul(&matmul(&u, &bit_error_full(&cfg)), &transpose(&u));
        let pi = pi_matrix(&cfg);
        for r in 0..1 << l {
            for c in 0..1 << l {
                for p in 0..l {
                    for q in 0..l {
                        let expect = if r == c { pi.get(p, q) } else { 0.0 };
                        let got = conj[index(r, p, l)][index(c, q, l)];
                        assert!(
                            (got - expect).abs() < 1e-14,
                            "L={l} ({r},{p}) ({c},{q}): {got} vs {expect}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn pi_is_sum_of_error_outcomes() {
    for l in 3..9 {
        let cfg = BlockConfig::new(l).unwrap();
        let mut sum = pi_matrix(&cfg).scaled(0.0);
        for j in 1..l {
            sum = &sum + &bob_povm(&cfg, j, 1).unwrap();
        }
        assert!(sum.max_abs_diff(&pi_matrix(&cfg)) < 1e-15);
    }
}
