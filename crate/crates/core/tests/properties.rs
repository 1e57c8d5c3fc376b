use dpsqkd_core::bounds::{eph1_bound, omega1};
use dpsqkd_core::keyrate::{allocate_qnu, detection_rate, poisson_p};
use dpsqkd_core::linalg::{binary_entropy, cubic_max_real_root, eig_max, eig_pairs, SymMatrix};
use dpsqkd_core::operators::{pi_matrix, pi_ph, BitPattern, BlockConfig};
use proptest::prelude::*;

fn sym_matrix(max_dim: usize) -> impl Strategy<Value = SymMatrix> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec(-5.0f64..5.0, n * n)
            .prop_map(move |raw| SymMatrix::from_upper_fn(n, |i, j| 0.5 * (raw[i * n + j] + raw[j * n + i])))
    })
}

fn pattern(len: usize) -> impl Strategy<Value = BitPattern> {
    prop::collection::vec(any::<bool>(), len).prop_map(BitPattern::from_bits)
}

proptest! {
    #[test]
    fn rayleigh_quotient_below_top(m in sym_matrix(8), seed in prop::collection::vec(-1.0f64..1.0, 8)) {
        let v = &seed[..m.dim()];
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        prop_assume!(norm2 > 1e-6);
        let top = eig_max(&m).unwrap();
        prop_assert!(m.quadratic_form(v) / norm2 <= top + 1e-10);
    }

    #[test]
    fn eigenpairs_consistent(m in sym_matrix(8)) {
        let pairs = eig_pairs(&m).unwrap();
        prop_assert!((pairs[0].value - eig_max(&m).unwrap()).abs() <= 1e-12);
        prop_assert!(pairs.windows(2).all(|w| w[0].value >= w[1].value));
        let trace: f64 = pairs.iter().map(|p| p.value).sum();
        prop_assert!((trace - m.trace()).abs() <= 1e-10);
        for p in &pairs {
            let mv = m.mul_vec(&p.vector);
            let res: f64 = mv.iter().zip(&p.vector).map(|(a, b)| (a - p.value * b).powi(2)).sum::<f64>().sqrt();
            prop_assert!(res <= 1e-9);
        }
    }

    #[test]
    fn cubic_root_residual(r1 in -5.0f64..5.0, r2 in -5.0f64..5.0, r3 in -5.0f64..5.0) {
        let (c2, c1, c0) = (-(r1 + r2 + r3), r1 * r2 + r1 * r3 + r2 * r3, -r1 * r2 * r3);
        let x = cubic_max_real_root(1.0, c2, c1, c0).unwrap();
        let top = r1.max(r2).max(r3);
        prop_assert!((x - top).abs() <= 1e-6 * (1.0 + top.abs()));
        let p = ((x + c2) * x + c1) * x + c0;
        prop_assert!(p.abs() <= 1e-10 * (1.0 + x.abs().powi(3)));
    }

    #[test]
    fn entropy_symmetric(x in 0.5f64..=1.0) {
        prop_assert_eq!(binary_entropy(x).unwrap(), binary_entropy(1.0 - x).unwrap());
    }

    #[test]
    fn mirror_symmetry(a in pattern(9), lambda in 0.01f64..50.0) {
        let cfg = BlockConfig::new(9).unwrap();
        let pi = pi_matrix(&cfg).scaled(lambda);
        let v = eig_max(&(&pi_ph(&cfg, &a).unwrap() - &pi)).unwrap();
        let w = eig_max(&(&pi_ph(&cfg, &a.reversed()).unwrap() - &pi)).unwrap();
        prop_assert!((v - w).abs() <= 1e-12);
    }

    #[test]
    fn more_set_bits_leak_more(a in pattern(8), extra in 0usize..8, lambda in 0.01f64..50.0) {
        let cfg = BlockConfig::new(8).unwrap();
        let b = if a.bit(extra) { a.clone() } else { a.flipped(extra) };
        prop_assert!(b.covers(&a));
        let pi = pi_matrix(&cfg).scaled(lambda);
        let lo = eig_max(&(&pi_ph(&cfg, &a).unwrap() - &pi)).unwrap();
        let hi = eig_max(&(&pi_ph(&cfg, &b).unwrap() - &pi)).unwrap();
        prop_assert!(hi >= lo - 1e-12);
    }

    #[test]
    fn pattern_text_roundtrip(a in pattern(12)) {
        let parsed: BitPattern = a.to_string().parse().unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn one_photon_bound_monotone(e1 in 0.0f64..0.5, e2 in 0.0f64..0.5) {
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        prop_assert!(eph1_bound(lo).unwrap() <= eph1_bound(hi).unwrap() + 1e-12);
    }

    #[test]
    fn one_photon_value_nonincreasing(l1 in 0.01f64..20.0, l2 in 0.01f64..20.0) {
        let (lo, hi) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
        prop_assert!(omega1(hi).unwrap() <= omega1(lo).unwrap() + 1e-15);
    }

    #[test]
    fn allocation_partitions_detections(l in 3usize..30, alpha_sq in 1e-5f64..1.0, eta in 1e-4f64..1.0) {
        let cfg = BlockConfig::new(l).unwrap();
        let q = detection_rate(&cfg, eta, alpha_sq).unwrap();
        let a = allocate_qnu(q, &cfg, alpha_sq).unwrap();
        prop_assert!(a.q_nu.iter().all(|&x| x >= 0.0));
        prop_assert!(a.secure_mass() <= q * (1.0 + 1e-14));
        let mean = l as f64 * alpha_sq;
        let mut above = 0.0;
        for nu in (a.nu_min + 1..a.nu_min + 400).rev() {
            above += poisson_p(nu, mean).unwrap();
        }
        let at_min = if a.nu_min <= 2 { a.q_nu[a.nu_min] } else { q - above };
        prop_assert!((at_min + above - q).abs() <= 1e-14 * q.max(1e-300) + 1e-300);
    }
}
