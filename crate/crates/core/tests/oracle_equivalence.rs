use dpsqkd_core::bounds::{
    eph1_bound, eph_boundary, lambda_tilde, omega0, omega1, omega1_plus, omega2, omega2_minus, omega2_plus,
    omega_enumerated, sp_eph_boundary, Branch, PhaseErrorBoundary, ONE_PHOTON_KNEE, ONE_PHOTON_MAX_SLOPE,
};
use dpsqkd_core::linalg::{eig_max, Interval};
use dpsqkd_core::operators::{
    omega_minus_oracle, omega_plus_oracle, BitPattern, BlockConfig, PhaseErrorModel, SpectralOracle,
};

fn cfg(l: usize) -> BlockConfig {
    BlockConfig::new(l).unwrap()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    Interval::new(lo.ln(), hi.ln())
        .unwrap()
        .linspace(n)
        .into_iter()
        .map(f64::exp)
        .collect()
}

#[test]
fn one_photon_plus_branch() {
    for l in 3..=16 {
        for lambda in [0.1, 0.3, 1.0, 3.0, 10.0, ONE_PHOTON_MAX_SLOPE] {
            let oracle = omega_plus_oracle(&cfg(l), lambda, 1).unwrap();
            assert!(
                (omega1_plus(lambda).unwrap() - oracle.value).abs() <= 1e-9,
                "L={l} lambda={lambda}"
            );
        }
    }
}

#[test]
fn one_photon_both_branches() {
    for l in 3..=12 {
        let oracle = SpectralOracle::new(cfg(l), PhaseErrorModel::Complementarity);
        for lambda in log_grid(1e-2, 50.0, 30) {
            let value = omega_enumerated(&oracle, 1, lambda).unwrap().value;
            assert!((omega1(lambda).unwrap() - value).abs() <= 1e-9, "L={l} lambda={lambda}");
        }
    }
}

#[test]
fn zero_photon() {
    for l in 3..=10 {
        for lambda in log_grid(1e-3, 1e3, 20) {
            let v = omega_plus_oracle(&cfg(l), lambda, 0).unwrap().value;
            assert!((v - omega0(lambda).unwrap()).abs() <= 1e-12);
        }
    }
}

#[test]
fn two_photon_plus_branch() {
    let c = cfg(12);
    let oracle = SpectralOracle::new(c, PhaseErrorModel::Complementarity);
    let head = BitPattern::from_ones(12, &[0, 1, 2]).unwrap();
    for lambda in log_grid(1e-3, 30.0, 50) {
        let closed = omega2_plus(lambda).unwrap();
        let block = eig_max(&oracle.restricted_block(lambda, &head).unwrap()).unwrap();
        assert!((closed - block).abs() <= 1e-10, "lambda={lambda}");
        let best = omega_plus_oracle(&c, lambda, 2).unwrap().value;
        assert!((closed - best).abs() <= 1e-9, "lambda={lambda}");
    }
}

#[test]
fn two_photon_minus_argmax() {
    for l in 5..=30 {
        for lambda in [0.2, 1.0, 5.0, 20.0] {
            let best = omega_minus_oracle(&cfg(l), lambda, 2).unwrap();
            assert_eq!(best.pattern.ones(), vec![1], "L={l} lambda={lambda}");
            assert!((best.value - omega2_minus(&cfg(l), lambda).unwrap()).abs() <= 1e-12);
        }
    }
}

#[test]
fn two_photon_combined() {
    for l in [4, 6, 10] {
        let oracle = SpectralOracle::new(cfg(l), PhaseErrorModel::Complementarity);
        for lambda in log_grid(1e-2, 100.0, 25) {
            let closed = omega2(&cfg(l), lambda).unwrap();
            let brute = omega_enumerated(&oracle, 2, lambda).unwrap();
            assert!((closed.value - brute.value).abs() <= 1e-9, "L={l} lambda={lambda}");
        }
    }
}

#[test]
fn crossover_slopes() {
    for (l, expect) in [
        (4, 8.469132818651424),
        (5, 9.526726314012429),
        (10, 10.825915895679481),
        (30, 10.95363547910995),
    ] {
        let t = lambda_tilde(&cfg(l)).unwrap();
        assert!((t - expect).abs() <= 1e-9, "L={l}: {t}");
        assert_eq!(omega2(&cfg(l), t * 0.99).unwrap().branch, Branch::Plus);
        assert_eq!(omega2(&cfg(l), t * 1.01).unwrap().branch, Branch::Minus);
    }
    assert!(lambda_tilde(&cfg(3)).is_err());
}

#[test]
fn one_photon_envelope_reference() {
    assert!((eph1_bound(0.2).unwrap() - 0.882_287_565_553_229_5).abs() <= 1e-9);
    assert!((omega1(1.0).unwrap() - 0.683_012_701_892_219_3).abs() <= 1e-15);
    assert!(omega1(ONE_PHOTON_MAX_SLOPE).unwrap().abs() <= 1e-12);
    let below = eph1_bound(ONE_PHOTON_KNEE - 1e-9).unwrap();
    let above = eph1_bound(ONE_PHOTON_KNEE + 1e-9).unwrap();
    assert!((above - below).abs() < 1e-7);
}

#[test]
fn zero_photon_fixed_point() {
    assert_eq!(eph_boundary(&cfg(10), 0, 0.5).unwrap(), 0.0);
    for lambda in log_grid(1e-3, 1e3, 30) {
        assert!((lambda * 0.5 + omega0(lambda).unwrap()).abs() <= 1e-12);
    }
}

#[test]
fn one_photon_curve_is_length_independent() {
    let grid = Interval::new(0.0, 0.5).unwrap().linspace(51);
    let a = PhaseErrorBoundary::new(cfg(4), PhaseErrorModel::Complementarity, 1)
        .unwrap()
        .curve(&grid)
        .unwrap();
    let b = PhaseErrorBoundary::new(cfg(12), PhaseErrorModel::Complementarity, 1)
        .unwrap()
        .curve(&grid)
        .unwrap();
    assert_eq!(a, b);
}

#[test]
fn baseline_is_weaker_for_one_photon() {
    let c = cfg(10);
    for e_b in Interval::new(0.0, 0.5).unwrap().linspace(26) {
        let comp = eph_boundary(&c, 1, e_b).unwrap();
        let sp = sp_eph_boundary(&c, 1, e_b).unwrap();
        assert!(comp <= sp + 1e-9, "e_b={e_b}: {comp} > {sp}");
    }
}
