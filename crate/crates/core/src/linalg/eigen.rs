//! Cyclic Jacobi eigensolver for small dense symmetric matrices.
//!
//! Sweeps over all `(p, q)` pairs in a fixed order until the off-diagonal
//! Frobenius norm drops below `1e-14` relative to the matrix norm. The fixed
//! sweep order makes the result bit-reproducible.

use super::SymMatrix;
use crate::error::{Error, Result};

const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// One eigenvalue with its unit eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Largest eigenvalue of `m`.
pub fn eig_max(m: &SymMatrix) -> Result<f64> {
    let (values, _) = jacobi(m, false)?;
    Ok(values.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// All eigenvalues, descending.
pub fn eigenvalues(m: &SymMatrix) -> Result<Vec<f64>> {
    let (mut values, _) = jacobi(m, false)?;
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Full spectrum with orthonormal eigenvectors, sorted by descending eigenvalue.
pub fn eig_pairs(m: &SymMatrix) -> Result<Vec<EigenPair>> {
    let (values, vectors) = jacobi(m, true)?;
    let n = m.dim();
    let v = vectors.expect("vectors requested");
    let mut pairs: Vec<EigenPair> = values
        .into_iter()
        .enumerate()
        .map(|(k, value)| EigenPair {
            value,
            vector: (0..n).map(|i| v[i * n + k]).collect(),
        })
        .collect();
    pairs.sort_by(|a, b| b.value.total_cmp(&a.value));
    Ok(pairs)
}

fn off_norm_sq(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += 2.0 * a[i * n + j] * a[i * n + j];
        }
    }
    s
}

fn jacobi(m: &SymMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let n = m.dim();
    let mut a = m.clone();
    let a = a.data_mut();
    let mut v = want_vectors.then(|| {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        v
    });

    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let threshold = (OFF_DIAGONAL_TOL * scale).powi(2);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_norm_sq(a, n) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + theta.hypot(1.0))
                } else {
                    // |theta| overflowed: the rotation angle is negligible.
                    0.5 / theta
                };
                if t == 0.0 {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    if !converged && off_norm_sq(a, n) > threshold {
        return Err(Error::Computation(format!(
            "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps (dim {n})"
        )));
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    Ok((values, v))
}
