use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Dense real symmetric matrix, stored in full row-major form.
///
/// Construction always goes through a path that keeps `a[i][j] == a[j][i]`
/// bit-for-bit, so the eigensolvers never have to re-symmetrize.
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Zero matrix. Panics if `dim == 0`.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "SymMatrix dimension must be at least 1");
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * m.dim + i] = d;
        }
        m
    }

    /// Tridiagonal matrix from its diagonal and first off-diagonal.
    pub fn tridiagonal(diag: &[f64], off: &[f64]) -> Result<Self> {
        if off.len() + 1 != diag.len() {
            return Err(Error::InvalidInput(format!(
                "tridiagonal: {} diagonal entries need {} couplings, got {}",
                diag.len(),
                diag.len().saturating_sub(1),
                off.len()
            )));
        }
        let mut m = Self::diagonal(diag);
        for (i, &c) in off.iter().enumerate() {
            m.set(i, i + 1, c);
        }
        Ok(m)
    }

    /// Builds the matrix from `f(i, j)` evaluated on the upper triangle only.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Validates squareness and exact symmetry of `rows`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v != rows[j][i] {
                    return Err(Error::InvalidInput(format!(
                        "not symmetric at ({i}, {j}): {v} vs {}",
                        rows[j][i]
                    )));
                }
                m.data[i * dim + j] = v;
            }
        }
        Ok(m)
    }

    /// Rank-one matrix `v vᵀ`.
    pub fn outer(v: &[f64]) -> Self {
        Self::from_upper_fn(v.len(), |i, j| v[i] * v[j])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `true` if every entry of `self` is `>=` the matching entry of `other`.
    pub fn dominates(&self, other: &SymMatrix) -> bool {
        self.dim == other.dim && self.data.iter().zip(&other.data).all(|(a, b)| a >= b)
    }

    /// Principal submatrix on the given (sorted, distinct) indices.
    pub fn restrict(&self, idx: &[usize]) -> SymMatrix {
        SymMatrix::from_upper_fn(idx.len(), |a, b| self.get(idx[a], idx[b]))
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `vᵀ M v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        self.mul_vec(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, s: f64) -> SymMatrix {
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks_exact(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    fn zip_with(&self, rhs: &SymMatrix, f: impl Fn(f64, f64) -> f64) -> SymMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks_exact(self.dim)).finish()
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, rhs: f64) -> SymMatrix {
        self.scaled(rhs)
    }
}

/// Closed finite interval used for root brackets and search domains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::InvalidInput(format!(
                "interval needs finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `n >= 2` evenly spaced points including both ends.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        assert!(n >= 2, "linspace needs at least two points");
        let step = self.width() / (n - 1) as f64;
        (0..n)
            .map(|k| if k + 1 == n { self.hi } else { self.lo + step * k as f64 })
            .collect()
    }
}
