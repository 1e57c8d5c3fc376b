//! Small dense numerical kernel: symmetric eigensolver, bracketed root
//! finding, real cubics, 1-D minimization and binary entropy.

mod cubic;
mod eigen;
mod entropy;
mod matrix;
mod minimize;
mod root;

pub use cubic::cubic_max_real_root;
pub use eigen::{eig_max, eig_pairs, eigenvalues, EigenPair};
pub use entropy::binary_entropy;
pub use matrix::{Interval, SymMatrix};
pub use minimize::{golden_section, minimize_scalar, minimize_scalar_with, MinimizeOptions, Minimum};
pub use root::{find_root, DEFAULT_ROOT_TOL};

use crate::error::Result;

/// Return type accepted by the scalar solvers: plain `f64` or a fallible
/// `Result<f64>`.
pub trait ScalarOutput {
    fn into_result(self) -> Result<f64>;
}

impl ScalarOutput for f64 {
    #[inline]
    fn into_result(self) -> Result<f64> {
        Ok(self)
    }
}

impl ScalarOutput for Result<f64> {
    #[inline]
    fn into_result(self) -> Result<f64> {
        self
    }
}
