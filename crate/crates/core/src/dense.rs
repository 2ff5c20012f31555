//! Large dense kernels (eigenvalues, LU solves) backed by faer.
//!
//! faer runs sequentially here so results do not depend on the thread count.

use std::sync::Once;

use faer::{Mat, Side};

use crate::error::{Error, Result};

static SEQUENTIAL: Once = Once::new();

fn init() {
    SEQUENTIAL.call_once(|| faer::set_global_parallelism(faer::Par::Seq));
}

fn to_faer(n: usize, row_major: &[f64]) -> Mat<f64> {
    Mat::from_fn(n, n, |i, j| row_major[i * n + j])
}

/// Eigenvalues of a symmetric matrix given row-major.
pub(crate) fn symmetric_eigenvalues(n: usize, row_major: &[f64]) -> Result<Vec<f64>> {
    init();
    to_faer(n, row_major)
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("symmetric eigendecomposition failed: {e:?}")))
}

/// Eigenvalues `(re, im)` of a general square matrix given row-major.
pub(crate) fn general_eigenvalues(n: usize, row_major: &[f64]) -> Result<Vec<(f64, f64)>> {
    init();
    let ev = to_faer(n, row_major)
        .eigenvalues()
        .map_err(|e| Error::Numerical(format!("eigendecomposition failed: {e:?}")))?;
    Ok(ev.into_iter().map(|c| (c.re, c.im)).collect())
}
