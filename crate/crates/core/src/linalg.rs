//! Small dense least-squares kernels shared by the estimators.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative residual norm below which a column counts as linearly dependent
/// on the columns before it.
pub(crate) const COLLINEAR_TOL: f64 = 1e-9;

/// Indices of columns that are (numerically) in the span of earlier columns.
/// Modified Gram-Schmidt, left to right.
pub(crate) fn dependent_columns(x: &DMatrix<f64>, tol: f64) -> Vec<usize> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut out = Vec::new();
    for c in 0..x.ncols() {
        let orig = x.column(c).into_owned();
        let norm0 = orig.norm();
        let mut v = orig;
        for q in &basis {
            let p = q.dot(&v);
            v.axpy(-p, q, 1.0);
        }
        // second pass for stability
        for q in &basis {
            let p = q.dot(&v);
            v.axpy(-p, q, 1.0);
        }
        let nv = v.norm();
        if norm0 == 0.0 || nv <= tol * norm0 {
            out.push(c);
        } else {
            basis.push(v / nv);
        }
    }
    out
}

pub(crate) fn check_rank(x: &DMatrix<f64>, names: &[String]) -> Result<()> {
    let dep = dependent_columns(x, COLLINEAR_TOL);
    if dep.is_empty() {
        Ok(())
    } else {
        Err(Error::Collinear {
            columns: dep.into_iter().map(|c| names[c].clone()).collect(),
        })
    }
}

/// Weighted least-squares solution via QR of `sqrt(W) X`.
#[derive(Debug, Clone)]
pub(crate) struct LsSolution {
    pub beta: DVector<f64>,
    /// `(X' W X)^-1`
    pub bread: DMatrix<f64>,
    /// `y - X beta` (unweighted)
    pub residuals: DVector<f64>,
    pub fitted: DVector<f64>,
    /// 2-norm condition number of `sqrt(W) X`.
    pub condition_number: f64,
}

pub(crate) fn least_squares(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    weights: Option<&[f64]>,
    names: &[String],
) -> Result<LsSolution> {
    let (n, k) = x.shape();
    if y.len() != n {
        return Err(Error::dim(format!("y has {} rows, X has {n}", y.len())));
    }
    if n <= k {
        return Err(Error::TooFewObservations { n, k });
    }
    let (xt, yt) = match weights {
        Some(w) => {
            if w.len() != n {
                return Err(Error::dim("weight vector length differs from rows"));
            }
            if let Some(bad) = w.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
                return Err(Error::input(format!("weights must be positive, got {bad}")));
            }
            let sw: Vec<f64> = w.iter().map(|v| v.sqrt()).collect();
            (
                DMatrix::from_fn(n, k, |i, j| x[(i, j)] * sw[i]),
                DVector::from_fn(n, |i, _| y[i] * sw[i]),
            )
        }
        None => (x.clone(), y.clone()),
    };
    check_rank(&xt, names)?;
    let qr = xt.qr();
    let r = qr.r();
    let qty = qr.q().transpose() * &yt;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::Numerical("singular R in least squares".into()))?;
    let rinv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .ok_or_else(|| Error::Numerical("singular R in least squares".into()))?;
    let bread = symmetrize(&rinv * rinv.transpose());
    let sv = r.singular_values();
    let condition_number = sv.max() / sv.min();
    let fitted = x * &beta;
    let residuals = y - &fitted;
    Ok(LsSolution {
        beta,
        bread,
        residuals,
        fitted,
        condition_number,
    })
}

pub(crate) fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

/// Inverse of a symmetric positive definite matrix.
pub(crate) fn spd_inverse(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let chol = a
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numerical("matrix is not positive definite".into()))?;
    Ok(symmetrize(chol.inverse()))
}

/// Select rows where `keep` is true.
pub(crate) fn select_rows(x: &DMatrix<f64>, keep: &[bool]) -> DMatrix<f64> {
    let rows: Vec<usize> = (0..x.nrows()).filter(|&i| keep[i]).collect();
    DMatrix::from_fn(rows.len(), x.ncols(), |r, c| x[(rows[r], c)])
}

pub(crate) fn select<T: Copy>(v: &[T], keep: &[bool]) -> Vec<T> {
    v.iter().zip(keep).filter(|(_, &k)| k).map(|(x, _)| *x).collect()
}

/// Weighted total sum of squares around the weighted mean.
pub(crate) fn weighted_tss(y: &DVector<f64>, weights: Option<&[f64]>) -> f64 {
    let w = |i: usize| weights.map_or(1.0, |w| w[i]);
    let sw: f64 = (0..y.len()).map(w).sum();
    let mean = (0..y.len()).map(|i| w(i) * y[i]).sum::<f64>() / sw;
    (0..y.len()).map(|i| w(i) * (y[i] - mean).powi(2)).sum()
}

pub(crate) fn weighted_ssr(e: &DVector<f64>, weights: Option<&[f64]>) -> f64 {
    match weights {
        Some(w) => e.iter().zip(w).map(|(e, w)| w * e * e).sum(),
        None => e.iter().map(|e| e * e).sum(),
    }
}
