use nalgebra::{DMatrix, DVector};

use super::design::DesignMatrix;
use super::fit::{CovarianceType, Diagnostics, FirstStage, ModelFit};
use super::stats::Inference;
use crate::error::{Error, Result};
use crate::geo_graph::ProximityMatrix;
use crate::linalg::{dependent_columns, least_squares, select, select_rows, weighted_ssr, weighted_tss};

/// Relative tolerance for dropping duplicate instrument columns.
pub const INSTRUMENT_DEDUP_TOL: f64 = 1e-8;
/// First-stage partial F below this triggers a weak-instrument warning.
pub const WEAK_F: f64 = 10.0;

/// Named instrument matrix, duplicates removed.
#[derive(Debug, Clone)]
pub struct InstrumentSet {
    pub names: Vec<String>,
    pub values: DMatrix<f64>,
}

/// `[Z, WZ, AZ, W^2 Z, A^2 Z, WAZ, AWZ]` with linearly dependent columns
/// removed (Gram-Schmidt, relative tolerance 1e-8). With row-stochastic `W`
/// the lagged intercepts duplicate the intercept and are dropped here.
///
/// Identification is checked when the model is fitted, not here.
pub fn build_instruments(z: &DesignMatrix, w: &ProximityMatrix, a: &ProximityMatrix) -> Result<InstrumentSet> {
    if w.n() != z.nrows() || a.n() != z.nrows() {
        return Err(Error::dim("instrument matrices and design differ in rows"));
    }
    let z0 = z.values().clone();
    let wz = w.mul_mat(&z0)?;
    let az = a.mul_mat(&z0)?;
    let w2z = w.mul_mat(&wz)?;
    let a2z = a.mul_mat(&az)?;
    let waz = w.mul_mat(&az)?;
    let awz = a.mul_mat(&wz)?;
    let blocks = [
        ("", &z0),
        ("W*", &wz),
        ("A*", &az),
        ("W2*", &w2z),
        ("A2*", &a2z),
        ("WA*", &waz),
        ("AW*", &awz),
    ];
    let k = z0.ncols();
    let n = z0.nrows();
    let mut all = DMatrix::zeros(n, k * blocks.len());
    let mut names = Vec::with_capacity(k * blocks.len());
    for (b, (prefix, m)) in blocks.iter().enumerate() {
        all.columns_mut(b * k, k).copy_from(m);
        names.extend(z.names().iter().map(|c| format!("{prefix}{c}")));
    }
    // excluded rows carry no information and must not decide dependence
    let keep = z.keep_mask();
    let dep = dependent_columns(&select_rows(&all, &keep), INSTRUMENT_DEDUP_TOL);
    let cols: Vec<usize> = (0..all.ncols()).filter(|c| !dep.contains(c)).collect();
    Ok(InstrumentSet {
        names: cols.iter().map(|&c| names[c].clone()).collect(),
        values: all.select_columns(&cols),
    })
}

/// Two-stage least squares of `y` on `[Z, endogenous]` with instruments `q`
/// (which should contain `Z`). Covariance `sigma^2 (Xhat' W Xhat)^-1`, where
/// `sigma^2` uses structural residuals `y - [Z, endogenous] beta` and `n - k`.
pub fn fit_2sls(
    z: &DesignMatrix,
    endogenous: &[(String, Vec<f64>)],
    q: &InstrumentSet,
    y: &[f64],
    weights: Option<&[f64]>,
) -> Result<ModelFit> {
    let n_all = z.nrows();
    if y.len() != n_all || q.values.nrows() != n_all || weights.is_some_and(|w| w.len() != n_all) {
        return Err(Error::dim("outcome, weights and instruments must match design rows"));
    }
    if let Some((name, _)) = endogenous.iter().find(|(_, v)| v.len() != n_all) {
        return Err(Error::dim(format!("endogenous '{name}' length differs from design rows")));
    }
    let keep = z.keep_mask();
    let zs = select_rows(z.values(), &keep);
    let qs = select_rows(&q.values, &keep);
    let ys = DVector::from_vec(select(y, &keep));
    let ws = weights.map(|w| select(w, &keep));
    let o = ws.as_deref();
    let n = ys.len();
    let kz = zs.ncols();
    let k = kz + endogenous.len();

    let q_rank = qs.ncols() - dependent_columns(&qs, INSTRUMENT_DEDUP_TOL).len();
    if q_rank < k {
        return Err(Error::Identification(format!(
            "instrument rank {q_rank} is below the {k} second-stage parameters"
        )));
    }

    let mut names: Vec<String> = z.names().to_vec();
    names.extend(endogenous.iter().map(|(n, _)| n.clone()));
    let mut x = DMatrix::zeros(n, k);
    x.columns_mut(0, kz).copy_from(&zs);
    let mut xhat = x.clone();
    let mut warnings = vec![];
    let mut first = Vec::new();
    let zq = zs.ncols();
    for (e, (name, v)) in endogenous.iter().enumerate() {
        let ve = DVector::from_vec(select(v, &keep));
        x.set_column(kz + e, &ve);
        let full = least_squares(&qs, &ve, o, &q.names)?;
        let restricted = least_squares(&zs, &ve, o, z.names())?;
        let ssr_q = weighted_ssr(&full.residuals, o);
        let ssr_z = weighted_ssr(&restricted.residuals, o);
        let extra = (qs.ncols() - zq) as f64;
        let f_stat = if extra > 0.0 {
            ((ssr_z - ssr_q) / extra) / (ssr_q / (n - qs.ncols()) as f64)
        } else {
            f64::NAN
        };
        let tss = weighted_tss(&ve, o);
        if !(f_stat >= WEAK_F) {
            warnings.push(format!("weak instruments for {name}: first-stage F = {f_stat:.3}"));
        }
        first.push(FirstStage {
            endogenous: name.clone(),
            f_stat,
            r_squared: if tss > 0.0 { 1.0 - ssr_q / tss } else { 1.0 },
        });
        xhat.set_column(kz + e, &full.fitted);
    }

    let second = least_squares(&xhat, &ys, o, &names)?;
    let fitted = &x * &second.beta;
    let resid = &ys - &fitted;
    let ssr = weighted_ssr(&resid, o);
    let dof = (n - k) as f64;
    let sigma2 = ssr / dof;
    let tss = weighted_tss(&ys, o);
    let r_squared = if tss > 0.0 { 1.0 - ssr / tss } else { 1.0 };
    let diagnostics = Diagnostics {
        r_squared,
        adj_r_squared: 1.0 - (1.0 - r_squared) * (n as f64 - 1.0) / dof,
        n_obs: n,
        n_dropped: z.n_excluded(),
        sigma2: Some(sigma2),
        condition_number: Some(second.condition_number),
        first_stage: Some(first),
        ..Default::default()
    };
    let mut fit = ModelFit::assemble(
        "2sls",
        names,
        second.beta.iter().copied().collect(),
        &second.bread * sigma2,
        Inference::StudentT { dof },
        CovarianceType::TwoStage,
        diagnostics,
        resid.iter().copied().collect(),
        fitted.iter().copied().collect(),
    );
    fit.warnings = warnings;
    Ok(fit)
}

/// Generalized spatial 2SLS: endogenous lags instrumented by
/// [`build_instruments`]`(z, w, a)`.
pub fn fit_g2sls(
    z: &DesignMatrix,
    endogenous: &[(String, Vec<f64>)],
    y: &[f64],
    w: &ProximityMatrix,
    a: &ProximityMatrix,
    weights: Option<&[f64]>,
) -> Result<ModelFit> {
    let q = build_instruments(z, w, a)?;
    let mut fit = fit_2sls(z, endogenous, &q, y, weights)?;
    fit.model = "g2sls".into();
    Ok(fit)
}
