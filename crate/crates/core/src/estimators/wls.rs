use std::collections::HashMap;
use std::hash::Hash;

use nalgebra::{DMatrix, DVector};

use super::design::DesignMatrix;
use super::fit::{CovarianceType, Diagnostics, ModelFit};
use super::stats::Inference;
use crate::error::{Error, Result};
use crate::linalg::{least_squares, select, select_rows, spd_inverse, symmetrize, weighted_ssr, weighted_tss};

/// Weighted least squares, `beta = (X' W X)^-1 X' W y`, classical covariance
/// `sigma^2 (X' W X)^-1` with `sigma^2 = sum w e^2 / (n - k)`.
///
/// `y` and `weights` are aligned with the design rows; excluded rows are dropped.
pub fn fit_wls(x: &DesignMatrix, y: &[f64], weights: Option<&[f64]>) -> Result<ModelFit> {
    if y.len() != x.nrows() {
        return Err(Error::dim(format!("y has {} rows, design has {}", y.len(), x.nrows())));
    }
    if weights.is_some_and(|w| w.len() != x.nrows()) {
        return Err(Error::dim("weight vector length differs from design rows"));
    }
    let keep = x.keep_mask();
    let xs = select_rows(x.values(), &keep);
    let ys = DVector::from_vec(select(y, &keep));
    let ws = weights.map(|w| select(w, &keep));
    let (n, k) = xs.shape();
    let sol = least_squares(&xs, &ys, ws.as_deref(), x.names())?;

    let ssr = weighted_ssr(&sol.residuals, ws.as_deref());
    let tss = weighted_tss(&ys, ws.as_deref());
    let dof = (n - k) as f64;
    let sigma2 = ssr / dof;
    let r_squared = if tss > 0.0 { 1.0 - ssr / tss } else { 1.0 };
    let diagnostics = Diagnostics {
        r_squared,
        adj_r_squared: 1.0 - (1.0 - r_squared) * (n as f64 - 1.0) / dof,
        n_obs: n,
        n_dropped: x.n_excluded(),
        sigma2: Some(sigma2),
        condition_number: Some(sol.condition_number),
        ..Default::default()
    };
    Ok(ModelFit::assemble(
        "wls",
        x.names().to_vec(),
        sol.beta.iter().copied().collect(),
        &sol.bread * sigma2,
        Inference::StudentT { dof },
        CovarianceType::Classical,
        diagnostics,
        sol.residuals.iter().copied().collect(),
        sol.fitted.iter().copied().collect(),
    ))
}

/// CR1 cluster-robust covariance
/// `c (X'WX)^-1 [sum_g X_g' W_g e_g e_g' W_g X_g] (X'WX)^-1`,
/// `c = G/(G-1) * (n-1)/(n-k)`.
///
/// Clusters are visited in order of first appearance, so relabeling clusters
/// leaves the result unchanged.
pub fn cluster_robust_cov<C: Hash + Eq>(
    x: &DMatrix<f64>,
    residuals: &[f64],
    weights: Option<&[f64]>,
    clusters: &[C],
) -> Result<DMatrix<f64>> {
    let (n, k) = x.shape();
    if residuals.len() != n || clusters.len() != n || weights.is_some_and(|w| w.len() != n) {
        return Err(Error::dim("residuals, weights and clusters must match design rows"));
    }
    if n <= k {
        return Err(Error::TooFewObservations { n, k });
    }
    let mut slot: HashMap<&C, usize> = HashMap::new();
    let mut scores: Vec<DVector<f64>> = Vec::new();
    for i in 0..n {
        let g = *slot.entry(&clusters[i]).or_insert_with(|| {
            scores.push(DVector::zeros(k));
            scores.len() - 1
        });
        let we = weights.map_or(1.0, |w| w[i]) * residuals[i];
        for c in 0..k {
            scores[g][c] += x[(i, c)] * we;
        }
    }
    let g = scores.len();
    if g < 2 {
        return Err(Error::SingleCluster(g));
    }
    let mut meat = DMatrix::zeros(k, k);
    for s in &scores {
        meat.ger(1.0, s, s, 1.0);
    }
    let xtwx = match weights {
        Some(w) => {
            let xw = DMatrix::from_fn(n, k, |i, c| x[(i, c)] * w[i]);
            x.transpose() * xw
        }
        None => x.transpose() * x,
    };
    let bread = spd_inverse(&xtwx)?;
    let factor = (g as f64 / (g as f64 - 1.0)) * ((n as f64 - 1.0) / (n as f64 - k as f64));
    Ok(symmetrize(&bread * meat * &bread * factor))
}

/// WLS point estimates with CR1 standard errors clustered on `clusters`.
pub fn fit_wls_cluster<C: Hash + Eq + Clone>(
    x: &DesignMatrix,
    y: &[f64],
    weights: Option<&[f64]>,
    clusters: &[C],
) -> Result<ModelFit> {
    if clusters.len() != x.nrows() {
        return Err(Error::dim("cluster labels length differs from design rows"));
    }
    let mut fit = fit_wls(x, y, weights)?;
    let keep = x.keep_mask();
    let xs = select_rows(x.values(), &keep);
    let ws = weights.map(|w| select(w, &keep));
    let cs: Vec<C> = clusters
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(c, _)| c.clone())
        .collect();
    let cov = cluster_robust_cov(&xs, &fit.residuals, ws.as_deref(), &cs)?;
    let n_clusters = {
        let mut seen: HashMap<&C, ()> = HashMap::new();
        cs.iter().for_each(|c| {
            seen.insert(c, ());
        });
        seen.len()
    };
    fit.model = "wls_cluster".into();
    fit.diagnostics.n_clusters = Some(n_clusters);
    fit.set_covariance(cov, CovarianceType::Cr1);
    Ok(fit)
}
