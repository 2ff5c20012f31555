use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};

use super::design::INTERCEPT;
use super::fit::{CovarianceType, Diagnostics, ModelFit};
use super::stats::Inference;
use super::wls::cluster_robust_cov;
use crate::error::{Error, Result};
use crate::linalg::{dependent_columns, least_squares, weighted_ssr, weighted_tss, COLLINEAR_TOL};

/// One region-period row of a panel.
#[derive(Debug, Clone)]
pub struct PanelObservation {
    pub region: String,
    /// Cross-sectional fixed-effect group (state).
    pub group: String,
    pub period: String,
    pub outcome: f64,
    pub regressors: Vec<f64>,
    pub cluster_id: String,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct FeOptions {
    pub weighted: bool,
    /// CR1 by `cluster_id`; classical otherwise.
    pub cluster: bool,
}

impl Default for FeOptions {
    fn default() -> Self {
        Self {
            weighted: true,
            cluster: true,
        }
    }
}

/// Two-way fixed effects by least-squares dummy variables.
///
/// Columns: intercept, one dummy per group except the first (sorted), one per
/// period except the first, then the regressors. Only the intercept and the
/// regressors are reported. A regressor that is collinear with the dummies
/// (e.g. constant within groups) is an error naming that column.
pub fn fit_twoway_fe(obs: &[PanelObservation], names: &[String], opts: FeOptions) -> Result<ModelFit> {
    let n = obs.len();
    let p = names.len();
    if let Some(o) = obs.iter().find(|o| o.regressors.len() != p) {
        return Err(Error::dim(format!(
            "observation for {} has {} regressors, expected {p}",
            o.region,
            o.regressors.len()
        )));
    }
    if opts.weighted {
        if let Some(o) = obs.iter().find(|o| !(o.weight.is_finite() && o.weight > 0.0)) {
            return Err(Error::input(format!("weight for {} must be positive", o.region)));
        }
    }
    let groups: Vec<&str> = obs.iter().map(|o| o.group.as_str()).collect::<BTreeSet<_>>().into_iter().collect();
    let periods: Vec<&str> = obs.iter().map(|o| o.period.as_str()).collect::<BTreeSet<_>>().into_iter().collect();
    let ng = groups.len() - 1;
    let nt = periods.len() - 1;
    let k = 1 + ng + nt + p;
    if n <= k {
        return Err(Error::TooFewObservations { n, k });
    }

    let mut col_names = vec![INTERCEPT.to_string()];
    col_names.extend(groups[1..].iter().map(|g| format!("group[{g}]")));
    col_names.extend(periods[1..].iter().map(|t| format!("period[{t}]")));
    col_names.extend(names.iter().cloned());

    let mut x = DMatrix::zeros(n, k);
    for (i, o) in obs.iter().enumerate() {
        x[(i, 0)] = 1.0;
        let g = groups.binary_search(&o.group.as_str()).expect("group present");
        if g > 0 {
            x[(i, g)] = 1.0;
        }
        let t = periods.binary_search(&o.period.as_str()).expect("period present");
        if t > 0 {
            x[(i, 1 + ng + t - 1)] = 1.0;
        }
        for (j, v) in o.regressors.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::input(format!("{} is not finite for {}", names[j], o.region)));
            }
            x[(i, 1 + ng + nt + j)] = *v;
        }
    }
    let y = DVector::from_iterator(n, obs.iter().map(|o| o.outcome));
    let w: Option<Vec<f64>> = opts.weighted.then(|| obs.iter().map(|o| o.weight).collect());

    // dummies go first, so any dependency flagged among regressors means the
    // regressor lies in the span of the fixed effects (or earlier regressors)
    let xt = match &w {
        Some(w) => DMatrix::from_fn(n, k, |i, j| x[(i, j)] * w[i].sqrt()),
        None => x.clone(),
    };
    let dep = dependent_columns(&xt, COLLINEAR_TOL);
    let bad: Vec<String> = dep.iter().filter(|&&c| c > ng + nt).map(|&c| col_names[c].clone()).collect();
    if !bad.is_empty() {
        return Err(Error::Collinear { columns: bad });
    }
    let mut warnings = vec![];
    let keep_cols: Vec<usize> = (0..k).filter(|c| !dep.contains(c)).collect();
    if !dep.is_empty() {
        warnings.push(format!("dropped {} redundant fixed-effect dummies", dep.len()));
    }
    let x = x.select_columns(&keep_cols);
    let col_names: Vec<String> = keep_cols.iter().map(|&c| col_names[c].clone()).collect();
    let k = keep_cols.len();

    let sol = least_squares(&x, &y, w.as_deref(), &col_names)?;
    let cov = if opts.cluster {
        let clusters: Vec<&str> = obs.iter().map(|o| o.cluster_id.as_str()).collect();
        cluster_robust_cov(&x, sol.residuals.as_slice(), w.as_deref(), &clusters)?
    } else {
        let ssr = weighted_ssr(&sol.residuals, w.as_deref());
        &sol.bread * (ssr / (n - k) as f64)
    };
    let report: Vec<usize> = std::iter::once(0).chain((k - p)..k).collect();
    let cov_r = cov.select_rows(&report).select_columns(&report);

    let ssr = weighted_ssr(&sol.residuals, w.as_deref());
    let tss = weighted_tss(&y, w.as_deref());
    let r_squared = if tss > 0.0 { 1.0 - ssr / tss } else { 1.0 };
    let dof = (n - k) as f64;
    let n_clusters = opts.cluster.then(|| {
        obs.iter().map(|o| o.cluster_id.as_str()).collect::<BTreeSet<_>>().len()
    });
    let diagnostics = Diagnostics {
        r_squared,
        adj_r_squared: 1.0 - (1.0 - r_squared) * (n as f64 - 1.0) / dof,
        n_obs: n,
        n_clusters,
        sigma2: Some(ssr / dof),
        condition_number: Some(sol.condition_number),
        ..Default::default()
    };
    let mut fit = ModelFit::assemble(
        "twoway_fe",
        report.iter().map(|&c| col_names[c].clone()).collect(),
        report.iter().map(|&c| sol.beta[c]).collect(),
        cov_r,
        Inference::StudentT { dof },
        if opts.cluster { CovarianceType::Cr1 } else { CovarianceType::Classical },
        diagnostics,
        sol.residuals.iter().copied().collect(),
        sol.fitted.iter().copied().collect(),
    );
    fit.warnings = warnings;
    Ok(fit)
}
