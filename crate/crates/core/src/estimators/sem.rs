use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::design::DesignMatrix;
use super::eigen::{spectrum, Spectrum};
use super::fit::{CovarianceType, Diagnostics, ModelFit};
use super::lr::lr_test;
use super::search::brent_maximize;
use super::stats::Inference;
use crate::error::{Error, Result};
use crate::geo_graph::ProximityMatrix;
use crate::linalg::{least_squares, select, select_rows, spd_inverse, symmetrize, weighted_ssr, weighted_tss};
use crate::par;

#[derive(Debug, Clone, Serialize)]
pub struct SemOptions {
    /// Estimate beta and sigma^2 at this lambda instead of maximizing.
    pub fixed_lambda: Option<f64>,
    /// Coarse scan points before the Brent refinement.
    pub scan_points: usize,
    /// Absolute tolerance on lambda for the Brent refinement.
    pub tolerance: f64,
}

impl Default for SemOptions {
    fn default() -> Self {
        Self {
            fixed_lambda: None,
            scan_points: 50,
            tolerance: 1e-8,
        }
    }
}

/// Profile likelihood at one value of lambda.
#[derive(Debug, Clone)]
pub struct ProfilePoint {
    pub lambda: f64,
    pub log_likelihood: f64,
    pub beta: DVector<f64>,
    pub sigma2: f64,
}

/// Spatial-error model `y = X beta + u`, `u = lambda W u + e`, `e ~ N(0, sigma^2 diag(w)^-1)`.
///
/// Holds everything needed to evaluate the concentrated log-likelihood in
/// O(nk) per lambda: the spectrum of `W` and the cross-moments of `X`, `WX`, `y`, `Wy`.
#[derive(Debug, Clone)]
pub struct SemModel {
    names: Vec<String>,
    x: DMatrix<f64>,
    wx: DMatrix<f64>,
    y: DVector<f64>,
    wy: DVector<f64>,
    weights: Option<Vec<f64>>,
    spectrum: Spectrum,
    interval: (f64, f64),
    // X'OX, X'OWX, (WX)'O(WX)
    a0: DMatrix<f64>,
    a1: DMatrix<f64>,
    a2: DMatrix<f64>,
    // X'Oy, X'OWy + (WX)'Oy, (WX)'OWy
    b0: DVector<f64>,
    b1: DVector<f64>,
    b2: DVector<f64>,
    half_log_w: f64,
    n_dropped: usize,
    warnings: Vec<String>,
}

fn cross(a: &DMatrix<f64>, b: &DMatrix<f64>, w: Option<&[f64]>) -> DMatrix<f64> {
    match w {
        Some(w) => {
            let bw = DMatrix::from_fn(b.nrows(), b.ncols(), |i, j| b[(i, j)] * w[i]);
            a.transpose() * bw
        }
        None => a.transpose() * b,
    }
}

fn cross_vec(a: &DMatrix<f64>, b: &DVector<f64>, w: Option<&[f64]>) -> DVector<f64> {
    match w {
        Some(w) => a.transpose() * DVector::from_fn(b.len(), |i, _| b[i] * w[i]),
        None => a.transpose() * b,
    }
}

impl SemModel {
    /// Rows of `x` must follow the order of `m`'s index. Excluded design rows
    /// are dropped and `m` is restricted (and row-renormalized) to the rest.
    pub fn new(x: &DesignMatrix, y: &[f64], m: &ProximityMatrix, weights: Option<&[f64]>) -> Result<Self> {
        let n_all = x.nrows();
        if m.n() != n_all || y.len() != n_all || weights.is_some_and(|w| w.len() != n_all) {
            return Err(Error::dim("design, outcome, weights and weight matrix must have equal length"));
        }
        if let Some(i) = x.row_ids().iter().zip(m.index().ids()).position(|(a, b)| a != b) {
            return Err(Error::dim(format!(
                "design row {i} is '{}' but weight matrix row is '{}'",
                x.row_ids()[i],
                m.index().id(i)
            )));
        }
        let keep = x.keep_mask();
        let n_dropped = x.n_excluded();
        let w = if n_dropped > 0 { m.restrict(&keep)? } else { m.clone() };
        let xs = select_rows(x.values(), &keep);
        let (n, k) = xs.shape();
        if n <= k {
            return Err(Error::TooFewObservations { n, k });
        }
        let ys = DVector::from_vec(select(y, &keep));
        let ws = weights.map(|w| select(w, &keep));
        if let Some(bad) = ws.iter().flatten().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::input(format!("weights must be positive, got {bad}")));
        }
        crate::linalg::check_rank(&xs, x.names())?;

        let spectrum = spectrum(&w)?;
        let (wmin, wmax) = (spectrum.min_real(), spectrum.max_real());
        if !(wmin < 0.0 && wmax > 0.0) {
            return Err(Error::Numerical(format!(
                "weight matrix spectrum [{wmin}, {wmax}] does not bracket zero"
            )));
        }
        let interval = (1.0 / wmin, 1.0 / wmax);
        let mut warnings = w.warnings().to_vec();
        warnings.extend(spectrum.warnings.iter().cloned());

        let wx = w.mul_mat(&xs)?;
        let wy = DVector::from_vec(w.mul_vec(ys.as_slice())?);
        let o = ws.as_deref();
        let a0 = cross(&xs, &xs, o);
        let a1 = cross(&xs, &wx, o);
        let a2 = cross(&wx, &wx, o);
        let b0 = cross_vec(&xs, &ys, o);
        let b1 = cross_vec(&xs, &wy, o) + cross_vec(&wx, &ys, o);
        let b2 = cross_vec(&wx, &wy, o);
        let half_log_w = 0.5 * ws.iter().flatten().map(|v| v.ln()).sum::<f64>();
        Ok(Self {
            names: x.names().to_vec(),
            x: xs,
            wx,
            y: ys,
            wy,
            weights: ws,
            spectrum,
            interval,
            a0,
            a1,
            a2,
            b0,
            b1,
            b2,
            half_log_w,
            n_dropped,
            warnings,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// Open interval `(1/w_min, 1/w_max)` on which `I - lambda W` is nonsingular.
    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Transformed residuals `(y - lambda Wy) - (X - lambda WX) beta`.
    fn transformed_residuals(&self, lambda: f64, beta: &DVector<f64>) -> DVector<f64> {
        let (n, k) = self.x.shape();
        DVector::from_fn(n, |i, _| {
            let mut r = self.y[i] - lambda * self.wy[i];
            for j in 0..k {
                r -= (self.x[(i, j)] - lambda * self.wx[(i, j)]) * beta[j];
            }
            r
        })
    }

    /// Concentrated log-likelihood with beta and sigma^2 profiled out.
    pub fn profile(&self, lambda: f64) -> Result<ProfilePoint> {
        let l2 = lambda * lambda;
        let xtx = &self.a0 - (&self.a1 + self.a1.transpose()) * lambda + &self.a2 * l2;
        let xty = &self.b0 - &self.b1 * lambda + &self.b2 * l2;
        let beta = xtx
            .cholesky()
            .ok_or_else(|| Error::Numerical(format!("(I - {lambda} W) X lost rank")))?
            .solve(&xty);
        let r = self.transformed_residuals(lambda, &beta);
        let n = self.n() as f64;
        let sigma2 = weighted_ssr(&r, self.weights.as_deref()) / n;
        let log_likelihood = -0.5 * n * (2.0 * std::f64::consts::PI * sigma2).ln() - 0.5 * n
            + self.spectrum.log_det(lambda)
            + self.half_log_w;
        Ok(ProfilePoint {
            lambda,
            log_likelihood,
            beta,
            sigma2,
        })
    }

    /// Profile log-likelihood, `-inf` where it cannot be evaluated.
    pub fn log_likelihood(&self, lambda: f64) -> f64 {
        match self.profile(lambda) {
            Ok(p) if p.log_likelihood.is_finite() => p.log_likelihood,
            _ => f64::NEG_INFINITY,
        }
    }

    fn search_bounds(&self) -> (f64, f64) {
        let (lo, hi) = self.interval;
        let pad = 1e-9 * (hi - lo);
        (lo + pad, hi - pad)
    }

    /// Coarse scan of `scan_points` interior points, then Brent between the
    /// neighbours of the best one. Returns `(lambda, log-likelihood)`.
    pub fn maximize(&self, scan_points: usize, tolerance: f64) -> (f64, f64) {
        let (lo, hi) = self.search_bounds();
        let m = scan_points.max(3);
        let grid: Vec<f64> = (0..m)
            .map(|k| lo + (hi - lo) * (k + 1) as f64 / (m + 1) as f64)
            .collect();
        let values: Vec<f64> = grid.iter().map(|&l| self.log_likelihood(l)).collect();
        let best = argmax(&values);
        let a = if best == 0 { lo } else { grid[best - 1] };
        let b = if best + 1 == m { hi } else { grid[best + 1] };
        let (lam, ll) = brent_maximize(|l| self.log_likelihood(l), a, b, tolerance);
        if ll >= values[best] {
            (lam, ll)
        } else {
            (grid[best], values[best])
        }
    }

    /// Exhaustive search on `lo + j * step` over the admissible interval.
    pub fn grid_search(&self, step: f64) -> (f64, f64) {
        let (lo, hi) = self.interval;
        let count = ((hi - lo) / step).ceil() as usize;
        let points: Vec<f64> = (1..count)
            .map(|j| lo + j as f64 * step)
            .filter(|l| *l > lo && *l < hi)
            .collect();
        let values = par::map_slice(&points, |&l| self.log_likelihood(l));
        let best = argmax(&values);
        (points[best], values[best])
    }

    /// Observed information (negative Hessian of the log-likelihood) in
    /// `(beta, lambda, sigma^2)` at a maximum, `e` the filtered residuals.
    ///
    /// The `beta`-`lambda` block is kept: it vanishes in expectation only
    /// when `X` is exogenous, and lagged outcomes carry `W u`.
    fn information(&self, lambda: f64, beta: &DVector<f64>, sigma2: f64, e: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n();
        let k = self.x.ncols();
        let o = |i: usize| self.weights.as_ref().map_or(1.0, |w| w[i]);
        let bx = &self.x - &self.wx * lambda;
        let wu = &self.wy - &self.wx * beta;
        let (tr1, tr2) = self.spectrum.traces(lambda);
        let s4 = sigma2 * sigma2;
        let mut info = DMatrix::zeros(k + 2, k + 2);
        for i in 0..n {
            let oi = o(i);
            for a in 0..k {
                for b in 0..=a {
                    info[(a, b)] += oi * bx[(i, a)] * bx[(i, b)] / sigma2;
                }
                info[(k, a)] += oi * (self.wx[(i, a)] * e[i] + bx[(i, a)] * wu[i]) / sigma2;
            }
            info[(k, k)] += oi * wu[i] * wu[i] / sigma2;
        }
        info[(k, k)] += tr2;
        info[(k + 1, k)] = tr1 / sigma2;
        info[(k + 1, k + 1)] = n as f64 / (2.0 * s4);
        info.fill_upper_triangle_with_lower_triangle();
        info
    }

    pub fn fit(&self, opts: &SemOptions) -> Result<ModelFit> {
        let mut warnings = self.warnings.clone();
        let (lo, hi) = self.interval;
        let lambda = match opts.fixed_lambda {
            Some(l) => {
                if !(l > lo && l < hi) {
                    return Err(Error::input(format!(
                        "lambda {l} outside admissible interval ({lo}, {hi})"
                    )));
                }
                l
            }
            None => {
                let (l, _) = self.maximize(opts.scan_points, opts.tolerance);
                let edge = 1e-6 * (hi - lo);
                if l - lo < edge || hi - l < edge {
                    warnings.push(format!("lambda estimate {l} is at the boundary of ({lo}, {hi})"));
                }
                l
            }
        };

        // final beta by QR on the transformed data for accuracy
        let bx = &self.x - &self.wx * lambda;
        let by = &self.y - &self.wy * lambda;
        let o = self.weights.as_deref();
        let sol = least_squares(&bx, &by, o, &self.names)?;
        let n = self.n();
        let sigma2 = weighted_ssr(&sol.residuals, o) / n as f64;
        let log_likelihood = -0.5 * n as f64 * (2.0 * std::f64::consts::PI * sigma2).ln() - 0.5 * n as f64
            + self.spectrum.log_det(lambda)
            + self.half_log_w;
        let mut cov = symmetrize(&sol.bread * sigma2);

        let fitted = &self.x * &sol.beta;
        let resid = &self.y - &fitted;
        let tss = weighted_tss(&self.y, o);
        let ssr = weighted_ssr(&resid, o);
        let r_squared = if tss > 0.0 { 1.0 - ssr / tss } else { 1.0 };
        let k = self.x.ncols();

        let mut diagnostics = Diagnostics {
            r_squared,
            adj_r_squared: 1.0 - (1.0 - r_squared) * (n as f64 - 1.0) / (n - k) as f64,
            n_obs: n,
            n_dropped: self.n_dropped,
            log_likelihood: Some(log_likelihood),
            lambda: Some(lambda),
            lambda_interval: Some([lo, hi]),
            sigma2: Some(sigma2),
            condition_number: Some(sol.condition_number),
            ..Default::default()
        };
        if opts.fixed_lambda.is_none() {
            let ll0 = self.log_likelihood(0.0);
            let lr = lr_test(ll0, log_likelihood, 1)?;
            diagnostics.lr_stat = Some(lr.stat);
            diagnostics.lr_p = Some(lr.p_value);
            let full = spd_inverse(&self.information(lambda, &sol.beta, sigma2, &sol.residuals)).map_err(|_| {
                Error::Numerical("observed information matrix is not positive definite".into())
            })?;
            cov = full.view((0, 0), (k, k)).into_owned();
            let var = full[(k, k)];
            let wald = lambda * lambda / var;
            diagnostics.lambda_se = Some(var.sqrt());
            diagnostics.wald_stat = Some(wald);
            diagnostics.wald_p = Some(super::stats::chi2_sf(wald, 1.0));
        }
        let mut fit = ModelFit::assemble(
            "sem",
            self.names.clone(),
            sol.beta.iter().copied().collect(),
            cov,
            Inference::Normal,
            CovarianceType::MlInformation,
            diagnostics,
            resid.iter().copied().collect(),
            fitted.iter().copied().collect(),
        );
        fit.warnings = warnings;
        Ok(fit)
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Spatial-error model by maximum likelihood. See [`SemModel`].
pub fn fit_sem_ml(
    x: &DesignMatrix,
    y: &[f64],
    m: &ProximityMatrix,
    weights: Option<&[f64]>,
    opts: &SemOptions,
) -> Result<ModelFit> {
    SemModel::new(x, y, m, weights)?.fit(opts)
}
