use nalgebra::DMatrix;
use serde::Serialize;

use super::stats::Inference;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CovarianceType {
    Classical,
    /// Cluster-robust sandwich with the CR1 small-sample factor.
    Cr1,
    /// Inverse information matrix of a maximum-likelihood fit.
    MlInformation,
    /// Two-stage least squares with structural residuals.
    TwoStage,
}

#[derive(Debug, Clone, Serialize)]
pub struct FirstStage {
    pub endogenous: String,
    pub f_stat: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Diagnostics {
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub n_obs: usize,
    /// Rows dropped because they were flagged (isolated regions).
    pub n_dropped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_clusters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_likelihood: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_se: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_interval: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wald_stat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wald_p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lr_stat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lr_p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_number: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_stage: Option<Vec<FirstStage>>,
}

/// Coefficients, covariance and derived inference for one fitted model.
#[derive(Debug, Clone)]
pub struct ModelFit {
    pub model: String,
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub covariance: DMatrix<f64>,
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub p_values: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
    pub inference: Inference,
    pub covariance_type: CovarianceType,
    pub diagnostics: Diagnostics,
    /// Residuals `y - X beta` on the rows actually used.
    pub residuals: Vec<f64>,
    pub fitted: Vec<f64>,
    pub warnings: Vec<String>,
}

impl ModelFit {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        model: &str,
        names: Vec<String>,
        coefficients: Vec<f64>,
        covariance: DMatrix<f64>,
        inference: Inference,
        covariance_type: CovarianceType,
        diagnostics: Diagnostics,
        residuals: Vec<f64>,
        fitted: Vec<f64>,
    ) -> Self {
        let mut fit = ModelFit {
            model: model.to_string(),
            names,
            coefficients,
            covariance: DMatrix::zeros(0, 0),
            std_errors: vec![],
            t_stats: vec![],
            p_values: vec![],
            ci_low: vec![],
            ci_high: vec![],
            inference,
            covariance_type,
            diagnostics,
            residuals,
            fitted,
            warnings: vec![],
        };
        fit.set_covariance(covariance, covariance_type);
        fit
    }

    /// Replace the covariance and recompute standard errors, tests and 95% intervals.
    pub fn set_covariance(&mut self, covariance: DMatrix<f64>, kind: CovarianceType) {
        let crit = self.inference.critical(0.95);
        let k = self.coefficients.len();
        self.std_errors = (0..k).map(|i| covariance[(i, i)].max(0.0).sqrt()).collect();
        self.t_stats = (0..k)
            .map(|i| self.coefficients[i] / self.std_errors[i])
            .collect();
        self.p_values = self.t_stats.iter().map(|t| self.inference.p_value(*t)).collect();
        self.ci_low = (0..k)
            .map(|i| self.coefficients[i] - crit * self.std_errors[i])
            .collect();
        self.ci_high = (0..k)
            .map(|i| self.coefficients[i] + crit * self.std_errors[i])
            .collect();
        self.covariance = covariance;
        self.covariance_type = kind;
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.position(name).map(|i| self.coefficients[i])
    }

    pub fn std_error(&self, name: &str) -> Option<f64> {
        self.position(name).map(|i| self.std_errors[i])
    }

    pub fn p_value(&self, name: &str) -> Option<f64> {
        self.position(name).map(|i| self.p_values[i])
    }

    /// `(low, high)` 95% interval for a named coefficient.
    pub fn interval(&self, name: &str) -> Option<(f64, f64)> {
        self.position(name).map(|i| (self.ci_low[i], self.ci_high[i]))
    }
}
