use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient names of the standardized social and spatial lags.
pub const S_LAG: &str = "s_lag";
pub const D_LAG: &str = "d_lag";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Planted {
    pub intercept: f64,
    /// Named coefficients. `s_lag` and `d_lag` multiply the standardized lags
    /// of the outcome; every other name is a generated covariate.
    pub beta: IndexMap<String, f64>,
    pub lambda_network: f64,
    pub lambda_spatial: f64,
    pub state_effects_sd: f64,
    pub year_effects_sd: f64,
    pub noise_sd: f64,
}

impl Default for Planted {
    fn default() -> Self {
        let beta = [(S_LAG, 12.5), (D_LAG, 1.1), ("x1", 16.0), ("x2", -10.0), ("x3", 6.0)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        Self {
            intercept: 60.0,
            beta,
            lambda_network: 0.0,
            lambda_spatial: 0.0,
            state_effects_sd: 3.0,
            year_effects_sd: 2.0,
            noise_sd: 0.3,
        }
    }
}

impl Planted {
    pub fn coefficient(&self, name: &str) -> f64 {
        self.beta.get(name).copied().unwrap_or(0.0)
    }

    /// Covariate names, in declaration order.
    pub fn covariate_names(&self) -> Vec<String> {
        self.beta
            .keys()
            .filter(|k| *k != S_LAG && *k != D_LAG)
            .cloned()
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SciModel {
    /// `SCI_ij ~ n_i n_j / d_ij^gravity_exponent`.
    pub gravity_exponent: f64,
    /// Sd of the multiplicative log-normal noise.
    pub noise_sd: f64,
}

impl Default for SciModel {
    fn default() -> Self {
        Self {
            gravity_exponent: 2.0,
            noise_sd: 0.5,
        }
    }
}

/// Bounding box for uniform centroid sampling (degrees). The default is a
/// compact 10 km box: the `1 + 1/d` kernel is close to uniform once distances
/// reach tens of kilometres, which leaves the spatial-error parameter weakly
/// identified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Geography {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
}

impl Default for Geography {
    fn default() -> Self {
        Self {
            lat_min: 37.0,
            lat_max: 37.09,
            lon_min: -90.0,
            lon_max: -89.88,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PopulationModel {
    pub log_mean: f64,
    pub log_sd: f64,
    pub min_population: f64,
}

impl Default for PopulationModel {
    fn default() -> Self {
        Self {
            log_mean: 10.3,
            log_sd: 0.3,
            min_population: 500.0,
        }
    }
}

/// Covariates are a smooth random-Fourier field plus iid noise, so that their
/// social and spatial lags carry exogenous structured variation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CovariateModel {
    pub smooth_sd: f64,
    pub noise_sd: f64,
    pub length_scale_km: f64,
    pub n_features: usize,
    /// Extra iid noise added per panel period.
    pub period_noise_sd: f64,
    /// Pure-noise candidate columns in the selection dataset.
    pub n_noise_candidates: usize,
}

impl Default for CovariateModel {
    fn default() -> Self {
        Self {
            smooth_sd: 1.0,
            noise_sd: 0.5,
            length_scale_km: 2.5,
            n_features: 64,
            period_noise_sd: 0.3,
            n_noise_candidates: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthConfig {
    pub n_regions: usize,
    pub n_states: usize,
    pub n_periods: usize,
    pub first_year: i32,
    pub seed: u64,
    pub planted: Planted,
    pub sci_model: SciModel,
    pub geography: Geography,
    pub population: PopulationModel,
    pub covariates: CovariateModel,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_regions: 3108,
            n_states: 49,
            n_periods: 2,
            first_year: 2018,
            seed: 20240501,
            planted: Planted::default(),
            sci_model: SciModel::default(),
            geography: Geography::default(),
            population: PopulationModel::default(),
            covariates: CovariateModel::default(),
        }
    }
}

impl SynthConfig {
    /// Every violated constraint, one message each.
    pub fn problems(&self) -> Vec<String> {
        let mut out = vec![];
        let p = &self.planted;
        if self.n_regions < 3 {
            out.push(format!("n_regions must be at least 3, got {}", self.n_regions));
        }
        if self.n_states == 0 || self.n_states > self.n_regions {
            out.push(format!("n_states must be in 1..=n_regions, got {}", self.n_states));
        }
        if self.n_periods == 0 {
            out.push("n_periods must be at least 1".into());
        }
        for (name, l) in [("lambda_network", p.lambda_network), ("lambda_spatial", p.lambda_spatial)] {
            if !(l.abs() < 1.0) {
                out.push(format!("planted.{name} must lie in (-1, 1), got {l}"));
            }
        }
        for (name, v) in [("state_effects_sd", p.state_effects_sd), ("year_effects_sd", p.year_effects_sd)] {
            if !(v.is_finite() && v >= 0.0) {
                out.push(format!("planted.{name} must be >= 0, got {v}"));
            }
        }
        if !(p.noise_sd.is_finite() && p.noise_sd > 0.0) {
            out.push(format!("planted.noise_sd must be positive, got {}", p.noise_sd));
        }
        if let Some((k, _)) = p.beta.iter().find(|(_, v)| !v.is_finite()) {
            out.push(format!("planted.beta.{k} is not finite"));
        }
        if !p.intercept.is_finite() {
            out.push("planted.intercept is not finite".into());
        }
        let s = &self.sci_model;
        if !(s.gravity_exponent.is_finite() && s.gravity_exponent >= 0.0) {
            out.push(format!("sci_model.gravity_exponent must be >= 0, got {}", s.gravity_exponent));
        }
        if !(s.noise_sd.is_finite() && s.noise_sd >= 0.0) {
            out.push(format!("sci_model.noise_sd must be >= 0, got {}", s.noise_sd));
        }
        let g = &self.geography;
        if !(-90.0..=90.0).contains(&g.lat_min) || !(-90.0..=90.0).contains(&g.lat_max) || g.lat_min >= g.lat_max {
            out.push(format!("geography latitude range [{}, {}] is invalid", g.lat_min, g.lat_max));
        }
        if !(-180.0..=180.0).contains(&g.lon_min) || !(-180.0..=180.0).contains(&g.lon_max) || g.lon_min >= g.lon_max {
            out.push(format!("geography longitude range [{}, {}] is invalid", g.lon_min, g.lon_max));
        }
        let pm = &self.population;
        if !(pm.log_mean.is_finite() && pm.log_sd.is_finite() && pm.log_sd >= 0.0 && pm.min_population > 0.0) {
            out.push("population model needs finite log_mean, log_sd >= 0 and min_population > 0".into());
        }
        let c = &self.covariates;
        if !(c.smooth_sd >= 0.0 && c.noise_sd >= 0.0 && c.period_noise_sd >= 0.0 && c.length_scale_km > 0.0) {
            out.push("covariate sds must be >= 0 and length_scale_km > 0".into());
        }
        if c.n_features == 0 {
            out.push("covariates.n_features must be positive".into());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.problems();
        if p.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(p))
        }
    }
}
