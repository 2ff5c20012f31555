//! Social and spatial proximity econometrics.
//!
//! Builds proximity weight matrices from social-connectedness edge lists and
//! geography, computes socially and spatially lagged outcomes, and fits the
//! regression battery used to compare them: population-weighted least squares
//! with cluster-robust errors, spatial-error maximum likelihood, two-way fixed
//! effects, generalized spatial two-stage least squares, and partially
//! penalized LASSO for covariate selection. A seeded synthetic-world generator
//! plants known parameters so each estimator can be checked for recovery.

pub mod error;
pub mod fmt;
pub mod geo_graph;
pub mod par;

pub use error::{Error, Result};
pub mod lag_vars;
pub mod lasso_select;
pub mod pipeline;
pub mod synth;

pub(crate) mod csvio;
pub mod estimators;

pub(crate) mod dense;
pub(crate) mod linalg;
