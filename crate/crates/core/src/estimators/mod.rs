//! Regression battery: weighted least squares with cluster-robust errors,
//! spatial-error maximum likelihood, two-way fixed effects, generalized spatial
//! two-stage least squares, and likelihood-ratio tests.

mod design;
mod eigen;
mod fit;
mod iv;
mod lr;
mod panel;
mod search;
mod sem;
mod stats;
mod wls;

pub use design::{DesignMatrix, INTERCEPT};
pub use eigen::{spectrum, Spectrum};
pub use fit::{CovarianceType, Diagnostics, FirstStage, ModelFit};
pub use iv::{build_instruments, fit_2sls, fit_g2sls, InstrumentSet, INSTRUMENT_DEDUP_TOL, WEAK_F};
pub use lr::{lr_test, LrTest, LR_TOLERANCE};
pub use panel::{fit_twoway_fe, FeOptions, PanelObservation};
pub use search::brent_maximize;
pub use sem::{fit_sem_ml, ProfilePoint, SemModel, SemOptions};
pub use stats::{chi2_sf, stars, Inference};
pub use wls::{cluster_robust_cov, fit_wls, fit_wls_cluster};
