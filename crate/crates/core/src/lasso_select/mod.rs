//! Partially penalized LASSO for covariate selection.
//!
//! Minimizes `(1/2n) ||y - X b||^2 + lambda sum_j pi_j |b_j|` on standardized
//! columns and centred `y` by cyclic coordinate descent. Columns with
//! `pi_j = 0` are always kept and never soft-thresholded. The penalty level is
//! chosen by seeded k-fold cross-validation on a shared log-spaced grid.

mod cv;
mod path;

pub use cv::{cross_validate, fold_assignment, select_covariates, CvResult, Selection};
pub use path::{
    kkt_violation, lambda_grid, lambda_max, soft_threshold, LassoFit, LassoOptions, LassoProblem,
    Standardized,
};
