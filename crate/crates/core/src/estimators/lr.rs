use serde::Serialize;

use super::stats::chi2_sf;
use crate::error::{Error, Result};

/// Slack allowed for a full model that fits marginally worse than the
/// restricted one because of optimizer tolerance.
pub const LR_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LrTest {
    pub stat: f64,
    pub p_value: f64,
    pub dof: u32,
}

/// `2 (full - restricted)` against chi-square(`dof`).
pub fn lr_test(restricted_ll: f64, full_ll: f64, dof: u32) -> Result<LrTest> {
    let stat = 2.0 * (full_ll - restricted_ll);
    if full_ll < restricted_ll - LR_TOLERANCE || !stat.is_finite() {
        return Err(Error::NegativeLrStat(stat));
    }
    let stat = stat.max(0.0);
    Ok(LrTest {
        stat,
        p_value: chi2_sf(stat, dof as f64),
        dof,
    })
}
