//! Reference distributions for Wald-type inference.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal, StudentsT};

/// Distribution used for p-values and confidence intervals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "distribution", rename_all = "snake_case")]
pub enum Inference {
    StudentT { dof: f64 },
    Normal,
}

/// Beyond this many degrees of freedom statrs' Student-t loses accuracy; the
/// normal differs from t by less than 1e-5 in p-value there.
const T_NORMAL_DOF: f64 = 1e5;

impl Inference {
    fn effective(&self) -> Inference {
        match self {
            Inference::StudentT { dof } if *dof > T_NORMAL_DOF => Inference::Normal,
            other => *other,
        }
    }

    /// Two-sided p-value for a z/t statistic.
    pub fn p_value(&self, stat: f64) -> f64 {
        if !stat.is_finite() {
            return if stat.is_nan() { f64::NAN } else { 0.0 };
        }
        let tail = match self.effective() {
            Inference::StudentT { dof } => StudentsT::new(0.0, 1.0, dof)
                .map(|d| d.sf(stat.abs()))
                .unwrap_or(f64::NAN),
            Inference::Normal => standard_normal().sf(stat.abs()),
        };
        (2.0 * tail).min(1.0)
    }

    /// Two-sided critical value at the given confidence level.
    pub fn critical(&self, level: f64) -> f64 {
        let q = 0.5 + level / 2.0;
        match self.effective() {
            Inference::StudentT { dof } => StudentsT::new(0.0, 1.0, dof)
                .map(|d| d.inverse_cdf(q))
                .unwrap_or(f64::NAN),
            Inference::Normal => standard_normal().inverse_cdf(q),
        }
    }
}

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("valid normal")
}

/// Upper-tail chi-square probability.
pub fn chi2_sf(stat: f64, dof: f64) -> f64 {
    if stat <= 0.0 {
        return 1.0;
    }
    ChiSquared::new(dof).map(|d| d.sf(stat)).unwrap_or(f64::NAN)
}

/// Significance stars: `***` p < 0.001, `**` p < 0.01, `*` p < 0.05.
pub fn stars(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}
