use std::io::Write;

use super::rates::OutcomeVector;
use crate::error::{Error, Result};
use crate::fmt::f64_17;
use crate::geo_graph::{ProximityMatrix, RegionIndex, WeightKind};

/// `s_{-i} = sum_{j != i} w_ij y_j` (or the spatial analogue), one value per region.
#[derive(Debug, Clone)]
pub struct LaggedVariable {
    pub index: RegionIndex,
    pub values: Vec<f64>,
    pub kind: WeightKind,
    pub standardized: bool,
    /// Mean and sample sd of the values before standardization.
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    /// Rows from isolated regions: value 0, dropped by estimators.
    pub excluded: Vec<bool>,
}

impl LaggedVariable {
    /// Undo standardization (`x * sd + mean` on included rows).
    pub fn unstandardized(&self) -> Vec<f64> {
        match (self.standardized, self.mean, self.sd) {
            (true, Some(m), Some(s)) => self
                .values
                .iter()
                .zip(&self.excluded)
                .map(|(&v, &ex)| if ex { v } else { v * s + m })
                .collect(),
            _ => self.values.clone(),
        }
    }
}

pub fn compute_lag(y: &OutcomeVector, m: &ProximityMatrix) -> Result<LaggedVariable> {
    if y.index != *m.index() {
        return Err(Error::dim(format!(
            "outcome index ({} regions) differs from weight index ({} regions)",
            y.index.len(),
            m.n()
        )));
    }
    let values = m.mul_vec(&y.rate)?;
    Ok(LaggedVariable {
        index: y.index.clone(),
        values,
        kind: m.kind(),
        standardized: false,
        mean: None,
        sd: None,
        excluded: m.isolated().to_vec(),
    })
}

/// Sample mean and sd (divisor n - 1) over rows where `mask` is false.
pub(crate) fn mean_sd(values: &[f64], mask: &[bool]) -> (f64, f64, usize) {
    let (mut sum, mut n) = (0.0, 0usize);
    for (&v, &ex) in values.iter().zip(mask) {
        if !ex {
            sum += v;
            n += 1;
        }
    }
    if n == 0 {
        return (f64::NAN, f64::NAN, 0);
    }
    let mean = sum / n as f64;
    let ss: f64 = values
        .iter()
        .zip(mask)
        .filter(|(_, &ex)| !ex)
        .map(|(&v, _)| (v - mean) * (v - mean))
        .sum();
    let sd = if n > 1 { (ss / (n - 1) as f64).sqrt() } else { f64::NAN };
    (mean, sd, n)
}

pub(crate) fn zscore(values: &[f64], mask: &[bool]) -> Result<(Vec<f64>, f64, f64)> {
    let (mean, sd, n) = mean_sd(values, mask);
    if n < 2 || !(sd > 0.0) {
        return Err(Error::ZeroVariance(format!(
            "cannot standardize: {n} usable values, sd = {sd}"
        )));
    }
    let out = values
        .iter()
        .zip(mask)
        .map(|(&v, &ex)| if ex { 0.0 } else { (v - mean) / sd })
        .collect();
    Ok((out, mean, sd))
}

pub fn standardize(v: &LaggedVariable) -> Result<LaggedVariable> {
    let (values, mean, sd) = zscore(&v.values, &v.excluded)
        .map_err(|e| Error::ZeroVariance(format!("{} lag: {e}", v.kind.as_str())))?;
    Ok(LaggedVariable {
        index: v.index.clone(),
        values,
        kind: v.kind,
        standardized: true,
        mean: Some(mean),
        sd: Some(sd),
        excluded: v.excluded.clone(),
    })
}

/// `region_id,value,kind,standardized`, one row per region per lag.
pub fn write_lags_csv<W: Write>(writer: W, lags: &[&LaggedVariable]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["region_id", "value", "kind", "standardized"])?;
    for lag in lags {
        for (i, v) in lag.values.iter().enumerate() {
            w.write_record([
                lag.index.id(i),
                &f64_17(*v),
                lag.kind.as_str(),
                if lag.standardized { "true" } else { "false" },
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
