use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const INTERCEPT: &str = "intercept";

/// Named regressor matrix, one row per observation.
///
/// `excluded` marks rows that estimators must drop (isolated regions).
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    names: Vec<String>,
    values: DMatrix<f64>,
    row_ids: Vec<String>,
    excluded: Vec<bool>,
}

impl DesignMatrix {
    pub fn new(row_ids: Vec<String>, names: Vec<String>, values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() != row_ids.len() || values.ncols() != names.len() {
            return Err(Error::dim(format!(
                "design is {}x{} but has {} row ids and {} names",
                values.nrows(),
                values.ncols(),
                row_ids.len(),
                names.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::input(format!("duplicate column name '{n}'")));
            }
        }
        if let Some(c) = (0..values.ncols()).find(|&c| values.column(c).iter().any(|v| !v.is_finite())) {
            return Err(Error::input(format!("column '{}' has non-finite entries", names[c])));
        }
        let n = row_ids.len();
        Ok(Self {
            names,
            values,
            row_ids,
            excluded: vec![false; n],
        })
    }

    pub fn from_columns(row_ids: Vec<String>, columns: Vec<(String, Vec<f64>)>) -> Result<Self> {
        let n = row_ids.len();
        if let Some((name, _)) = columns.iter().find(|(_, c)| c.len() != n) {
            return Err(Error::dim(format!("column '{name}' length differs from {n} rows")));
        }
        let k = columns.len();
        let values = DMatrix::from_fn(n, k, |i, j| columns[j].1[i]);
        Self::new(row_ids, columns.into_iter().map(|(n, _)| n).collect(), values)
    }

    /// Same as [`from_columns`](Self::from_columns) with a leading intercept column.
    pub fn with_intercept(row_ids: Vec<String>, columns: Vec<(String, Vec<f64>)>) -> Result<Self> {
        let n = row_ids.len();
        let mut cols = Vec::with_capacity(columns.len() + 1);
        cols.push((INTERCEPT.to_string(), vec![1.0; n]));
        cols.extend(columns);
        Self::from_columns(row_ids, cols)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn nrows(&self) -> usize {
        self.values.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.values.ncols()
    }

    pub fn excluded(&self) -> &[bool] {
        &self.excluded
    }

    pub fn n_excluded(&self) -> usize {
        self.excluded.iter().filter(|e| **e).count()
    }

    /// Mark additional rows for exclusion (logical OR with existing flags).
    pub fn exclude(&mut self, flags: &[bool]) -> Result<()> {
        if flags.len() != self.nrows() {
            return Err(Error::dim("exclusion mask length differs from rows"));
        }
        for (e, f) in self.excluded.iter_mut().zip(flags) {
            *e |= *f;
        }
        Ok(())
    }

    pub fn keep_mask(&self) -> Vec<bool> {
        self.excluded.iter().map(|e| !e).collect()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        self.position(name)
            .map(|c| self.values.column(c).iter().copied().collect())
    }

    /// Largest over smallest singular value of the active rows.
    pub fn condition_number(&self) -> f64 {
        let x = crate::linalg::select_rows(&self.values, &self.keep_mask());
        let sv = x.singular_values();
        sv.max() / sv.min()
    }
}
