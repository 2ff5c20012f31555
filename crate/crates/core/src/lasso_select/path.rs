use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

/// Raw design, outcome and per-column penalty factors.
#[derive(Debug, Clone)]
pub struct LassoProblem {
    pub names: Vec<String>,
    pub x: DMatrix<f64>,
    pub y: Vec<f64>,
    /// `pi_j >= 0`; zero marks a forced-in column.
    pub penalty: Vec<f64>,
}

impl LassoProblem {
    pub fn new(names: Vec<String>, x: DMatrix<f64>, y: Vec<f64>, penalty: Vec<f64>) -> Result<Self> {
        let (n, p) = x.shape();
        if names.len() != p || penalty.len() != p || y.len() != n {
            return Err(Error::dim(format!(
                "lasso problem: X is {n}x{p}, {} names, {} penalties, {} outcomes",
                names.len(),
                penalty.len(),
                y.len()
            )));
        }
        if let Some(j) = penalty.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::input(format!("penalty factor for '{}' must be >= 0", names[j])));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::input("lasso inputs must be finite"));
        }
        if n < 2 {
            return Err(Error::TooFewObservations { n, k: p });
        }
        Ok(Self { names, x, y, penalty })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.penalty.len()
    }

    /// Drop constant penalized columns, returning one warning per column.
    /// A constant unpenalized column is an error.
    pub fn drop_constant_penalized(self) -> Result<(Self, Vec<String>)> {
        let constant: Vec<usize> = (0..self.p())
            .filter(|&j| {
                let c = self.x.column(j);
                c.iter().all(|v| *v == c[0])
            })
            .collect();
        if let Some(&j) = constant.iter().find(|&&j| self.penalty[j] == 0.0) {
            return Err(Error::ZeroVariance(format!("unpenalized column '{}' is constant", self.names[j])));
        }
        if constant.is_empty() {
            return Ok((self, vec![]));
        }
        let keep: Vec<usize> = (0..self.p()).filter(|j| !constant.contains(j)).collect();
        let warnings = constant
            .iter()
            .map(|&j| format!("dropped constant penalized column '{}'", self.names[j]))
            .collect();
        let problem = LassoProblem {
            names: keep.iter().map(|&j| self.names[j].clone()).collect(),
            x: self.x.select_columns(&keep),
            y: self.y,
            penalty: keep.iter().map(|&j| self.penalty[j]).collect(),
        };
        Ok((problem, warnings))
    }

    /// Subproblem on the given rows.
    pub fn rows(&self, rows: &[usize]) -> LassoProblem {
        LassoProblem {
            names: self.names.clone(),
            x: self.x.select_rows(rows),
            y: rows.iter().map(|&i| self.y[i]).collect(),
            penalty: self.penalty.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LassoOptions {
    pub n_lambda: usize,
    /// Smallest grid value as a fraction of `lambda_max`.
    pub lambda_min_ratio: f64,
    /// Stop cycling when no coefficient moves by more than this.
    pub tolerance: f64,
    /// Additional KKT check after convergence (standardized gradient scale).
    pub kkt_tolerance: f64,
    pub max_cycles: usize,
    pub folds: usize,
    pub seed: u64,
}

impl Default for LassoOptions {
    fn default() -> Self {
        Self {
            n_lambda: 100,
            lambda_min_ratio: 1e-4,
            tolerance: 1e-7,
            kkt_tolerance: 1e-9,
            max_cycles: 100_000,
            folds: 10,
            seed: 0,
        }
    }
}

/// Column-standardized design (sample sd) and centred outcome.
#[derive(Debug, Clone)]
pub struct Standardized {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub x_mean: Vec<f64>,
    pub x_sd: Vec<f64>,
    pub y_mean: f64,
}

impl Standardized {
    pub fn new(problem: &LassoProblem) -> Result<Self> {
        let (n, p) = problem.x.shape();
        let mut x = problem.x.clone();
        let mut x_mean = vec![0.0; p];
        let mut x_sd = vec![0.0; p];
        for j in 0..p {
            let col = x.column(j);
            let m = col.mean();
            let sd = (col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1) as f64).sqrt();
            if !(sd > 0.0) {
                return Err(Error::ZeroVariance(problem.names[j].clone()));
            }
            x_mean[j] = m;
            x_sd[j] = sd;
            for i in 0..n {
                x[(i, j)] = (x[(i, j)] - m) / sd;
            }
        }
        let y_mean = problem.y.iter().sum::<f64>() / n as f64;
        let y = DVector::from_iterator(n, problem.y.iter().map(|v| v - y_mean));
        Ok(Self {
            x,
            y,
            x_mean,
            x_sd,
            y_mean,
        })
    }

    /// Original-scale `(intercept, slopes)` from standardized coefficients.
    pub fn unstandardize(&self, beta: &[f64]) -> (f64, Vec<f64>) {
        let slopes: Vec<f64> = beta.iter().zip(&self.x_sd).map(|(b, s)| b / s).collect();
        let intercept = self.y_mean - slopes.iter().zip(&self.x_mean).map(|(b, m)| b * m).sum::<f64>();
        (intercept, slopes)
    }
}

/// One point on the path, standardized and original scale.
#[derive(Debug, Clone, Serialize)]
pub struct LassoFit {
    pub lambda: f64,
    pub beta_std: Vec<f64>,
    pub intercept: f64,
    pub beta: Vec<f64>,
    pub cycles: usize,
    pub kkt_violation: f64,
}

impl LassoFit {
    pub fn predict(&self, row: &[f64]) -> f64 {
        self.intercept + row.iter().zip(&self.beta).map(|(x, b)| x * b).sum::<f64>()
    }
}

pub fn soft_threshold(z: f64, t: f64) -> f64 {
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

/// Largest KKT violation of standardized coefficients `beta` at `lambda`:
/// with gradient `g_j = x_j' r / n`, active or unpenalized columns need
/// `g_j = lambda pi_j sign(b_j)`, inactive ones `|g_j| <= lambda pi_j`.
pub fn kkt_violation(s: &Standardized, penalty: &[f64], beta: &[f64], lambda: f64) -> f64 {
    let n = s.y.len() as f64;
    let r = &s.y - &s.x * DVector::from_column_slice(beta);
    let mut worst = 0.0f64;
    for j in 0..beta.len() {
        let g = s.x.column(j).dot(&r) / n;
        let t = lambda * penalty[j];
        let v = if beta[j] != 0.0 || penalty[j] == 0.0 {
            (g - t * beta[j].signum() * (penalty[j] > 0.0) as u8 as f64).abs()
        } else {
            (g.abs() - t).max(0.0)
        };
        worst = worst.max(v);
    }
    worst
}

/// Solution with every penalized coefficient at zero: least squares on the
/// unpenalized columns. Returns the full coefficient vector and its residual.
fn null_fit(s: &Standardized, penalty: &[f64]) -> (Vec<f64>, DVector<f64>) {
    let mut beta = vec![0.0; penalty.len()];
    let free: Vec<usize> = (0..penalty.len()).filter(|&j| penalty[j] == 0.0).collect();
    if free.is_empty() {
        return (beta, s.y.clone());
    }
    let xf = s.x.select_columns(&free);
    let bf = xf
        .clone()
        .svd(true, true)
        .solve(&s.y, 1e-12)
        .unwrap_or_else(|_| DVector::zeros(free.len()));
    for (k, &j) in free.iter().enumerate() {
        beta[j] = bf[k];
    }
    (beta, &s.y - xf * bf)
}

fn lambda_max_from(s: &Standardized, penalty: &[f64], r0: &DVector<f64>) -> f64 {
    let n = s.y.len() as f64;
    (0..penalty.len())
        .filter(|&j| penalty[j] > 0.0)
        .map(|j| s.x.column(j).dot(r0).abs() / (n * penalty[j]))
        .fold(0.0, f64::max)
}

/// `max_j |x_j' r0| / (n pi_j)` over penalized columns, where `r0` is the
/// residual after fitting the unpenalized columns: the smallest lambda at
/// which every penalized coefficient is zero.
pub fn lambda_max(s: &Standardized, penalty: &[f64]) -> f64 {
    lambda_max_from(s, penalty, &null_fit(s, penalty).1)
}

/// `n_lambda` log-spaced values from `lambda_max` down to `ratio * lambda_max`.
pub fn lambda_grid(lambda_max: f64, n_lambda: usize, ratio: f64) -> Vec<f64> {
    if n_lambda == 1 {
        return vec![lambda_max];
    }
    let (hi, lo) = (lambda_max.ln(), (lambda_max * ratio).ln());
    (0..n_lambda)
        .map(|i| (hi + (lo - hi) * i as f64 / (n_lambda - 1) as f64).exp())
        .collect()
}

/// Coordinate-descent solver on a fixed standardized problem.
pub(crate) struct Solver<'a> {
    s: &'a Standardized,
    penalty: &'a [f64],
    /// `x_j' x_j / n`
    scale: Vec<f64>,
    beta: Vec<f64>,
    r: DVector<f64>,
    /// Exact solution for any lambda >= `lambda_max`.
    null_beta: Vec<f64>,
    null_r: DVector<f64>,
    lambda_max: f64,
}

impl<'a> Solver<'a> {
    pub(crate) fn new(s: &'a Standardized, penalty: &'a [f64]) -> Self {
        let n = s.y.len() as f64;
        let p = penalty.len();
        let (null_beta, null_r) = null_fit(s, penalty);
        Self {
            s,
            penalty,
            scale: (0..p).map(|j| s.x.column(j).norm_squared() / n).collect(),
            beta: vec![0.0; p],
            r: s.y.clone(),
            lambda_max: lambda_max_from(s, penalty, &null_r),
            null_beta,
            null_r,
        }
    }

    fn cycle(&mut self, lambda: f64) -> f64 {
        let n = self.s.y.len() as f64;
        let mut max_change = 0.0f64;
        for j in 0..self.beta.len() {
            let xj = self.s.x.column(j);
            let old = self.beta[j];
            let rho = xj.dot(&self.r) / n + self.scale[j] * old;
            let new = if self.penalty[j] == 0.0 {
                rho / self.scale[j]
            } else {
                soft_threshold(rho, lambda * self.penalty[j]) / self.scale[j]
            };
            if new != old {
                self.r.axpy(old - new, &xj, 1.0);
                self.beta[j] = new;
                max_change = max_change.max((new - old).abs());
            }
        }
        max_change
    }

    /// Solve at `lambda`, warm-started from the current coefficients.
    pub(crate) fn solve(&mut self, lambda: f64, opts: &LassoOptions) -> Result<LassoFit> {
        if lambda >= self.lambda_max {
            // closed form: descent would leave tolerance-sized residue in penalized coordinates
            self.beta.clone_from(&self.null_beta);
            self.r.clone_from(&self.null_r);
            return Ok(self.result(lambda, 0));
        }
        let mut cycles = 0;
        loop {
            loop {
                cycles += 1;
                if self.cycle(lambda) < opts.tolerance {
                    break;
                }
                if cycles >= opts.max_cycles {
                    return Err(Error::Convergence(format!(
                        "coordinate descent did not converge at lambda {lambda} in {cycles} cycles"
                    )));
                }
            }
            // residual drift from incremental updates: refresh, then verify KKT
            self.r = &self.s.y - &self.s.x * DVector::from_column_slice(&self.beta);
            let v = kkt_violation(self.s, self.penalty, &self.beta, lambda);
            if v <= opts.kkt_tolerance {
                return Ok(self.result(lambda, cycles));
            }
            if cycles >= opts.max_cycles {
                return Err(Error::Convergence(format!(
                    "KKT violation {v:e} at lambda {lambda} after {cycles} cycles"
                )));
            }
        }
    }
}

impl Solver<'_> {
    fn result(&self, lambda: f64, cycles: usize) -> LassoFit {
        let (intercept, beta) = self.s.unstandardize(&self.beta);
        LassoFit {
            lambda,
            beta_std: self.beta.clone(),
            intercept,
            beta,
            cycles,
            kkt_violation: kkt_violation(self.s, self.penalty, &self.beta, lambda),
        }
    }
}

impl LassoProblem {
    /// Fits along `lambdas` (in the given order) with warm starts.
    pub fn path(&self, lambdas: &[f64], opts: &LassoOptions) -> Result<Vec<LassoFit>> {
        let s = Standardized::new(self)?;
        let mut solver = Solver::new(&s, &self.penalty);
        lambdas.iter().map(|&l| solver.solve(l, opts)).collect()
    }

    pub fn fit(&self, lambda: f64, opts: &LassoOptions) -> Result<LassoFit> {
        Ok(self.path(&[lambda], opts)?.remove(0))
    }

    /// Default grid for this problem.
    pub fn grid(&self, opts: &LassoOptions) -> Result<Vec<f64>> {
        let s = Standardized::new(self)?;
        let lmax = lambda_max(&s, &self.penalty);
        if !(lmax > 0.0) {
            return Err(Error::input("lambda_max is zero: no penalized column correlates with y"));
        }
        Ok(lambda_grid(lmax, opts.n_lambda, opts.lambda_min_ratio))
    }
}
