use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::path::{LassoFit, LassoOptions, LassoProblem};
use crate::error::{Error, Result};
use crate::par;

/// Refold attempts when a fold has a constant outcome or a training fold a
/// constant column.
const MAX_FOLD_ATTEMPTS: usize = 5;

/// Fold of each row: a seeded shuffle, then position modulo `k`.
pub fn fold_assignment(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut fold = vec![0; n];
    for (pos, &i) in perm.iter().enumerate() {
        fold[i] = pos % k;
    }
    fold
}

#[derive(Debug, Clone, Serialize)]
pub struct CvResult {
    pub lambdas: Vec<f64>,
    /// Pooled held-out mean squared error per lambda.
    pub mse: Vec<f64>,
    /// Standard error of the per-fold MSEs.
    pub mse_se: Vec<f64>,
    pub index_min: usize,
    pub lambda_min: f64,
    pub folds: Vec<usize>,
    pub attempts: usize,
}

fn degenerate(p: &LassoProblem) -> bool {
    let constant_y = p.y.iter().all(|v| *v == p.y[0]);
    constant_y
        || (0..p.p()).any(|j| {
            let c = p.x.column(j);
            c.iter().all(|v| *v == c[0])
        })
}

/// k-fold cross-validation on the grid of the full problem; picks the lambda
/// with the smallest pooled held-out MSE (ties go to the larger lambda).
pub fn cross_validate(problem: &LassoProblem, opts: &LassoOptions) -> Result<CvResult> {
    let n = problem.n();
    let k = opts.folds;
    if k < 2 || k > n {
        return Err(Error::input(format!("folds must be in 2..={n}, got {k}")));
    }
    let lambdas = problem.grid(opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut attempts = 0;
    let (folds, training) = loop {
        attempts += 1;
        let folds = fold_assignment(n, k, &mut rng);
        let training: Vec<LassoProblem> = (0..k)
            .map(|f| {
                let rows: Vec<usize> = (0..n).filter(|&i| folds[i] != f).collect();
                problem.rows(&rows)
            })
            .collect();
        let held_out_constant = (0..k).any(|f| {
            let ys: Vec<f64> = (0..n).filter(|&i| folds[i] == f).map(|i| problem.y[i]).collect();
            ys.len() > 1 && ys.iter().all(|v| *v == ys[0])
        });
        if !held_out_constant && !training.iter().any(degenerate) {
            break (folds, training);
        }
        if attempts >= MAX_FOLD_ATTEMPTS {
            return Err(Error::ZeroVariance(format!(
                "a fold has a constant outcome or column after {attempts} fold assignments"
            )));
        }
    };

    let paths: Vec<Vec<LassoFit>> = par::map_range(k, |f| training[f].path(&lambdas, opts))
        .into_iter()
        .collect::<Result<_>>()?;

    let nl = lambdas.len();
    let mut sse = vec![0.0; nl];
    let mut fold_mse = vec![vec![0.0; nl]; k];
    let mut fold_n = vec![0usize; k];
    let mut row = vec![0.0; problem.p()];
    for i in 0..n {
        let f = folds[i];
        fold_n[f] += 1;
        for (j, v) in row.iter_mut().enumerate() {
            *v = problem.x[(i, j)];
        }
        for (l, fit) in paths[f].iter().enumerate() {
            let e = problem.y[i] - fit.predict(&row);
            sse[l] += e * e;
            fold_mse[f][l] += e * e;
        }
    }
    let mse: Vec<f64> = sse.iter().map(|s| s / n as f64).collect();
    let mse_se: Vec<f64> = (0..nl)
        .map(|l| {
            let per: Vec<f64> = (0..k).map(|f| fold_mse[f][l] / fold_n[f] as f64).collect();
            let m = per.iter().sum::<f64>() / k as f64;
            let var = per.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (k - 1) as f64;
            (var / k as f64).sqrt()
        })
        .collect();
    let mut index_min = 0;
    for l in 1..nl {
        if mse[l] < mse[index_min] {
            index_min = l;
        }
    }
    Ok(CvResult {
        lambda_min: lambdas[index_min],
        lambdas,
        mse,
        mse_se,
        index_min,
        folds,
        attempts,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Selection {
    pub lambda: f64,
    /// Forced-in columns and penalized columns with nonzero coefficients, in input order.
    pub selected: Vec<String>,
    pub fit: LassoFit,
    pub cv: CvResult,
}

/// Cross-validate, refit on all rows along the grid down to `lambda_min`, and
/// report the surviving columns.
pub fn select_covariates(problem: &LassoProblem, opts: &LassoOptions) -> Result<Selection> {
    let cv = cross_validate(problem, opts)?;
    let path = problem.path(&cv.lambdas[..=cv.index_min], opts)?;
    let fit = path.into_iter().last().expect("non-empty path");
    let selected = (0..problem.p())
        .filter(|&j| problem.penalty[j] == 0.0 || fit.beta_std[j] != 0.0)
        .map(|j| problem.names[j].clone())
        .collect();
    Ok(Selection {
        lambda: cv.lambda_min,
        selected,
        fit,
        cv,
    })
}
