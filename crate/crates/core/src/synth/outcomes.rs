use indexmap::IndexMap;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use super::config::{SynthConfig, D_LAG, S_LAG};
use super::world::{Covariates, World};
use super::{rng, stream};
use crate::error::{Error, Result};
use crate::geo_graph::ProximityMatrix;

/// Self-consistency target for the fixed point, `max |y_t - y_{t-1}|`.
pub const FIXED_POINT_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, Serialize)]
pub struct SynthOutcomes {
    /// Independent cross-sectional draw (no state or year effects).
    pub cross_section: Vec<f64>,
    pub years: Vec<i32>,
    /// `panel[t]`: outcome in period `t`, with state and year effects.
    pub panel: Vec<Vec<f64>>,
    pub state_effects: IndexMap<String, f64>,
    pub year_effects: Vec<f64>,
    /// Largest fixed-point iteration count over all solves.
    pub iterations: usize,
}

/// Standardize with the sample sd; a constant vector maps to zeros.
pub fn zscore_all(v: &[f64]) -> Vec<f64> {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let sd = (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt();
    if sd > 0.0 {
        v.iter().map(|x| (x - mean) / sd).collect()
    } else {
        vec![0.0; v.len()]
    }
}

/// Solve `y = base + s z(Wy) + d z(Ay)` by fixed-point iteration, where `z`
/// standardizes with the sample sd. Returns `(y, iterations)`.
pub fn solve_contagion(
    base: &[f64],
    s: f64,
    d: f64,
    w: &ProximityMatrix,
    a: &ProximityMatrix,
) -> Result<(Vec<f64>, usize)> {
    if s == 0.0 && d == 0.0 {
        return Ok((base.to_vec(), 0));
    }
    let mut y = base.to_vec();
    for it in 1..=MAX_ITERATIONS {
        let mut next = base.to_vec();
        if s != 0.0 {
            for (v, l) in next.iter_mut().zip(zscore_all(&w.mul_vec(&y)?)) {
                *v += s * l;
            }
        }
        if d != 0.0 {
            for (v, l) in next.iter_mut().zip(zscore_all(&a.mul_vec(&y)?)) {
                *v += d * l;
            }
        }
        let diff = next
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        y = next;
        if diff < FIXED_POINT_TOL {
            return Ok((y, it));
        }
        if !diff.is_finite() {
            break;
        }
    }
    Err(Error::Convergence(format!(
        "outcome fixed point did not converge in {MAX_ITERATIONS} iterations; planted contagion too close to instability"
    )))
}

/// `(I - lambda M)^-1 v` by Neumann iteration (converges for |lambda| < 1 and
/// row-stochastic `M`).
fn ar_filter(v: &[f64], lambda: f64, m: &ProximityMatrix) -> Result<Vec<f64>> {
    if lambda == 0.0 {
        return Ok(v.to_vec());
    }
    let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
    let mut u = v.to_vec();
    for _ in 0..MAX_ITERATIONS {
        let mu = m.mul_vec(&u)?;
        let next: Vec<f64> = v.iter().zip(&mu).map(|(e, l)| e + lambda * l).collect();
        let diff = next.iter().zip(&u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        u = next;
        if diff < 1e-14 * scale {
            return Ok(u);
        }
    }
    Err(Error::Convergence("error process (I - lambda W)^-1 e did not converge".into()))
}

/// `u = (I - lambda_n W)^-1 (I - lambda_s A)^-1 e`, `e ~ N(0, noise_sd^2)`.
fn error_draw(
    rng: &mut rand_chacha::ChaCha8Rng,
    cfg: &SynthConfig,
    w: &ProximityMatrix,
    a: &ProximityMatrix,
) -> Result<Vec<f64>> {
    let p = &cfg.planted;
    let normal = Normal::new(0.0, p.noise_sd).map_err(|e| Error::input(e.to_string()))?;
    let e: Vec<f64> = (0..w.n()).map(|_| normal.sample(rng)).collect();
    let v = ar_filter(&e, p.lambda_spatial, a)?;
    ar_filter(&v, p.lambda_network, w)
}

fn linear_part(cfg: &SynthConfig, names: &[String], columns: &[Vec<f64>], n: usize) -> Vec<f64> {
    let p = &cfg.planted;
    let mut base = vec![p.intercept; n];
    for (name, col) in names.iter().zip(columns) {
        let b = p.coefficient(name);
        for (v, x) in base.iter_mut().zip(col) {
            *v += b * x;
        }
    }
    base
}

/// Cross-section and panel outcomes from the planted system
/// `y = a + X beta + s z(Wy) + d z(Ay) + u`. Panel periods add state and year
/// effects; the cross-section is an independent draw without them.
pub fn generate_outcomes(
    world: &World,
    cov: &Covariates,
    w: &ProximityMatrix,
    a: &ProximityMatrix,
    cfg: &SynthConfig,
) -> Result<SynthOutcomes> {
    let n = world.index.len();
    if w.n() != n || a.n() != n {
        return Err(Error::dim("weight matrices do not match the world"));
    }
    let p = &cfg.planted;
    let (s, d) = (p.coefficient(S_LAG), p.coefficient(D_LAG));

    let mut cs_rng = rng(cfg.seed, stream::CROSS_SECTION);
    let mut base = linear_part(cfg, &cov.names, &cov.cross_section, n);
    for (b, u) in base.iter_mut().zip(error_draw(&mut cs_rng, cfg, w, a)?) {
        *b += u;
    }
    let (cross_section, mut iterations) = solve_contagion(&base, s, d, w, a)?;

    let mut pr = rng(cfg.seed, stream::PANEL);
    let state_sd = Normal::new(0.0, p.state_effects_sd).map_err(|e| Error::input(e.to_string()))?;
    let year_sd = Normal::new(0.0, p.year_effects_sd).map_err(|e| Error::input(e.to_string()))?;
    let mut state_effects: IndexMap<String, f64> = IndexMap::new();
    for (_, attr) in world.attrs.iter() {
        if !state_effects.contains_key(&attr.state) {
            state_effects.insert(attr.state.clone(), 0.0);
        }
    }
    state_effects.sort_keys();
    for v in state_effects.values_mut() {
        *v = state_sd.sample(&mut pr);
    }
    let year_effects: Vec<f64> = (0..cfg.n_periods).map(|_| year_sd.sample(&mut pr)).collect();
    let attrs = world.attrs.aligned(&world.index)?;
    let mut panel = Vec::with_capacity(cfg.n_periods);
    for t in 0..cfg.n_periods {
        let mut base = linear_part(cfg, &cov.names, &cov.panel[t], n);
        let u = error_draw(&mut pr, cfg, w, a)?;
        for i in 0..n {
            base[i] += state_effects[&attrs[i].state] + year_effects[t] + u[i];
        }
        let (y, it) = solve_contagion(&base, s, d, w, a)?;
        iterations = iterations.max(it);
        panel.push(y);
    }
    Ok(SynthOutcomes {
        cross_section,
        years: (0..cfg.n_periods as i32).map(|t| cfg.first_year + t).collect(),
        panel,
        state_effects,
        year_effects,
        iterations,
    })
}
