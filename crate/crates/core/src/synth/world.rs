use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal, Uniform};

use super::config::SynthConfig;
use super::{rng, stream};
use crate::error::{Error, Result};
use crate::geo_graph::region::haversine_unchecked;
use crate::geo_graph::{Centroid, RegionAttr, RegionAttributes, RegionIndex, SciEdgeList, EARTH_RADIUS_KM};

#[derive(Debug, Clone)]
pub struct World {
    pub attrs: RegionAttributes,
    /// Regions sorted by id.
    pub index: RegionIndex,
    /// One orientation per unordered pair.
    pub edges: SciEdgeList,
}

/// Uniform centroids, log-normal populations, states as Voronoi cells around
/// the first `n_states` draws (numbered east to west), gravity SCI.
pub fn generate_world(cfg: &SynthConfig) -> Result<World> {
    cfg.validate()?;
    let n = cfg.n_regions;
    let g = &cfg.geography;

    // uniform on the sphere patch: uniform longitude, uniform in sin(latitude)
    let mut geo = rng(cfg.seed, stream::GEOGRAPHY);
    let (s0, s1) = (g.lat_min.to_radians().sin(), g.lat_max.to_radians().sin());
    let centroids: Vec<Centroid> = (0..n)
        .map(|_| {
            let lat = geo.random_range(s0..s1).asin().to_degrees();
            let lon = geo.random_range(g.lon_min..g.lon_max);
            Centroid { lat, lon }
        })
        .collect();

    let mut pop_rng = rng(cfg.seed, stream::POPULATION);
    let pm = &cfg.population;
    let lognormal = Normal::new(pm.log_mean, pm.log_sd).map_err(|e| Error::input(e.to_string()))?;
    let pops: Vec<f64> = (0..n)
        .map(|_| lognormal.sample(&mut pop_rng).exp().round().max(pm.min_population))
        .collect();

    // state seeds ranked east to west
    let mut seeds: Vec<usize> = (0..cfg.n_states).collect();
    seeds.sort_by(|&a, &b| centroids[b].lon.total_cmp(&centroids[a].lon).then(a.cmp(&b)));
    let state_of: Vec<usize> = (0..n)
        .map(|i| {
            let mut best = (f64::INFINITY, 0);
            for (rank, &s) in seeds.iter().enumerate() {
                let d = haversine_unchecked(centroids[i], centroids[s]);
                if d < best.0 {
                    best = (d, rank);
                }
            }
            best.1
        })
        .collect();

    // FIPS-style ids: 2-digit state + 3-digit county, counties east to west
    let mut ids = vec![String::new(); n];
    for st in 0..cfg.n_states {
        let mut members: Vec<usize> = (0..n).filter(|&i| state_of[i] == st).collect();
        members.sort_by(|&a, &b| centroids[b].lon.total_cmp(&centroids[a].lon).then(a.cmp(&b)));
        if members.len() > 999 {
            return Err(Error::input(format!(
                "state {} has {} regions; at most 999 fit a 3-digit code",
                st + 1,
                members.len()
            )));
        }
        for (c, &i) in members.iter().enumerate() {
            ids[i] = format!("{:02}{:03}", st + 1, c + 1);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| ids[a].cmp(&ids[b]));

    let mut attrs = RegionAttributes::new();
    for &i in &order {
        attrs.insert(
            ids[i].clone(),
            RegionAttr {
                state: format!("{:02}", state_of[i] + 1),
                population: pops[i],
                centroid: centroids[i],
            },
        )?;
    }
    let index = attrs.index();

    let mut sci_rng = rng(cfg.seed, stream::SCI);
    let noise = Normal::new(0.0, cfg.sci_model.noise_sd).map_err(|e| Error::input(e.to_string()))?;
    let gamma = cfg.sci_model.gravity_exponent;
    let mut edges = SciEdgeList::with_capacity(n, n * (n - 1) / 2);
    for a in 0..n {
        let i = order[a];
        for &j in &order[a + 1..] {
            let d = haversine_unchecked(centroids[i], centroids[j]);
            if d == 0.0 {
                return Err(Error::CoincidentCentroids {
                    a: ids[i].clone(),
                    b: ids[j].clone(),
                });
            }
            let sci = (pops[i] / 1000.0) * (pops[j] / 1000.0) / d.powf(gamma) * noise.sample(&mut sci_rng).exp();
            edges.push(&ids[i], &ids[j], sci)?;
        }
    }
    Ok(World { attrs, index, edges })
}

/// Covariates aligned with `World::index`.
#[derive(Debug, Clone)]
pub struct Covariates {
    pub names: Vec<String>,
    /// Cross-section, one vector per name.
    pub cross_section: Vec<Vec<f64>>,
    /// `panel[t][c]`: covariate `c` in period `t`.
    pub panel: Vec<Vec<Vec<f64>>>,
    /// Noise candidates for the selection dataset (not in the outcome).
    pub noise_names: Vec<String>,
    pub noise: Vec<Vec<f64>>,
}

/// Random Fourier features approximating a unit-variance Gaussian field with
/// squared-exponential covariance of the given length scale.
struct SmoothField {
    omega: Vec<(f64, f64)>,
    phase: Vec<f64>,
}

impl SmoothField {
    fn draw<R: Rng>(rng: &mut R, n_features: usize, length_scale: f64) -> Self {
        let freq = Normal::new(0.0, 1.0 / length_scale).expect("positive length scale");
        let phase = Uniform::new(0.0, 2.0 * PI).expect("valid range");
        let omega = (0..n_features)
            .map(|_| (freq.sample(rng), freq.sample(rng)))
            .collect();
        let phase = (0..n_features).map(|_| phase.sample(rng)).collect();
        Self { omega, phase }
    }

    fn eval(&self, p: (f64, f64)) -> f64 {
        let scale = (2.0 / self.omega.len() as f64).sqrt();
        scale
            * self
                .omega
                .iter()
                .zip(&self.phase)
                .map(|(w, b)| (w.0 * p.0 + w.1 * p.1 + b).cos())
                .sum::<f64>()
    }
}

pub fn generate_covariates(world: &World, cfg: &SynthConfig) -> Result<Covariates> {
    let c = &cfg.covariates;
    let g = &cfg.geography;
    let lat0 = (0.5 * (g.lat_min + g.lat_max)).to_radians();
    let lon0 = 0.5 * (g.lon_min + g.lon_max);
    // equirectangular projection, km
    let points: Vec<(f64, f64)> = world
        .attrs
        .aligned(&world.index)?
        .iter()
        .map(|a| {
            let x = EARTH_RADIUS_KM * (a.centroid.lon - lon0).to_radians() * lat0.cos();
            let y = EARTH_RADIUS_KM * (a.centroid.lat.to_radians() - lat0);
            (x, y)
        })
        .collect();
    let std_normal = Normal::new(0.0, 1.0).expect("unit normal");

    let mut r = rng(cfg.seed, stream::COVARIATES);
    let field_column = |r: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
        let f = SmoothField::draw(r, c.n_features, c.length_scale_km);
        points
            .iter()
            .map(|&p| c.smooth_sd * f.eval(p) + c.noise_sd * std_normal.sample(r))
            .collect()
    };

    let names = cfg.planted.covariate_names();
    let cross_section: Vec<Vec<f64>> = names.iter().map(|_| field_column(&mut r)).collect();
    let panel = (0..cfg.n_periods)
        .map(|_| {
            cross_section
                .iter()
                .map(|col| {
                    col.iter()
                        .map(|v| v + c.period_noise_sd * std_normal.sample(&mut r))
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut sel = rng(cfg.seed, stream::SELECTION);
    let noise_names: Vec<String> = (1..=c.n_noise_candidates).map(|k| format!("noise{k}")).collect();
    let noise = noise_names.iter().map(|_| field_column(&mut sel)).collect();
    Ok(Covariates {
        names,
        cross_section,
        panel,
        noise_names,
        noise,
    })
}
