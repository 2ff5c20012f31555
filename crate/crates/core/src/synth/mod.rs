//! Seeded synthetic worlds: regions, states, SCI graphs, covariates and
//! outcomes with planted coefficients.
//!
//! Every random component draws from its own ChaCha8 stream of the same seed,
//! so adding draws to one component never shifts another.

mod config;
mod export;
mod outcomes;
mod world;

pub use config::{CovariateModel, Geography, Planted, PopulationModel, SciModel, SynthConfig, D_LAG, S_LAG};
pub use export::{write_fixture, FIXTURE_FILES};
pub use outcomes::{generate_outcomes, solve_contagion, zscore_all, SynthOutcomes};
pub use world::{generate_covariates, generate_world, Covariates, World};

use crate::error::Result;
use crate::geo_graph::{build_social_weights, build_spatial_weights, ProximityMatrix};

/// Stream ids, one per random component.
pub(crate) mod stream {
    pub const GEOGRAPHY: u64 = 1;
    pub const POPULATION: u64 = 2;
    pub const SCI: u64 = 3;
    pub const COVARIATES: u64 = 4;
    pub const CROSS_SECTION: u64 = 5;
    pub const PANEL: u64 = 6;
    pub const SELECTION: u64 = 7;
    pub const RECORDS: u64 = 8;
}

pub(crate) fn rng(seed: u64, stream: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// A generated world with its weight matrices, covariates and outcomes.
#[derive(Debug, Clone)]
pub struct SynthData {
    pub config: SynthConfig,
    pub world: World,
    pub social: ProximityMatrix,
    pub spatial: ProximityMatrix,
    pub covariates: Covariates,
    pub outcomes: SynthOutcomes,
}

impl SynthData {
    pub fn generate(config: &SynthConfig) -> Result<Self> {
        config.validate()?;
        let world = generate_world(config)?;
        let social = build_social_weights(&world.edges, &world.attrs, &world.index)?;
        let spatial = build_spatial_weights(&world.attrs, &world.index)?;
        let covariates = generate_covariates(&world, config)?;
        let outcomes = generate_outcomes(&world, &covariates, &social, &spatial, config)?;
        Ok(Self {
            config: config.clone(),
            world,
            social,
            spatial,
            covariates,
            outcomes,
        })
    }
}
