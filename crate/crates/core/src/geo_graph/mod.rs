//! Proximity weight matrices over regions.
//!
//! Social weights come from a social-connectedness (SCI) edge list scaled by
//! alter population; spatial weights use `1 + 1/d` on great-circle distances
//! in kilometres, with a slow-decay variant `1 + d^-p`. Both can be collapsed
//! to a parent-state level.

mod edges;
pub(crate) mod region;
mod weights;

pub use edges::{SciEdge, SciEdgeList};
pub use region::{
    haversine_distance, Centroid, RegionAttr, RegionAttributes, RegionIndex, EARTH_RADIUS_KM,
};
pub use weights::{
    aggregate_state_weights, build_decay_weights, build_social_weights, build_spatial_weights,
    build_state_spatial_weights, state_centroids, ProximityMatrix, WeightKind,
};
