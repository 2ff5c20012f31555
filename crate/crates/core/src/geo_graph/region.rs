use std::io::{Read, Write};
use std::path::Path;

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};

use crate::csvio::check_header;
use crate::error::{Error, Result};
use crate::fmt::f64_17;

/// Mean Earth radius (IUGG), kilometres.
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

/// Ordered set of region identifiers with O(1) id -> position lookup.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RegionIndex {
    ids: IndexSet<String>,
}

impl RegionIndex {
    pub fn new<I, S>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut set = IndexSet::new();
        for id in ids {
            let id = id.into();
            if !set.insert(id.clone()) {
                return Err(Error::input(format!("duplicate region id '{id}'")));
            }
        }
        Ok(Self { ids: set })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.ids.get_index_of(id)
    }

    pub fn id(&self, i: usize) -> &str {
        self.ids.get_index(i).map(String::as_str).expect("index in range")
    }

    pub fn ids(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        self.ids.iter().map(String::as_str)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.ids.contains(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Centroid {
    pub lat: f64,
    pub lon: f64,
}

impl Centroid {
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        let c = Centroid { lat, lon };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if !self.lat.is_finite() || !self.lon.is_finite() {
            return Err(Error::input(format!(
                "non-finite coordinates ({}, {})",
                self.lat, self.lon
            )));
        }
        if !(-90.0..=90.0).contains(&self.lat) || !(-180.0..=180.0).contains(&self.lon) {
            return Err(Error::input(format!(
                "coordinates out of range ({}, {})",
                self.lat, self.lon
            )));
        }
        Ok(())
    }
}

/// Great-circle distance in kilometres.
pub fn haversine_distance(a: Centroid, b: Centroid) -> Result<f64> {
    if ![a.lat, a.lon, b.lat, b.lon].iter().all(|v| v.is_finite()) {
        return Err(Error::input("non-finite coordinates in distance"));
    }
    Ok(haversine_unchecked(a, b))
}

pub(crate) fn haversine_unchecked(a: Centroid, b: Centroid) -> f64 {
    let (phi1, phi2) = (a.lat.to_radians(), b.lat.to_radians());
    let dphi = phi2 - phi1;
    let dlambda = (b.lon - a.lon).to_radians();
    let h = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
    let h = h.clamp(0.0, 1.0);
    2.0 * EARTH_RADIUS_KM * h.sqrt().atan2((1.0 - h).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionAttr {
    pub state: String,
    pub population: f64,
    pub centroid: Centroid,
}

/// Per-region population, centroid and parent state, in file order.
#[derive(Debug, Clone, Default)]
pub struct RegionAttributes {
    regions: IndexMap<String, RegionAttr>,
}

#[derive(Debug, Serialize, Deserialize)]
struct AttrRow {
    region_id: String,
    state_id: String,
    population: f64,
    lat: f64,
    lon: f64,
}

impl RegionAttributes {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: impl Into<String>, attr: RegionAttr) -> Result<()> {
        let id = id.into();
        if !(attr.population.is_finite() && attr.population > 0.0) {
            return Err(Error::input(format!(
                "region '{id}': population must be positive, got {}",
                attr.population
            )));
        }
        attr.centroid
            .validate()
            .map_err(|e| Error::input(format!("region '{id}': {e}")))?;
        if self.regions.contains_key(&id) {
            return Err(Error::input(format!("duplicate region id '{id}'")));
        }
        self.regions.insert(id, attr);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&RegionAttr> {
        self.regions.get(id)
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &RegionAttr)> {
        self.regions.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Index over every region, in insertion order.
    pub fn index(&self) -> RegionIndex {
        RegionIndex {
            ids: self.regions.keys().cloned().collect(),
        }
    }

    /// Attributes aligned with `index`; fails on the first region without attributes.
    pub fn aligned<'a>(&'a self, index: &RegionIndex) -> Result<Vec<&'a RegionAttr>> {
        index
            .ids()
            .map(|id| {
                self.regions
                    .get(id)
                    .ok_or_else(|| Error::UnknownRegion(id.to_string()))
            })
            .collect()
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        check_header(&mut rdr, &["region_id", "state_id", "population", "lat", "lon"])?;
        let mut out = Self::new();
        for row in rdr.deserialize() {
            let row: AttrRow = row?;
            out.insert(
                row.region_id,
                RegionAttr {
                    state: row.state_id,
                    population: row.population,
                    centroid: Centroid {
                        lat: row.lat,
                        lon: row.lon,
                    },
                },
            )?;
        }
        Ok(out)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    pub fn to_writer<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["region_id", "state_id", "population", "lat", "lon"])?;
        for (id, a) in &self.regions {
            w.write_record([
                id.as_str(),
                a.state.as_str(),
                &f64_17(a.population),
                &f64_17(a.centroid.lat),
                &f64_17(a.centroid.lon),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
