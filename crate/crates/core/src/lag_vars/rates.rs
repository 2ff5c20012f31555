use std::io::{Read, Write};
use std::path::Path;

use serde::Deserialize;

use super::icd::classify_ood;
use crate::error::{Error, Result};
use crate::geo_graph::{RegionAttributes, RegionIndex};

#[derive(Debug, Clone, PartialEq)]
pub struct MortalityRecord {
    /// Row number on input, used in error messages.
    pub id: u64,
    pub region: String,
    pub year: i32,
    pub underlying_cause: String,
    pub contributing_codes: Vec<String>,
}

/// Which deaths count toward a rate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Period {
    Year(i32),
    /// Deaths summed over the years, divided by `years.len()` x population:
    /// an average annual rate.
    Pooled(Vec<i32>),
}

impl Period {
    fn contains(&self, year: i32) -> bool {
        match self {
            Period::Year(y) => *y == year,
            Period::Pooled(ys) => ys.contains(&year),
        }
    }

    fn n_years(&self) -> usize {
        match self {
            Period::Year(_) => 1,
            Period::Pooled(ys) => ys.len(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Period::Year(y) => y.to_string(),
            Period::Pooled(ys) => ys.iter().map(i32::to_string).collect::<Vec<_>>().join("+"),
        }
    }
}

/// Deaths per 100,000 population per region.
#[derive(Debug, Clone)]
pub struct OutcomeVector {
    pub index: RegionIndex,
    pub rate: Vec<f64>,
    /// Counted deaths; `None` when rates were supplied directly.
    pub deaths: Option<Vec<u64>>,
    pub period: String,
}

impl OutcomeVector {
    pub fn from_rates(index: RegionIndex, rate: Vec<f64>, period: impl Into<String>) -> Result<Self> {
        if rate.len() != index.len() {
            return Err(Error::dim("rate vector length differs from index"));
        }
        if rate.iter().any(|r| !r.is_finite()) {
            return Err(Error::input("non-finite outcome rate"));
        }
        Ok(Self {
            index,
            rate,
            deaths: None,
            period: period.into(),
        })
    }
}

/// Opioid-overdose death rates per 100,000 for the regions in `index`.
///
/// Records outside the period, or for regions known to `attrs` but not in
/// `index`, are skipped. Records for regions absent from `attrs` are errors.
pub fn death_rates(
    records: &[MortalityRecord],
    attrs: &RegionAttributes,
    index: &RegionIndex,
    period: &Period,
) -> Result<OutcomeVector> {
    if period.n_years() == 0 {
        return Err(Error::input("pooled period with no years"));
    }
    let pops: Vec<f64> = attrs.aligned(index)?.iter().map(|a| a.population).collect();
    let mut deaths = vec![0u64; index.len()];
    for rec in records {
        if attrs.get(&rec.region).is_none() {
            return Err(Error::UnknownRegion(rec.region.clone()));
        }
        if !period.contains(rec.year) {
            continue;
        }
        let Some(i) = index.position(&rec.region) else {
            continue;
        };
        if classify_ood(rec)?.opioid_overdose {
            deaths[i] += 1;
        }
    }
    let years = period.n_years() as f64;
    let rate = deaths
        .iter()
        .zip(&pops)
        .map(|(&d, &p)| d as f64 / (years * p) * 100_000.0)
        .collect();
    Ok(OutcomeVector {
        index: index.clone(),
        rate,
        deaths: Some(deaths),
        period: period.label(),
    })
}

#[derive(Debug, Deserialize)]
struct MortalityRow {
    region_id: String,
    year: i32,
    underlying_cause: String,
    #[serde(default)]
    t_codes: String,
}

pub fn read_mortality<R: Read>(reader: R) -> Result<Vec<MortalityRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    crate::csvio::check_header(&mut rdr, &["region_id", "year", "underlying_cause", "t_codes"])?;
    let mut out = Vec::new();
    for (line, row) in rdr.deserialize().enumerate() {
        let row: MortalityRow = row?;
        out.push(MortalityRecord {
            id: line as u64 + 1,
            region: row.region_id,
            year: row.year,
            underlying_cause: row.underlying_cause,
            contributing_codes: row
                .t_codes
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect(),
        });
    }
    Ok(out)
}

pub fn read_mortality_csv(path: &Path) -> Result<Vec<MortalityRecord>> {
    read_mortality(std::io::BufReader::new(std::fs::File::open(path)?))
}

pub fn write_mortality_csv<W: Write>(writer: W, records: &[MortalityRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["region_id", "year", "underlying_cause", "t_codes"])?;
    for r in records {
        w.write_record([
            r.region.as_str(),
            &r.year.to_string(),
            r.underlying_cause.as_str(),
            &r.contributing_codes.join(";"),
        ])?;
    }
    w.flush()?;
    Ok(())
}
