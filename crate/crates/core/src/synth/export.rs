use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::Rng;
use serde_json::json;

use super::{rng, stream, SynthData};
use crate::error::Result;
use crate::fmt::f64_17;
use crate::lag_vars::{write_mortality_csv, MortalityRecord};

/// Files written by [`write_fixture`], in order.
pub const FIXTURE_FILES: [&str; 7] = [
    "attributes.csv",
    "sci.csv",
    "covariates.csv",
    "outcomes.csv",
    "mortality.csv",
    "selection.csv",
    "truth.json",
];

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

/// Write the generated world in the CSV formats the loaders read.
///
/// `covariates.csv` carries the noise candidates too (constant across
/// periods), so a file-mode run sees the same design as an in-memory one.
/// `outcomes.csv` holds exact rates (`period` is `pooled` for the
/// cross-section, the year otherwise). `mortality.csv` approximates the panel
/// rates with whole deaths, `round(rate * population / 1e5)`, coded as opioid
/// overdoses, plus a few non-opioid and non-overdose records that the opioid
/// classifier must skip.
pub fn write_fixture(data: &SynthData, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let index = &data.world.index;
    let ids: Vec<&str> = index.ids().collect();
    let cov = &data.covariates;
    let out = &data.outcomes;

    data.world.attrs.to_writer(create(dir, "attributes.csv")?)?;
    data.world.edges.to_writer(create(dir, "sci.csv")?)?;

    let mut w = csv::Writer::from_writer(create(dir, "covariates.csv")?);
    let mut header = vec!["region_id".to_string(), "period".to_string()];
    header.extend(cov.names.iter().chain(&cov.noise_names).cloned());
    w.write_record(&header)?;
    for (i, id) in ids.iter().enumerate() {
        let mut row = vec![id.to_string(), "pooled".to_string()];
        row.extend(cov.cross_section.iter().chain(&cov.noise).map(|c| f64_17(c[i])));
        w.write_record(&row)?;
    }
    for (t, year) in out.years.iter().enumerate() {
        for (i, id) in ids.iter().enumerate() {
            let mut row = vec![id.to_string(), year.to_string()];
            row.extend(cov.panel[t].iter().chain(&cov.noise).map(|c| f64_17(c[i])));
            w.write_record(&row)?;
        }
    }
    w.flush()?;

    let mut w = csv::Writer::from_writer(create(dir, "outcomes.csv")?);
    w.write_record(["region_id", "period", "outcome"])?;
    for (i, id) in ids.iter().enumerate() {
        w.write_record([id.to_string(), "pooled".into(), f64_17(out.cross_section[i])])?;
    }
    for (t, year) in out.years.iter().enumerate() {
        for (i, id) in ids.iter().enumerate() {
            w.write_record([id.to_string(), year.to_string(), f64_17(out.panel[t][i])])?;
        }
    }
    w.flush()?;

    let attrs = data.world.attrs.aligned(index)?;
    let mut r = rng(data.config.seed, stream::RECORDS);
    let causes = ["X42", "X44", "X62", "Y12"];
    let opioid = ["T401", "T402", "T403", "T404", "T406"];
    let mut records = Vec::new();
    for (t, year) in out.years.iter().enumerate() {
        for (i, id) in ids.iter().enumerate() {
            let deaths = (out.panel[t][i].max(0.0) * attrs[i].population / 1e5).round() as u64;
            for _ in 0..deaths {
                records.push(MortalityRecord {
                    id: records.len() as u64 + 1,
                    region: id.to_string(),
                    year: *year,
                    underlying_cause: causes[r.random_range(0..causes.len())].into(),
                    contributing_codes: vec![opioid[r.random_range(0..opioid.len())].into()],
                });
            }
            // distractors: a non-opioid overdose and a non-overdose death
            if r.random_bool(0.3) {
                records.push(MortalityRecord {
                    id: records.len() as u64 + 1,
                    region: id.to_string(),
                    year: *year,
                    underlying_cause: "X41".into(),
                    contributing_codes: vec!["T424".into()],
                });
            }
            if r.random_bool(0.3) {
                records.push(MortalityRecord {
                    id: records.len() as u64 + 1,
                    region: id.to_string(),
                    year: *year,
                    underlying_cause: "I219".into(),
                    contributing_codes: vec!["T401".into()],
                });
            }
        }
    }
    write_mortality_csv(create(dir, "mortality.csv")?, &records)?;

    let mut w = csv::Writer::from_writer(create(dir, "selection.csv")?);
    let mut header = vec!["region_id".to_string(), "outcome".to_string()];
    header.extend(cov.names.iter().cloned());
    header.extend(cov.noise_names.iter().cloned());
    w.write_record(&header)?;
    for (i, id) in ids.iter().enumerate() {
        let mut row = vec![id.to_string(), f64_17(out.cross_section[i])];
        row.extend(cov.cross_section.iter().chain(&cov.noise).map(|c| f64_17(c[i])));
        w.write_record(&row)?;
    }
    w.flush()?;

    let truth = json!({
        "config": data.config,
        "state_effects": out.state_effects,
        "year_effects": out.year_effects,
        "years": out.years,
        "fixed_point_iterations": out.iterations,
    });
    let mut f = create(dir, "truth.json")?;
    serde_json::to_writer_pretty(&mut f, &truth)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}
