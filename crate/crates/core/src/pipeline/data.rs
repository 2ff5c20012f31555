use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use serde::Serialize;

use super::config::{sha256_hex, DataSource, InputPaths, RunConfig};
use crate::csvio::check_header;
use crate::error::{Error, Result};
use crate::geo_graph::{RegionAttributes, SciEdgeList};
use crate::lag_vars::{death_rates, read_mortality, Period};
use crate::synth::SynthData;

/// Digest of one input file, as recorded in the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub label: String,
    pub path: String,
    pub sha256: String,
}

/// Named columns aligned with [`Dataset::ids`].
#[derive(Debug, Clone, Default)]
pub struct Columns {
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl Columns {
    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.names.iter().position(|n| n == name).map(|i| self.values[i].as_slice())
    }
}

/// The LASSO selection dataset: an outcome and candidate covariates.
#[derive(Debug, Clone)]
pub struct SelectionData {
    pub ids: Vec<String>,
    pub outcome: Vec<f64>,
    pub candidates: Columns,
}

/// Everything a run reads, aligned with the attribute order of `attrs`.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub attrs: RegionAttributes,
    pub edges: SciEdgeList,
    pub ids: Vec<String>,
    pub years: Vec<i32>,
    /// Pooled cross-section outcome (average annual rate over `years`).
    pub outcome: Vec<f64>,
    /// `panel[t]`: outcome in `years[t]`.
    pub panel: Vec<Vec<f64>>,
    pub covariates: Columns,
    /// `panel_covariates[t]`; empty when the covariates file has no per-year rows.
    pub panel_covariates: Vec<Columns>,
    pub selection: Option<SelectionData>,
    pub inputs: Vec<InputDigest>,
}

impl Dataset {
    pub fn load(cfg: &RunConfig) -> Result<Self> {
        match &cfg.source {
            DataSource::Files(p) => Self::from_files(p, cfg),
            DataSource::Synthetic(s) => Ok(Self::from_synth(&SynthData::generate(s)?, cfg.years.as_deref())?),
        }
    }

    fn from_files(p: &InputPaths, cfg: &RunConfig) -> Result<Self> {
        let mut inputs = vec![];
        let mut read = |label: &str, path: &Path| -> Result<Vec<u8>> {
            let bytes = fs::read(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
            inputs.push(InputDigest {
                label: label.into(),
                path: path.display().to_string(),
                sha256: sha256_hex(&bytes),
            });
            Ok(bytes)
        };
        let attrs = RegionAttributes::from_reader(read("attributes", &p.attributes)?.as_slice())?;
        let edges = SciEdgeList::from_reader(read("sci", &p.sci)?.as_slice())?;
        let ids: Vec<String> = attrs.iter().map(|(id, _)| id.to_string()).collect();
        let index = attrs.index();

        let (years, outcome, panel) = if let Some(path) = &p.mortality {
            let records = read_mortality(read("mortality", path)?.as_slice())?;
            let years = match &cfg.years {
                Some(y) => y.clone(),
                None => records.iter().map(|r| r.year).collect::<BTreeSet<_>>().into_iter().collect(),
            };
            if years.is_empty() {
                return Err(Error::input("mortality file has no records and no years are configured"));
            }
            let pooled = death_rates(&records, &attrs, &index, &Period::Pooled(years.clone()))?;
            let panel = years
                .iter()
                .map(|&y| death_rates(&records, &attrs, &index, &Period::Year(y)).map(|o| o.rate))
                .collect::<Result<Vec<_>>>()?;
            (years, pooled.rate, panel)
        } else {
            let path = p.outcomes.as_ref().expect("validated outcome source");
            let table = read_period_table(&read("outcomes", path)?, &["outcome"], &ids, "outcomes")?;
            let years = select_years(&table, cfg.years.as_deref(), "outcomes")?;
            let pooled = table
                .get("pooled")
                .ok_or_else(|| Error::input("outcomes CSV has no 'pooled' rows"))?
                .values[0]
                .clone();
            let panel = years.iter().map(|y| table[&y.to_string()].values[0].clone()).collect();
            (years, pooled, panel)
        };

        let (covariates, panel_covariates) = match &p.covariates {
            None => (Columns::default(), vec![]),
            Some(path) => {
                let bytes = read("covariates", path)?;
                let names = header_tail(&bytes, "covariates")?;
                let names: Vec<&str> = names.iter().map(String::as_str).collect();
                let table = read_period_table(&bytes, &names, &ids, "covariates")?;
                let pooled = table
                    .get("pooled")
                    .cloned()
                    .ok_or_else(|| Error::input("covariates CSV has no 'pooled' rows"))?;
                let per_year: Option<Vec<Columns>> =
                    years.iter().map(|y| table.get(&y.to_string()).cloned()).collect();
                (pooled, per_year.unwrap_or_default())
            }
        };

        let selection = match &p.selection {
            None => None,
            Some(path) => Some(read_selection(&read("selection", path)?)?),
        };

        Ok(Self {
            attrs,
            edges,
            ids,
            years,
            outcome,
            panel,
            covariates,
            panel_covariates,
            selection,
            inputs,
        })
    }

    /// In-memory dataset from a generated world. Noise candidates are
    /// offered to the selection stage and, if kept, enter the design.
    pub fn from_synth(data: &SynthData, years: Option<&[i32]>) -> Result<Self> {
        let pos: HashMap<&str, usize> = data.world.index.ids().enumerate().map(|(i, id)| (id, i)).collect();
        let ids: Vec<String> = data.world.attrs.iter().map(|(id, _)| id.to_string()).collect();
        let order: Vec<usize> = ids.iter().map(|id| pos[id.as_str()]).collect();
        let align = |v: &[f64]| -> Vec<f64> { order.iter().map(|&i| v[i]).collect() };
        let cov = &data.covariates;
        let out = &data.outcomes;

        let with_noise = |cols: &[Vec<f64>]| Columns {
            names: cov.names.iter().chain(&cov.noise_names).cloned().collect(),
            values: cols.iter().chain(&cov.noise).map(|c| align(c)).collect(),
        };
        let all_years = out.years.clone();
        let keep: Vec<usize> = match years {
            None => (0..all_years.len()).collect(),
            Some(ys) => ys
                .iter()
                .map(|y| {
                    all_years
                        .iter()
                        .position(|a| a == y)
                        .ok_or_else(|| Error::input(format!("year {y} is not in the synthetic panel {all_years:?}")))
                })
                .collect::<Result<_>>()?,
        };
        let outcome = align(&out.cross_section);
        Ok(Self {
            attrs: data.world.attrs.clone(),
            edges: data.world.edges.clone(),
            years: keep.iter().map(|&t| all_years[t]).collect(),
            panel: keep.iter().map(|&t| align(&out.panel[t])).collect(),
            covariates: with_noise(&cov.cross_section),
            panel_covariates: keep.iter().map(|&t| with_noise(&cov.panel[t])).collect(),
            selection: Some(SelectionData {
                ids: ids.clone(),
                outcome: outcome.clone(),
                candidates: with_noise(&cov.cross_section),
            }),
            ids,
            outcome,
            inputs: vec![],
        })
    }
}

fn header_tail(bytes: &[u8], label: &str) -> Result<Vec<String>> {
    let mut rdr = csv::Reader::from_reader(bytes);
    let header: Vec<String> = rdr.headers()?.iter().map(|s| s.trim().to_string()).collect();
    if header.len() < 3 || header[0] != "region_id" || header[1] != "period" {
        return Err(Error::input(format!(
            "{label} CSV header must be region_id,period,<columns...>; got {header:?}"
        )));
    }
    Ok(header[2..].to_vec())
}

/// `region_id,period,<names>` rows into one [`Columns`] per period label,
/// aligned with `ids`. Every period must cover every region exactly once.
fn read_period_table(bytes: &[u8], names: &[&str], ids: &[String], label: &str) -> Result<BTreeMap<String, Columns>> {
    let mut rdr = csv::Reader::from_reader(bytes);
    let mut expected = vec!["region_id", "period"];
    expected.extend(names);
    check_header(&mut rdr, &expected)?;
    let pos: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
    let n = ids.len();
    let mut table: BTreeMap<String, (Columns, Vec<bool>)> = BTreeMap::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let id = rec[0].trim();
        let period = rec[1].trim().to_string();
        let &i = pos
            .get(id)
            .ok_or_else(|| Error::input(format!("{label} CSV line {}: unknown region '{id}'", line + 2)))?;
        let (cols, seen) = table.entry(period.clone()).or_insert_with(|| {
            (
                Columns {
                    names: names.iter().map(|s| s.to_string()).collect(),
                    values: vec![vec![f64::NAN; n]; names.len()],
                },
                vec![false; n],
            )
        });
        if seen[i] {
            return Err(Error::input(format!("{label} CSV: region '{id}' repeated in period '{period}'")));
        }
        seen[i] = true;
        for (c, field) in rec.iter().skip(2).enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| {
                Error::input(format!("{label} CSV line {}: '{field}' is not a number", line + 2))
            })?;
            if !v.is_finite() {
                return Err(Error::input(format!("{label} CSV line {}: non-finite value", line + 2)));
            }
            cols.values[c][i] = v;
        }
    }
    let mut out = BTreeMap::new();
    for (period, (cols, seen)) in table {
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::input(format!(
                "{label} CSV: region '{}' missing from period '{period}'",
                ids[i]
            )));
        }
        out.insert(period, cols);
    }
    Ok(out)
}

fn select_years(table: &BTreeMap<String, Columns>, years: Option<&[i32]>, label: &str) -> Result<Vec<i32>> {
    let available: Vec<i32> = table.keys().filter_map(|k| k.parse().ok()).collect();
    match years {
        None => Ok(available),
        Some(ys) => {
            if let Some(y) = ys.iter().find(|y| !available.contains(y)) {
                return Err(Error::input(format!("{label} CSV has no rows for year {y}")));
            }
            Ok(ys.to_vec())
        }
    }
}

fn read_selection(bytes: &[u8]) -> Result<SelectionData> {
    let mut rdr = csv::Reader::from_reader(bytes);
    let header: Vec<String> = rdr.headers()?.iter().map(|s| s.trim().to_string()).collect();
    if header.len() < 3 || header[0] != "region_id" || header[1] != "outcome" {
        return Err(Error::input(format!(
            "selection CSV header must be region_id,outcome,<candidates...>; got {header:?}"
        )));
    }
    let names = header[2..].to_vec();
    let mut ids = vec![];
    let mut outcome = vec![];
    let mut values = vec![vec![]; names.len()];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        ids.push(rec[0].trim().to_string());
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::input(format!("selection CSV line {}: '{s}' is not a finite number", line + 2)))
        };
        outcome.push(parse(&rec[1])?);
        for (c, field) in rec.iter().skip(2).enumerate() {
            values[c].push(parse(field)?);
        }
    }
    Ok(SelectionData {
        ids,
        outcome,
        candidates: Columns { names, values },
    })
}
