use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::{Component, Path};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{sha256_hex, DataSource, ModelKind, RegionSpec, RunConfig};
use super::data::{Columns, Dataset};
use super::derive_seed;
use crate::error::{Error, Result};
use crate::estimators::{
    fit_g2sls, fit_sem_ml, fit_twoway_fe, fit_wls, fit_wls_cluster, stars, DesignMatrix, FeOptions, ModelFit,
    PanelObservation, SemOptions,
};
use crate::fmt::f64_17;
use crate::geo_graph::{
    aggregate_state_weights, build_decay_weights, build_social_weights, build_spatial_weights,
    build_state_spatial_weights, ProximityMatrix, RegionAttributes, RegionIndex,
};
use crate::lag_vars::{compute_lag, standardize, write_lags_csv, LaggedVariable, OutcomeVector};
use crate::lasso_select::{select_covariates, LassoOptions, LassoProblem};
use crate::par;
use crate::synth::{D_LAG, S_LAG};

pub const MANIFEST: &str = "manifest.json";

/// A failure in one stage of one analysis region.
#[derive(Debug, Clone, Serialize)]
pub struct StageError {
    pub stage: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    pub message: String,
}

/// One analysis region, ready for fitting. Rows follow the attribute order.
#[derive(Debug, Clone)]
pub struct RegionData {
    pub name: String,
    pub index: RegionIndex,
    pub attrs: RegionAttributes,
    pub social: ProximityMatrix,
    pub spatial: ProximityMatrix,
    pub outcome: Vec<f64>,
    /// Standardized over the included rows.
    pub s_lag: LaggedVariable,
    pub d_lag: LaggedVariable,
    /// Rows isolated in either matrix; dropped by every estimator.
    pub excluded: Vec<bool>,
    pub covariates: Columns,
    pub years: Vec<i32>,
    pub panel: Vec<Vec<f64>>,
    pub panel_covariates: Vec<Columns>,
    pub population: Vec<f64>,
    pub states: Vec<String>,
    pub warnings: Vec<String>,
}

fn subset(cols: &Columns, names: &[String], rows: &[usize]) -> Result<Columns> {
    let mut out = Columns::default();
    for name in names {
        let v = cols
            .get(name)
            .ok_or_else(|| Error::input(format!("covariate '{name}' is missing")))?;
        out.names.push(name.clone());
        out.values.push(rows.iter().map(|&i| v[i]).collect());
    }
    Ok(out)
}

/// Social and spatial lags of `y`, standardized over rows not in `excluded`.
fn lag_pair(
    index: &RegionIndex,
    y: &[f64],
    social: &ProximityMatrix,
    spatial: &ProximityMatrix,
    excluded: &[bool],
    period: &str,
) -> Result<(LaggedVariable, LaggedVariable)> {
    let y = OutcomeVector::from_rates(index.clone(), y.to_vec(), period)?;
    let lag = |m: &ProximityMatrix| -> Result<LaggedVariable> {
        let mut v = compute_lag(&y, m)?;
        v.excluded = excluded.to_vec();
        standardize(&v)
    };
    Ok((lag(social)?, lag(spatial)?))
}

/// Resolve a region, build its weights and standardized lags, and gather the
/// named design covariates.
pub fn prepare_region(ds: &Dataset, spec: &RegionSpec, covariates: &[String], cfg: &RunConfig) -> Result<RegionData> {
    let ids = spec.resolve(&ds.attrs)?;
    if ids.len() < 3 {
        return Err(Error::TooFewObservations { n: ids.len(), k: 3 });
    }
    let pos: HashMap<&str, usize> = ds.ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
    let rows: Vec<usize> = ids.iter().map(|id| pos[id.as_str()]).collect();
    let mut attrs = RegionAttributes::new();
    for id in &ids {
        attrs.insert(id.clone(), ds.attrs.get(id).expect("resolved id").clone())?;
    }
    let index = RegionIndex::new(ids.iter().cloned())?;
    let social = build_social_weights(&ds.edges, &attrs, &index)?;
    let spatial = match cfg.weights.decay_exponent {
        Some(p) => build_decay_weights(&attrs, &index, p)?,
        None => build_spatial_weights(&attrs, &index)?,
    };
    let excluded: Vec<bool> = social.isolated().iter().zip(spatial.isolated()).map(|(a, b)| *a || *b).collect();
    let mut warnings: Vec<String> = social.warnings().iter().chain(spatial.warnings()).cloned().collect();
    let n_excluded = excluded.iter().filter(|e| **e).count();
    if n_excluded > 0 {
        warnings.push(format!("{n_excluded} isolated region(s) excluded from estimation"));
    }
    let pick = |v: &[f64]| -> Vec<f64> { rows.iter().map(|&i| v[i]).collect() };
    let outcome = pick(&ds.outcome);
    let (s_lag, d_lag) = lag_pair(&index, &outcome, &social, &spatial, &excluded, "pooled")?;
    let region_attrs = attrs.aligned(&index)?;
    let population = region_attrs.iter().map(|a| a.population).collect();
    let states = region_attrs.iter().map(|a| a.state.clone()).collect();
    Ok(RegionData {
        name: spec.name.clone(),
        covariates: subset(&ds.covariates, covariates, &rows)?,
        years: ds.years.clone(),
        panel: ds.panel.iter().map(|y| pick(y)).collect(),
        panel_covariates: ds
            .panel_covariates
            .iter()
            .map(|c| subset(c, covariates, &rows))
            .collect::<Result<_>>()?,
        index,
        attrs,
        social,
        spatial,
        outcome,
        s_lag,
        d_lag,
        excluded,
        population,
        states,
        warnings,
    })
}

impl RegionData {
    pub fn ids(&self) -> Vec<String> {
        self.index.ids().map(String::from).collect()
    }

    /// Intercept, optionally the two lags, then the covariates; isolated rows flagged.
    pub fn design(&self, with_lags: bool) -> Result<DesignMatrix> {
        let mut cols = vec![];
        if with_lags {
            cols.push((S_LAG.to_string(), self.s_lag.values.clone()));
            cols.push((D_LAG.to_string(), self.d_lag.values.clone()));
        }
        cols.extend(self.covariates.names.iter().cloned().zip(self.covariates.values.iter().cloned()));
        let mut x = DesignMatrix::with_intercept(self.ids(), cols)?;
        x.exclude(&self.excluded)?;
        Ok(x)
    }

    /// Region-year observations with per-year standardized lags. Without
    /// per-year covariates the pooled values are repeated (and a warning
    /// returned).
    pub fn panel_observations(&self) -> Result<(Vec<PanelObservation>, Vec<String>, Vec<String>)> {
        let mut warnings = vec![];
        if self.panel_covariates.is_empty() && !self.covariates.names.is_empty() {
            warnings.push("covariates have no per-year rows; pooled values are used in every year".to_string());
        }
        let mut obs = vec![];
        for (t, y) in self.panel.iter().enumerate() {
            let year = self.years[t].to_string();
            let (s, d) = lag_pair(&self.index, y, &self.social, &self.spatial, &self.excluded, &year)?;
            let cov = self.panel_covariates.get(t).unwrap_or(&self.covariates);
            for (i, id) in self.index.ids().enumerate() {
                if self.excluded[i] {
                    continue;
                }
                let mut regressors = vec![s.values[i], d.values[i]];
                regressors.extend(cov.values.iter().map(|c| c[i]));
                obs.push(PanelObservation {
                    region: id.to_string(),
                    group: self.states[i].clone(),
                    period: year.clone(),
                    outcome: y[i],
                    regressors,
                    cluster_id: self.states[i].clone(),
                    weight: self.population[i],
                });
            }
        }
        let mut names = vec![S_LAG.to_string(), D_LAG.to_string()];
        names.extend(self.covariates.names.iter().cloned());
        Ok((obs, names, warnings))
    }
}

/// Fit one model. The second value carries model-specific extras for the
/// JSON report (classical standard errors for the clustered WLS).
pub fn fit_model(kind: ModelKind, rd: &RegionData, cfg: &RunConfig) -> Result<(ModelFit, Value)> {
    let w = &cfg.weights;
    let pop = |on: bool| on.then_some(rd.population.as_slice());
    let mut extra = Value::Null;
    let mut fit = match kind {
        ModelKind::WlsCluster => {
            let x = rd.design(true)?;
            let classical = fit_wls(&x, &rd.outcome, pop(w.weighted_wls))?;
            extra = json!({
                "classical_se": classical.names.iter().zip(&classical.std_errors)
                    .map(|(n, s)| (n.clone(), json!(s))).collect::<serde_json::Map<_, _>>()
            });
            fit_wls_cluster(&x, &rd.outcome, pop(w.weighted_wls), &rd.states)?
        }
        ModelKind::SemNetwork | ModelKind::SemSpatial => {
            let m = if kind == ModelKind::SemNetwork { &rd.social } else { &rd.spatial };
            fit_sem_ml(&rd.design(true)?, &rd.outcome, m, pop(w.weighted_sem), &SemOptions::default())?
        }
        ModelKind::TwowayFe => {
            let (obs, names, warnings) = rd.panel_observations()?;
            let opts = FeOptions {
                weighted: w.weighted_fe,
                cluster: true,
            };
            let mut fit = fit_twoway_fe(&obs, &names, opts)?;
            fit.warnings.extend(warnings);
            fit
        }
        ModelKind::G2sls => {
            let z = rd.design(false)?;
            let endogenous = [
                (S_LAG.to_string(), rd.s_lag.values.clone()),
                (D_LAG.to_string(), rd.d_lag.values.clone()),
            ];
            fit_g2sls(&z, &endogenous, &rd.outcome, &rd.social, &rd.spatial, pop(w.weighted_g2sls))?
        }
    };
    fit.model = kind.as_str().to_string();
    Ok((fit, extra))
}

/// One candidate in the selection table.
#[derive(Debug, Clone, Serialize)]
pub struct SelectionRow {
    pub variable: String,
    pub description: String,
    /// `penalized`, `unpenalized`, `excluded` (entered directly) or `constant` (dropped).
    pub role: String,
    pub coefficient: Option<f64>,
    pub kept: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelectionReport {
    pub enabled: bool,
    pub lambda: Option<f64>,
    pub folds: usize,
    pub seed: Option<u64>,
    pub n_obs: usize,
    pub rows: Vec<SelectionRow>,
    /// Candidates removed from the inference design.
    pub dropped: Vec<String>,
    pub warnings: Vec<String>,
}

impl SelectionReport {
    fn disabled() -> Self {
        Self {
            enabled: false,
            lambda: None,
            folds: 0,
            seed: None,
            n_obs: 0,
            rows: vec![],
            dropped: vec![],
            warnings: vec![],
        }
    }
}

/// Cross-validated partially penalized LASSO on the selection dataset.
pub fn run_selection(ds: &Dataset, cfg: &RunConfig) -> Result<SelectionReport> {
    let l = &cfg.lasso;
    let Some(sel) = ds.selection.as_ref().filter(|_| l.enabled) else {
        return Ok(SelectionReport::disabled());
    };
    let describe = |v: &str| l.descriptions.get(v).cloned().unwrap_or_default();
    let names: Vec<String> = sel
        .candidates
        .names
        .iter()
        .filter(|n| !l.exclude.contains(n))
        .cloned()
        .collect();
    let n = sel.outcome.len();
    let x = nalgebra::DMatrix::from_fn(n, names.len(), |i, j| sel.candidates.get(&names[j]).expect("candidate")[i]);
    let penalty = names.iter().map(|v| if l.unpenalized.contains(v) { 0.0 } else { 1.0 }).collect();
    let (problem, warnings) = LassoProblem::new(names.clone(), x, sel.outcome.clone(), penalty)?.drop_constant_penalized()?;
    let seed = l.seed.unwrap_or_else(|| derive_seed(cfg.seed, "lasso"));
    let opts = LassoOptions {
        n_lambda: l.n_lambda,
        lambda_min_ratio: l.lambda_min_ratio,
        folds: l.folds,
        seed,
        ..LassoOptions::default()
    };
    let s = select_covariates(&problem, &opts)?;

    let mut rows = vec![];
    let mut dropped = vec![];
    for v in &sel.candidates.names {
        let row = if l.exclude.contains(v) {
            SelectionRow {
                variable: v.clone(),
                description: describe(v),
                role: "excluded".into(),
                coefficient: None,
                kept: true,
            }
        } else if let Some(j) = problem.names.iter().position(|p| p == v) {
            let kept = s.selected.contains(v);
            SelectionRow {
                variable: v.clone(),
                description: describe(v),
                role: if problem.penalty[j] == 0.0 { "unpenalized" } else { "penalized" }.into(),
                coefficient: Some(s.fit.beta[j]),
                kept,
            }
        } else {
            SelectionRow {
                variable: v.clone(),
                description: describe(v),
                role: "constant".into(),
                coefficient: None,
                kept: false,
            }
        };
        if !row.kept {
            dropped.push(v.clone());
        }
        rows.push(row);
    }
    let mut warnings = warnings;
    for v in &s.selected {
        if ds.covariates.get(v).is_none() {
            warnings.push(format!("selected candidate '{v}' has no column in the covariates input"));
        }
    }
    Ok(SelectionReport {
        enabled: true,
        lambda: Some(s.lambda),
        folds: l.folds,
        seed: Some(seed),
        n_obs: n,
        rows,
        dropped,
        warnings,
    })
}

/// Pending output: path relative to the output directory and its bytes.
type OutFile = (String, Vec<u8>);

fn json_bytes(v: &impl Serialize) -> Result<Vec<u8>> {
    let mut b = serde_json::to_vec_pretty(v)?;
    b.push(b'\n');
    Ok(b)
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// `selection/selection.json` and `selection/coefficients.csv`.
pub fn write_selection(report: &SelectionReport) -> Result<Vec<(String, Vec<u8>)>> {
    let rows = report.rows.iter().map(|r| {
        vec![
            r.variable.clone(),
            r.description.clone(),
            r.coefficient.map(f64_17).unwrap_or_default(),
            r.kept.to_string(),
        ]
    });
    Ok(vec![
        ("selection/selection.json".into(), json_bytes(report)?),
        (
            "selection/coefficients.csv".into(),
            csv_bytes(&["variable", "description", "coefficient", "kept"], rows)?,
        ),
    ])
}

fn model_json(fit: &ModelFit, extra: &Value, rd: &RegionData, provenance: &Value) -> Value {
    let coefficients: Vec<Value> = (0..fit.names.len())
        .map(|i| {
            json!({
                "term": fit.names[i],
                "estimate": fit.coefficients[i],
                "se": fit.std_errors[i],
                "t": fit.t_stats[i],
                "p": fit.p_values[i],
                "ci_low": fit.ci_low[i],
                "ci_high": fit.ci_high[i],
            })
        })
        .collect();
    let warnings: Vec<&String> = rd.warnings.iter().chain(&fit.warnings).collect();
    let mut v = json!({
        "region": rd.name,
        "model": fit.model,
        "inference": fit.inference,
        "covariance_type": fit.covariance_type,
        "coefficients": coefficients,
        "diagnostics": fit.diagnostics,
        "warnings": warnings,
        "provenance": provenance,
    });
    if let Value::Object(extra) = extra {
        v.as_object_mut().expect("object").extend(extra.clone());
    }
    v
}

fn model_csv(fit: &ModelFit) -> Result<Vec<u8>> {
    let rows = (0..fit.names.len()).map(|i| {
        vec![
            fit.names[i].clone(),
            f64_17(fit.coefficients[i]),
            f64_17(fit.std_errors[i]),
            stars(fit.p_values[i]).to_string(),
        ]
    });
    csv_bytes(&["term", "estimate", "se", "stars"], rows)
}

/// Outcome of one analysis region.
#[derive(Debug, Clone, Serialize)]
pub struct RegionStatus {
    pub name: String,
    pub n_regions: usize,
    pub status: String,
    pub models_ok: Vec<String>,
    pub errors: Vec<StageError>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

struct RegionResult {
    status: RegionStatus,
    files: Vec<OutFile>,
    fits: Vec<ModelFit>,
}

fn run_region(ds: &Dataset, spec: &RegionSpec, covariates: &[String], cfg: &RunConfig, provenance: &Value) -> RegionResult {
    let start = Instant::now();
    let mut status = RegionStatus {
        name: spec.name.clone(),
        n_regions: 0,
        status: "ok".into(),
        models_ok: vec![],
        errors: vec![],
        wall_time_seconds: None,
    };
    let mut files = vec![];
    let mut fits = vec![];
    let dir = &spec.name;
    match prepare_region(ds, spec, covariates, cfg) {
        Err(e) => status.errors.push(StageError {
            stage: "prepare".into(),
            model: None,
            message: e.to_string(),
        }),
        Ok(rd) => {
            status.n_regions = rd.index.len();
            let mut lags = vec![];
            if write_lags_csv(&mut lags, &[&rd.s_lag, &rd.d_lag]).is_ok() {
                files.push((format!("{dir}/lags.csv"), lags));
            }
            for &kind in &cfg.models {
                let written = fit_model(kind, &rd, cfg).and_then(|(fit, extra)| {
                    let j = json_bytes(&model_json(&fit, &extra, &rd, provenance))?;
                    let c = model_csv(&fit)?;
                    Ok((fit, j, c))
                });
                match written {
                    Ok((fit, j, c)) => {
                        files.push((format!("{dir}/{}.json", kind.as_str()), j));
                        files.push((format!("{dir}/{}.csv", kind.as_str()), c));
                        status.models_ok.push(kind.as_str().into());
                        fits.push(fit);
                    }
                    Err(e) => status.errors.push(StageError {
                        stage: "fit".into(),
                        model: Some(kind.as_str().into()),
                        message: e.to_string(),
                    }),
                }
            }
        }
    }
    if !status.errors.is_empty() {
        status.status = "failed".into();
        let body = json!({ "region": spec.name, "errors": status.errors });
        if let Ok(b) = json_bytes(&body) {
            files.push((format!("{dir}/error.json"), b));
        }
    }
    if cfg.record_timing {
        status.wall_time_seconds = Some(start.elapsed().as_secs_f64());
    }
    RegionResult { status, files, fits }
}

/// A written file and its digest.
#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub regions: Vec<RegionStatus>,
    pub selection: SelectionReport,
    pub files: Vec<FileEntry>,
}

impl RunReport {
    /// True when any model in any region failed.
    pub fn failed(&self) -> bool {
        self.regions.iter().any(|r| !r.errors.is_empty())
    }
}

fn safe_relative(p: &str) -> bool {
    let path = Path::new(p);
    !p.is_empty() && path.components().all(|c| matches!(c, Component::Normal(_)))
}

/// Remove the files a previous run listed in its manifest, then the manifest.
fn clear_previous(out: &Path) -> Result<()> {
    let manifest = out.join(MANIFEST);
    let Ok(text) = fs::read_to_string(&manifest) else {
        return Ok(());
    };
    let old: Value = serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("{}: unreadable previous manifest: {e}", manifest.display())))?;
    let mut dirs = BTreeSet::new();
    for f in old["files"].as_array().into_iter().flatten() {
        let Some(p) = f["path"].as_str().filter(|p| safe_relative(p)) else {
            continue;
        };
        let path = out.join(p);
        if path.is_file() {
            fs::remove_file(&path)?;
        }
        if let Some(parent) = Path::new(p).parent().filter(|d| !d.as_os_str().is_empty()) {
            dirs.insert(out.join(parent));
        }
    }
    for d in dirs.iter().rev() {
        // only removes directories left empty
        let _ = fs::remove_dir(d);
    }
    fs::remove_file(&manifest)?;
    Ok(())
}

/// Write files under `out`, returning their digests sorted by path.
pub fn write_outputs(out: &Path, files: &[(String, Vec<u8>)]) -> Result<Vec<FileEntry>> {
    let mut entries = vec![];
    for (rel, bytes) in files {
        let path = out.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, bytes)?;
        entries.push(FileEntry {
            path: rel.clone(),
            sha256: sha256_hex(bytes),
        });
    }
    entries.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(entries)
}

fn provenance(cfg: &RunConfig, ds: &Dataset) -> Value {
    let mut v = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "seed": cfg.seed,
        "config_sha256": cfg.digest,
        "inputs": ds.inputs,
    });
    if let DataSource::Synthetic(s) = &cfg.source {
        v["synthetic_seed"] = json!(s.seed);
    }
    v
}

/// Terms every fit reports, in the order of the first fit.
fn common_terms(fits: &[(&str, &ModelFit)]) -> Vec<String> {
    let Some((_, first)) = fits.first() else {
        return vec![];
    };
    first
        .names
        .iter()
        .filter(|t| fits.iter().all(|(_, f)| f.position(t).is_some()))
        .cloned()
        .collect()
}

/// Load, select, fit every model in every region and write the outputs.
///
/// Returns `Err` only when nothing region-specific could run (unreadable
/// inputs, failed selection, unwritable output). Per-region failures are
/// reported in [`RunReport::regions`] and `<region>/error.json`.
pub fn run_pipeline(cfg: &RunConfig, out: &Path) -> Result<RunReport> {
    let start = Instant::now();
    let ds = Dataset::load(cfg)?;
    let selection = run_selection(&ds, cfg)?;
    let covariates: Vec<String> = ds
        .covariates
        .names
        .iter()
        .filter(|n| !selection.dropped.contains(n))
        .cloned()
        .collect();
    let prov = provenance(cfg, &ds);
    let results = par::map_slice(&cfg.regions, |spec| run_region(&ds, spec, &covariates, cfg, &prov));

    let mut files: Vec<OutFile> = vec![];
    if selection.enabled {
        files.extend(write_selection(&selection)?);
    }
    let all: Vec<(&str, &ModelFit)> = results
        .iter()
        .flat_map(|r| r.fits.iter().map(move |f| (r.status.name.as_str(), f)))
        .collect();
    let terms = common_terms(&all);
    let mut coef_rows = vec![];
    for term in &terms {
        for (region, fit) in &all {
            let i = fit.position(term).expect("common term");
            coef_rows.push(vec![
                term.clone(),
                region.to_string(),
                fit.model.clone(),
                f64_17(fit.coefficients[i]),
                f64_17(fit.std_errors[i]),
                f64_17(fit.p_values[i]),
                stars(fit.p_values[i]).to_string(),
            ]);
        }
    }
    files.push((
        "coefficients.csv".into(),
        csv_bytes(&["term", "region", "model", "estimate", "se", "p_value", "stars"], coef_rows)?,
    ));
    let mut interval_rows = vec![];
    for term in [S_LAG, D_LAG] {
        for (region, fit) in &all {
            if let Some(i) = fit.position(term) {
                interval_rows.push(vec![
                    term.to_string(),
                    f64_17(fit.coefficients[i]),
                    f64_17(fit.ci_low[i]),
                    f64_17(fit.ci_high[i]),
                    fit.model.clone(),
                    region.to_string(),
                ]);
            }
        }
    }
    files.push((
        "intervals.csv".into(),
        csv_bytes(&["term", "estimate", "low", "high", "model", "region"], interval_rows)?,
    ));
    for r in &results {
        files.extend(r.files.iter().cloned());
    }

    fs::create_dir_all(out)?;
    clear_previous(out)?;
    let entries = write_outputs(out, &files)?;
    let regions: Vec<RegionStatus> = results.into_iter().map(|r| r.status).collect();
    let mut manifest = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "seed": cfg.seed,
        "config_sha256": cfg.digest,
        "models": cfg.models.iter().map(|m| m.as_str()).collect::<Vec<_>>(),
        "inputs": ds.inputs,
        "provenance": prov,
        "regions": regions,
        "files": entries,
    });
    if cfg.record_timing {
        manifest["wall_time_seconds"] = json!(start.elapsed().as_secs_f64());
    }
    fs::write(out.join(MANIFEST), json_bytes(&manifest)?)?;
    Ok(RunReport {
        regions,
        selection,
        files: entries,
    })
}

/// Write each region's weight matrices and their state-level aggregates.
pub fn write_weights(cfg: &RunConfig, out: &Path) -> Result<Vec<FileEntry>> {
    let ds = Dataset::load(cfg)?;
    let mut files: Vec<OutFile> = vec![];
    for spec in &cfg.regions {
        let rd = prepare_region(&ds, spec, &[], cfg)?;
        let dir = &spec.name;
        let spatial_name = rd.spatial.kind().as_str();
        let mut push = |name: String, m: &ProximityMatrix| -> Result<()> {
            let mut b = vec![];
            m.to_writer(&mut b)?;
            files.push((format!("{dir}/{name}.csv"), b));
            Ok(())
        };
        push("social".into(), &rd.social)?;
        push(spatial_name.into(), &rd.spatial)?;
        let n_states = rd.states.iter().collect::<BTreeSet<_>>().len();
        if n_states >= 2 {
            push("state_social".into(), &aggregate_state_weights(&rd.social, &rd.attrs)?)?;
            let st = build_state_spatial_weights(&rd.attrs, &rd.index, cfg.weights.decay_exponent)?;
            push(format!("state_{spatial_name}"), &st)?;
        } else {
            log::warn!("region '{}' covers a single state; state-level weights skipped", spec.name);
        }
    }
    fs::create_dir_all(out)?;
    write_outputs(out, &files)
}

/// Write each region's standardized pooled lags.
pub fn write_lags(cfg: &RunConfig, out: &Path) -> Result<Vec<FileEntry>> {
    let ds = Dataset::load(cfg)?;
    let mut files: Vec<OutFile> = vec![];
    for spec in &cfg.regions {
        let rd = prepare_region(&ds, spec, &[], cfg)?;
        let mut b = vec![];
        write_lags_csv(&mut b, &[&rd.s_lag, &rd.d_lag])?;
        files.push((format!("{}/lags.csv", spec.name), b));
    }
    fs::create_dir_all(out)?;
    write_outputs(out, &files)
}
