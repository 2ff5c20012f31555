use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::geo_graph::RegionAttributes;
use crate::synth::{generate_world, SynthConfig};

pub const DEFAULT_SEED: u64 = 20240501;

/// Estimators the pipeline can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    WlsCluster,
    SemNetwork,
    SemSpatial,
    TwowayFe,
    G2sls,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::WlsCluster,
        ModelKind::SemNetwork,
        ModelKind::SemSpatial,
        ModelKind::TwowayFe,
        ModelKind::G2sls,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::WlsCluster => "wls_cluster",
            ModelKind::SemNetwork => "sem_network",
            ModelKind::SemSpatial => "sem_spatial",
            ModelKind::TwowayFe => "twoway_fe",
            ModelKind::G2sls => "g2sls",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.as_str() == s.trim())
    }
}

fn valid_models() -> String {
    ModelKind::ALL.map(|m| m.as_str()).join(", ")
}

/// Parse a model list, reporting every unknown or repeated name.
pub fn parse_models<S: AsRef<str>>(names: &[S]) -> std::result::Result<Vec<ModelKind>, Vec<String>> {
    let mut errs = vec![];
    let mut out = vec![];
    for name in names {
        let name = name.as_ref();
        match ModelKind::parse(name) {
            Some(m) if out.contains(&m) => errs.push(format!("model '{name}' listed twice")),
            Some(m) => out.push(m),
            None => errs.push(format!("unknown model '{name}'; valid models: {}", valid_models())),
        }
    }
    if out.is_empty() && errs.is_empty() {
        errs.push(format!("model list is empty; valid models: {}", valid_models()));
    }
    if errs.is_empty() {
        Ok(out)
    } else {
        Err(errs)
    }
}

/// Which regions an analysis region covers.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionSelector {
    All,
    Ids(Vec<String>),
    States(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionSpec {
    pub name: String,
    pub selector: RegionSelector,
}

impl RegionSpec {
    /// Member ids in `attrs` order.
    pub fn resolve(&self, attrs: &RegionAttributes) -> Result<Vec<String>> {
        let ids: Vec<String> = match &self.selector {
            RegionSelector::All => attrs.iter().map(|(id, _)| id.to_string()).collect(),
            RegionSelector::Ids(ids) => {
                let wanted: BTreeSet<&str> = ids.iter().map(String::as_str).collect();
                if let Some(bad) = ids.iter().find(|id| attrs.get(id).is_none()) {
                    return Err(Error::UnknownRegion(bad.clone()));
                }
                attrs.iter().filter(|(id, _)| wanted.contains(id)).map(|(id, _)| id.to_string()).collect()
            }
            RegionSelector::States(states) => {
                let wanted: BTreeSet<&str> = states.iter().map(String::as_str).collect();
                attrs
                    .iter()
                    .filter(|(_, a)| wanted.contains(a.state.as_str()))
                    .map(|(id, _)| id.to_string())
                    .collect()
            }
        };
        if ids.is_empty() {
            return Err(Error::input(format!("region '{}' has no members", self.name)));
        }
        Ok(ids)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputPaths {
    pub sci: PathBuf,
    pub attributes: PathBuf,
    pub mortality: Option<PathBuf>,
    pub outcomes: Option<PathBuf>,
    pub covariates: Option<PathBuf>,
    pub selection: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSource {
    Files(InputPaths),
    /// Generate the data in memory; the seed comes from the run seed.
    Synthetic(SynthConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightOptions {
    /// Use `1 + d^-p` spatial weights instead of `1 + 1/d`.
    pub decay_exponent: Option<f64>,
    pub weighted_wls: bool,
    pub weighted_fe: bool,
    pub weighted_sem: bool,
    pub weighted_g2sls: bool,
}

impl Default for WeightOptions {
    fn default() -> Self {
        Self {
            decay_exponent: None,
            weighted_wls: true,
            weighted_fe: true,
            weighted_sem: false,
            weighted_g2sls: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LassoConfig {
    pub enabled: bool,
    pub folds: usize,
    /// Fold seed; derived from the run seed when absent.
    pub seed: Option<u64>,
    /// Never-penalized candidates (always kept).
    pub unpenalized: Vec<String>,
    /// Candidates left out of selection; they enter the design directly.
    pub exclude: Vec<String>,
    pub n_lambda: usize,
    pub lambda_min_ratio: f64,
    /// Passed through to the selection table.
    pub descriptions: IndexMap<String, String>,
}

impl Default for LassoConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            folds: 6,
            seed: None,
            unpenalized: vec![],
            exclude: vec![],
            n_lambda: 100,
            lambda_min_ratio: 1e-4,
            descriptions: IndexMap::new(),
        }
    }
}

/// A validated run configuration. Relative paths are resolved against the
/// config file's directory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub models: Vec<ModelKind>,
    pub out: Option<PathBuf>,
    /// Study window; defaults to every year in the data.
    pub years: Option<Vec<i32>>,
    pub source: DataSource,
    pub regions: Vec<RegionSpec>,
    pub weights: WeightOptions,
    pub lasso: LassoConfig,
    pub record_timing: bool,
    /// sha256 of the config text.
    pub digest: String,
}

const TOP_KEYS: &[&str] = &[
    "seed",
    "out",
    "models",
    "years",
    "record_timing",
    "inputs",
    "synthetic",
    "regions",
    "weights",
    "lasso",
];
const INPUT_KEYS: &[&str] = &[
    "sci",
    "attributes",
    "mortality",
    "outcomes",
    "covariates",
    "selection",
    "allow_shared_selection",
];
const REGION_KEYS: &[&str] = &["name", "all", "ids", "states"];
const WEIGHT_KEYS: &[&str] = &[
    "decay_exponent",
    "weighted_wls",
    "weighted_fe",
    "weighted_sem",
    "weighted_g2sls",
];
const LASSO_KEYS: &[&str] = &[
    "enabled",
    "folds",
    "seed",
    "unpenalized",
    "exclude",
    "n_lambda",
    "lambda_min_ratio",
    "descriptions",
];

/// Collects problems while reading a TOML table.
struct Reader<'a> {
    errs: &'a mut Vec<String>,
}

impl Reader<'_> {
    fn keys(&mut self, t: &Table, allowed: &[&str], ctx: &str) {
        for k in t.keys() {
            if !allowed.contains(&k.as_str()) {
                self.errs.push(format!(
                    "unknown key '{}{k}'; valid keys: {}",
                    prefix(ctx),
                    allowed.join(", ")
                ));
            }
        }
    }

    fn table<'t>(&mut self, t: &'t Table, key: &str, ctx: &str) -> Option<&'t Table> {
        match t.get(key)? {
            Value::Table(v) => Some(v),
            other => {
                self.type_err(ctx, key, "a table", other);
                None
            }
        }
    }

    fn type_err(&mut self, ctx: &str, key: &str, want: &str, got: &Value) {
        self.errs.push(format!("'{}{key}' must be {want}, found {}", prefix(ctx), got.type_str()));
    }

    fn bool(&mut self, t: &Table, key: &str, ctx: &str, default: bool) -> bool {
        match t.get(key) {
            None => default,
            Some(Value::Boolean(b)) => *b,
            Some(v) => {
                self.type_err(ctx, key, "a boolean", v);
                default
            }
        }
    }

    fn u64(&mut self, t: &Table, key: &str, ctx: &str) -> Option<u64> {
        match t.get(key)? {
            Value::Integer(i) if *i >= 0 => Some(*i as u64),
            v => {
                self.type_err(ctx, key, "a non-negative integer", v);
                None
            }
        }
    }

    fn f64(&mut self, t: &Table, key: &str, ctx: &str) -> Option<f64> {
        match t.get(key)? {
            Value::Float(f) => Some(*f),
            Value::Integer(i) => Some(*i as f64),
            v => {
                self.type_err(ctx, key, "a number", v);
                None
            }
        }
    }

    fn str(&mut self, t: &Table, key: &str, ctx: &str) -> Option<String> {
        match t.get(key)? {
            Value::String(s) => Some(s.clone()),
            v => {
                self.type_err(ctx, key, "a string", v);
                None
            }
        }
    }

    fn strings(&mut self, t: &Table, key: &str, ctx: &str) -> Option<Vec<String>> {
        let v = t.get(key)?;
        let Value::Array(items) = v else {
            self.type_err(ctx, key, "an array of strings", v);
            return None;
        };
        let mut out = vec![];
        for item in items {
            match item {
                Value::String(s) => out.push(s.clone()),
                other => {
                    self.type_err(ctx, key, "an array of strings", other);
                    return None;
                }
            }
        }
        Some(out)
    }
}

fn prefix(ctx: &str) -> String {
    if ctx.is_empty() {
        String::new()
    } else {
        format!("{ctx}.")
    }
}

/// Report keys of `t` that the serialized defaults do not have. Free-form
/// maps (`planted.beta`) are not descended into.
fn unknown_nested(t: &Table, reference: &Table, ctx: &str, errs: &mut Vec<String>) {
    for (k, v) in t {
        let path = format!("{ctx}.{k}");
        match reference.get(k) {
            None => {
                let valid: Vec<&str> = reference.keys().map(String::as_str).collect();
                errs.push(format!("unknown key '{path}'; valid keys: {}", valid.join(", ")));
            }
            Some(Value::Table(r)) if k != "beta" => {
                if let Value::Table(sub) = v {
                    unknown_nested(sub, r, &path, errs);
                }
            }
            _ => {}
        }
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}

impl RunConfig {
    /// Parse and check a config, reporting every problem at once.
    ///
    /// Referenced files are checked for existence and region ids against the
    /// attributes (or the generated world in synthetic mode).
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let mut errs = vec![];
        let cfg = Self::parse(text, base_dir, &mut errs);
        if let Some(cfg) = &cfg {
            if errs.is_empty() {
                cfg.check_references(&mut errs);
            }
        }
        match cfg {
            Some(cfg) if errs.is_empty() => Ok(cfg),
            _ => Err(Error::Config(errs)),
        }
    }

    fn parse(text: &str, base_dir: &Path, errs: &mut Vec<String>) -> Option<Self> {
        let root: Table = match text.parse() {
            Ok(t) => t,
            Err(e) => {
                errs.push(format!("TOML syntax: {}", e.to_string().trim()));
                return None;
            }
        };
        let mut r = Reader { errs };
        r.keys(&root, TOP_KEYS, "");

        let seed = r.u64(&root, "seed", "").unwrap_or(DEFAULT_SEED);
        let out = r.str(&root, "out", "").map(|p| base_dir.join(p));
        let record_timing = r.bool(&root, "record_timing", "", false);
        let models = match r.strings(&root, "models", "") {
            None if root.contains_key("models") => vec![],
            None => ModelKind::ALL.to_vec(),
            Some(names) => parse_models(&names).unwrap_or_else(|e| {
                r.errs.extend(e);
                vec![]
            }),
        };
        let years = match root.get("years") {
            None => None,
            Some(Value::Array(items)) => {
                let ys: Vec<i32> = items.iter().filter_map(|v| v.as_integer()).map(|v| v as i32).collect();
                if ys.len() != items.len() || ys.is_empty() {
                    r.errs.push("'years' must be a non-empty array of integers".into());
                }
                if ys.iter().collect::<BTreeSet<_>>().len() != ys.len() {
                    r.errs.push("'years' lists a year twice".into());
                }
                Some(ys)
            }
            Some(v) => {
                r.type_err("", "years", "an array of integers", v);
                None
            }
        };

        let inputs = r.table(&root, "inputs", "");
        let synthetic = r.table(&root, "synthetic", "");
        let source = match (inputs, synthetic) {
            (Some(_), Some(_)) => {
                r.errs.push("set either [inputs] or [synthetic], not both".into());
                None
            }
            (None, None) => {
                if !root.contains_key("inputs") && !root.contains_key("synthetic") {
                    r.errs.push("missing data source: add an [inputs] or a [synthetic] table".into());
                }
                None
            }
            (Some(t), None) => Self::parse_inputs(t, base_dir, &mut r).map(DataSource::Files),
            (None, Some(t)) => Self::parse_synthetic(t, seed, &mut r).map(DataSource::Synthetic),
        };

        let regions = Self::parse_regions(&root, &mut r);

        let mut weights = WeightOptions::default();
        if let Some(t) = r.table(&root, "weights", "") {
            r.keys(t, WEIGHT_KEYS, "weights");
            weights.decay_exponent = r.f64(t, "decay_exponent", "weights");
            if let Some(p) = weights.decay_exponent {
                if !(p.is_finite() && p > 0.0) {
                    r.errs.push(format!("weights.decay_exponent must be positive, got {p}"));
                }
            }
            weights.weighted_wls = r.bool(t, "weighted_wls", "weights", weights.weighted_wls);
            weights.weighted_fe = r.bool(t, "weighted_fe", "weights", weights.weighted_fe);
            weights.weighted_sem = r.bool(t, "weighted_sem", "weights", weights.weighted_sem);
            weights.weighted_g2sls = r.bool(t, "weighted_g2sls", "weights", weights.weighted_g2sls);
        }

        let lasso = Self::parse_lasso(&root, &mut r);
        if let (Some(DataSource::Files(p)), true) = (&source, lasso.enabled) {
            if p.selection.is_none() {
                r.errs.push("lasso is enabled but inputs.selection is not set (or set lasso.enabled = false)".into());
            }
        }

        Some(Self {
            seed,
            models,
            out,
            years,
            source: source?,
            regions,
            weights,
            lasso,
            record_timing,
            digest: sha256_hex(text.as_bytes()),
        })
    }

    fn parse_inputs(t: &Table, base_dir: &Path, r: &mut Reader) -> Option<InputPaths> {
        r.keys(t, INPUT_KEYS, "inputs");
        let path = |r: &mut Reader, key: &str| r.str(t, key, "inputs").map(|p| base_dir.join(p));
        let sci = path(r, "sci");
        let attributes = path(r, "attributes");
        let mortality = path(r, "mortality");
        let outcomes = path(r, "outcomes");
        let covariates = path(r, "covariates");
        let selection = path(r, "selection");
        let shared = r.bool(t, "allow_shared_selection", "inputs", false);
        for (key, v) in [("sci", &sci), ("attributes", &attributes)] {
            if v.is_none() && !t.contains_key(key) {
                r.errs.push(format!("inputs.{key} is required"));
            }
        }
        match (&mortality, &outcomes) {
            (Some(_), Some(_)) => r.errs.push("set one of inputs.mortality and inputs.outcomes, not both".into()),
            (None, None) if !t.contains_key("mortality") && !t.contains_key("outcomes") => {
                r.errs.push("inputs needs an outcome source: mortality or outcomes".into())
            }
            _ => {}
        }
        if let Some(sel) = &selection {
            let others = [&sci, &attributes, &mortality, &outcomes, &covariates];
            if !shared && others.iter().any(|o| o.as_ref() == Some(sel)) {
                r.errs.push(format!(
                    "inputs.selection ({}) must be a separate dataset from the inference inputs; set inputs.allow_shared_selection = true to override",
                    sel.display()
                ));
            }
        }
        Some(InputPaths {
            sci: sci?,
            attributes: attributes?,
            mortality,
            outcomes,
            covariates,
            selection,
        })
    }

    fn parse_synthetic(t: &Table, run_seed: u64, r: &mut Reader) -> Option<SynthConfig> {
        let reference = Value::try_from(SynthConfig::default()).expect("default synth config serializes");
        if let Value::Table(reference) = &reference {
            unknown_nested(t, reference, "synthetic", r.errs);
        }
        let explicit_seed = t.contains_key("seed");
        match SynthConfig::deserialize(Value::Table(t.clone())) {
            Ok(mut cfg) => {
                if !explicit_seed {
                    cfg.seed = super::derive_seed(run_seed, "synthetic");
                }
                r.errs.extend(cfg.problems().into_iter().map(|p| format!("synthetic: {p}")));
                Some(cfg)
            }
            Err(e) => {
                let msg = e.to_string();
                // unknown keys were already reported
                if !msg.contains("unknown field") {
                    r.errs.push(format!("synthetic: {}", msg.trim()));
                }
                None
            }
        }
    }

    fn parse_regions(root: &Table, r: &mut Reader) -> Vec<RegionSpec> {
        let Some(v) = root.get("regions") else {
            return vec![RegionSpec {
                name: "all".into(),
                selector: RegionSelector::All,
            }];
        };
        let Value::Array(items) = v else {
            r.type_err("", "regions", "an array of tables ([[regions]])", v);
            return vec![];
        };
        if items.is_empty() {
            r.errs.push("'regions' is empty".into());
        }
        let mut out: Vec<RegionSpec> = vec![];
        for (i, item) in items.iter().enumerate() {
            let ctx = format!("regions[{i}]");
            let Value::Table(t) = item else {
                r.errs.push(format!("'{ctx}' must be a table"));
                continue;
            };
            r.keys(t, REGION_KEYS, &ctx);
            let Some(name) = r.str(t, "name", &ctx) else {
                if !t.contains_key("name") {
                    r.errs.push(format!("{ctx}.name is required"));
                }
                continue;
            };
            if !valid_name(&name) {
                r.errs.push(format!("region name '{name}' may only contain letters, digits, '_' and '-'"));
            }
            if out.iter().any(|s| s.name == name) {
                r.errs.push(format!("region name '{name}' is used twice"));
            }
            let all = r.bool(t, "all", &ctx, false);
            let ids = r.strings(t, "ids", &ctx);
            let states = r.strings(t, "states", &ctx);
            let n_sel = all as usize + ids.is_some() as usize + states.is_some() as usize;
            if n_sel != 1 {
                r.errs.push(format!("region '{name}' needs exactly one of all = true, ids or states"));
                continue;
            }
            let selector = match (ids, states) {
                (Some(ids), _) => RegionSelector::Ids(ids),
                (_, Some(states)) => RegionSelector::States(states),
                _ => RegionSelector::All,
            };
            match &selector {
                RegionSelector::Ids(v) | RegionSelector::States(v) if v.is_empty() => {
                    r.errs.push(format!("region '{name}' has an empty member list"));
                }
                RegionSelector::Ids(v) if v.iter().collect::<BTreeSet<_>>().len() != v.len() => {
                    r.errs.push(format!("region '{name}' lists an id twice"));
                }
                _ => {}
            }
            out.push(RegionSpec { name, selector });
        }
        out
    }

    fn parse_lasso(root: &Table, r: &mut Reader) -> LassoConfig {
        let mut l = LassoConfig::default();
        let Some(t) = r.table(root, "lasso", "") else {
            return l;
        };
        r.keys(t, LASSO_KEYS, "lasso");
        l.enabled = r.bool(t, "enabled", "lasso", true);
        if let Some(k) = r.u64(t, "folds", "lasso") {
            if k < 2 {
                r.errs.push(format!("lasso.folds must be at least 2, got {k}"));
            }
            l.folds = k as usize;
        }
        l.seed = r.u64(t, "seed", "lasso");
        if let Some(n) = r.u64(t, "n_lambda", "lasso") {
            if n < 2 {
                r.errs.push(format!("lasso.n_lambda must be at least 2, got {n}"));
            }
            l.n_lambda = n as usize;
        }
        if let Some(x) = r.f64(t, "lambda_min_ratio", "lasso") {
            if !(x > 0.0 && x < 1.0) {
                r.errs.push(format!("lasso.lambda_min_ratio must lie in (0, 1), got {x}"));
            }
            l.lambda_min_ratio = x;
        }
        l.unpenalized = r.strings(t, "unpenalized", "lasso").unwrap_or_default();
        l.exclude = r.strings(t, "exclude", "lasso").unwrap_or_default();
        if let Some(both) = l.unpenalized.iter().find(|u| l.exclude.contains(u)) {
            r.errs.push(format!("'{both}' is both unpenalized and excluded in [lasso]"));
        }
        if let Some(d) = r.table(t, "descriptions", "lasso") {
            for (k, v) in d {
                match v {
                    Value::String(s) => {
                        l.descriptions.insert(k.clone(), s.clone());
                    }
                    other => r.type_err("lasso.descriptions", k, "a string", other),
                }
            }
        }
        l
    }

    /// File existence, region membership and selection-column checks.
    fn check_references(&self, errs: &mut Vec<String>) {
        let (attrs, candidates) = match &self.source {
            DataSource::Files(p) => {
                let named = [
                    ("sci", Some(&p.sci)),
                    ("attributes", Some(&p.attributes)),
                    ("mortality", p.mortality.as_ref()),
                    ("outcomes", p.outcomes.as_ref()),
                    ("covariates", p.covariates.as_ref()),
                    ("selection", p.selection.as_ref()),
                ];
                for (key, path) in named {
                    if let Some(path) = path {
                        if !path.is_file() {
                            errs.push(format!("inputs.{key}: file not found: {}", path.display()));
                        }
                    }
                }
                let attrs = p
                    .attributes
                    .is_file()
                    .then(|| RegionAttributes::read_csv(&p.attributes))
                    .and_then(|r| r.map_err(|e| errs.push(format!("inputs.attributes: {e}"))).ok());
                let candidates = p
                    .selection
                    .as_ref()
                    .filter(|s| s.is_file())
                    .and_then(|s| selection_header(s).map_err(|e| errs.push(format!("inputs.selection: {e}"))).ok());
                (attrs, candidates)
            }
            DataSource::Synthetic(cfg) => {
                let needs_world = self.regions.iter().any(|r| r.selector != RegionSelector::All);
                let attrs = if needs_world {
                    generate_world(cfg).map(|w| w.attrs).map_err(|e| errs.push(format!("synthetic: {e}"))).ok()
                } else {
                    None
                };
                let mut names = cfg.planted.covariate_names();
                names.extend((1..=cfg.covariates.n_noise_candidates).map(|k| format!("noise{k}")));
                (attrs, Some(names))
            }
        };

        if let Some(attrs) = &attrs {
            let states: BTreeSet<&str> = attrs.iter().map(|(_, a)| a.state.as_str()).collect();
            for spec in &self.regions {
                match &spec.selector {
                    RegionSelector::All => {}
                    RegionSelector::Ids(ids) => {
                        let unknown: Vec<&str> = ids.iter().filter(|id| attrs.get(id).is_none()).map(String::as_str).collect();
                        if !unknown.is_empty() {
                            errs.push(format!(
                                "region '{}': {} unknown region id(s): {}",
                                spec.name,
                                unknown.len(),
                                abbreviate(&unknown)
                            ));
                        }
                    }
                    RegionSelector::States(ss) => {
                        let unknown: Vec<&str> = ss.iter().map(String::as_str).filter(|s| !states.contains(s)).collect();
                        if !unknown.is_empty() {
                            errs.push(format!("region '{}': unknown state id(s): {}", spec.name, abbreviate(&unknown)));
                        }
                    }
                }
            }
        }

        if self.lasso.enabled {
            if let Some(names) = &candidates {
                for (key, list) in [("unpenalized", &self.lasso.unpenalized), ("exclude", &self.lasso.exclude)] {
                    for v in list {
                        if !names.contains(v) {
                            errs.push(format!(
                                "lasso.{key}: '{v}' is not a selection candidate; candidates: {}",
                                names.join(", ")
                            ));
                        }
                    }
                }
            }
        }
    }

    /// Keep only the named region.
    pub fn restrict_region(&mut self, name: &str) -> Result<()> {
        if !self.regions.iter().any(|r| r.name == name) {
            let names: Vec<&str> = self.regions.iter().map(|r| r.name.as_str()).collect();
            return Err(Error::Config(vec![format!(
                "unknown region '{name}'; configured regions: {}",
                names.join(", ")
            )]));
        }
        self.regions.retain(|r| r.name == name);
        Ok(())
    }

    /// Override the run seed, re-deriving the synthetic seed when it was derived.
    pub fn set_seed(&mut self, seed: u64) {
        if let DataSource::Synthetic(cfg) = &mut self.source {
            if cfg.seed == super::derive_seed(self.seed, "synthetic") {
                cfg.seed = super::derive_seed(seed, "synthetic");
            }
        }
        self.seed = seed;
    }
}

fn abbreviate(items: &[&str]) -> String {
    const SHOW: usize = 5;
    let mut s = items.iter().take(SHOW).copied().collect::<Vec<_>>().join(", ");
    if items.len() > SHOW {
        s.push_str(&format!(", ... ({} more)", items.len() - SHOW));
    }
    s
}

/// Candidate columns of a selection CSV (`region_id,outcome,...`).
pub(crate) fn selection_header(path: &Path) -> Result<Vec<String>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let header: Vec<String> = rdr.headers()?.iter().map(|s| s.trim().to_string()).collect();
    if header.len() < 3 || header[0] != "region_id" || header[1] != "outcome" {
        return Err(Error::input(format!(
            "selection CSV header must start with region_id,outcome and name at least one candidate; got {:?}",
            header
        )));
    }
    Ok(header[2..].to_vec())
}

/// Read and validate a config file.
pub fn validate_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config(vec![format!("{}: {e}", path.display())]))?;
    let base = path.parent().unwrap_or(Path::new("."));
    RunConfig::from_toml_str(&text, base)
}
