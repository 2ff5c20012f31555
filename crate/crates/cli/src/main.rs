//! `proxreg`: weights, lags, model fits and full runs from a TOML config.
//!
//! Exit codes: 0 success, 1 invalid config or arguments, 2 runtime failure
//! (including a model failing in at least one region).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use proxreg::pipeline::{
    parse_models, run_pipeline, run_selection, validate_config, write_lags, write_outputs, write_selection, write_weights, Dataset,
    DataSource, FileEntry, RunConfig,
};
use proxreg::synth::{write_fixture, SynthData};

#[derive(Parser)]
#[command(name = "proxreg", version, about = "Social and spatial proximity regressions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write social and spatial weight matrices (and state aggregates) per region.
    Weights(Common),
    /// Write standardized social and spatial lags per region.
    Lag(Common),
    /// Fit a single model in every region.
    Fit(Common),
    /// Run covariate selection only.
    Lasso(Common),
    /// Write the synthetic world of a config's [synthetic] table as input files.
    Synth(Common),
    /// Full pipeline: selection, every model in every region, manifest.
    Run(Common),
    /// Check a config without running anything.
    Validate(Common),
}

#[derive(Args)]
struct Common {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `out` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run seed; overrides `seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated models: wls_cluster, sem_network, sem_spatial, twoway_fe, g2sls.
    #[arg(long, value_delimiter = ',')]
    models: Option<Vec<String>>,
    /// Restrict to one configured analysis region.
    #[arg(long)]
    region: Option<String>,
    /// Record wall-clock times in the manifest (makes outputs non-reproducible).
    #[arg(long)]
    record_timing: bool,
}

/// Failure category (exit 1 or 2) and its message.
enum Failure {
    Invalid(String),
    Runtime(String),
}

impl From<proxreg::Error> for Failure {
    fn from(e: proxreg::Error) -> Self {
        match e {
            proxreg::Error::Config(_) => Failure::Invalid(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn load(c: &Common) -> Result<RunConfig, Failure> {
    let mut cfg = validate_config(&c.config)?;
    if let Some(seed) = c.seed {
        cfg.set_seed(seed);
    }
    if let Some(names) = &c.models {
        cfg.models = parse_models(names).map_err(|e| Failure::Invalid(e.join("\n")))?;
    }
    if let Some(r) = &c.region {
        cfg.restrict_region(r)?;
    }
    if c.record_timing {
        cfg.record_timing = true;
    }
    Ok(cfg)
}

fn out_dir(c: &Common, cfg: &RunConfig) -> Result<PathBuf, Failure> {
    c.out
        .clone()
        .or_else(|| cfg.out.clone())
        .ok_or_else(|| Failure::Invalid("no output directory: pass --out or set `out` in the config".into()))
}

fn report_files(out: &Path, files: &[FileEntry]) {
    for f in files {
        log::info!("wrote {}", out.join(&f.path).display());
    }
    println!("wrote {} file(s) to {}", files.len(), out.display());
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Validate(c) => {
            let cfg = load(&c)?;
            let models: Vec<&str> = cfg.models.iter().map(|m| m.as_str()).collect();
            let regions: Vec<&str> = cfg.regions.iter().map(|r| r.name.as_str()).collect();
            println!(
                "config OK: models [{}], regions [{}], seed {}",
                models.join(", "),
                regions.join(", "),
                cfg.seed
            );
            Ok(())
        }
        Command::Fit(c) => {
            let cfg = load(&c)?;
            if cfg.models.len() != 1 {
                return Err(Failure::Invalid(format!(
                    "fit needs exactly one model (--models), got {}",
                    cfg.models.len()
                )));
            }
            full_run(&c, &cfg)
        }
        Command::Run(c) => {
            let cfg = load(&c)?;
            full_run(&c, &cfg)
        }
        Command::Weights(c) => {
            let cfg = load(&c)?;
            let out = out_dir(&c, &cfg)?;
            report_files(&out, &write_weights(&cfg, &out)?);
            Ok(())
        }
        Command::Lag(c) => {
            let cfg = load(&c)?;
            let out = out_dir(&c, &cfg)?;
            report_files(&out, &write_lags(&cfg, &out)?);
            Ok(())
        }
        Command::Lasso(c) => {
            let cfg = load(&c)?;
            let out = out_dir(&c, &cfg)?;
            let ds = Dataset::load(&cfg)?;
            let report = run_selection(&ds, &cfg)?;
            if !report.enabled {
                return Err(Failure::Invalid("lasso is disabled in this config".into()));
            }
            let entries = write_outputs(&out, &write_selection(&report)?)?;
            for w in &report.warnings {
                log::warn!("{w}");
            }
            let kept: Vec<&str> = report.rows.iter().filter(|r| r.kept).map(|r| r.variable.as_str()).collect();
            println!("kept [{}] at lambda {:.6e}", kept.join(", "), report.lambda.unwrap_or(f64::NAN));
            report_files(&out, &entries);
            Ok(())
        }
        Command::Synth(c) => {
            let cfg = load(&c)?;
            let out = out_dir(&c, &cfg)?;
            let DataSource::Synthetic(s) = &cfg.source else {
                return Err(Failure::Invalid("synth needs a config with a [synthetic] table".into()));
            };
            write_fixture(&SynthData::generate(s)?, &out)?;
            println!("wrote synthetic inputs to {}", out.display());
            Ok(())
        }
    }
}

fn full_run(c: &Common, cfg: &RunConfig) -> Result<(), Failure> {
    let out = out_dir(c, cfg)?;
    let report = run_pipeline(cfg, &out)?;
    for r in &report.regions {
        println!("{}: {} ({} regions, models ok: {})", r.name, r.status, r.n_regions, r.models_ok.join(", "));
        for e in &r.errors {
            eprintln!("  {} {}: {}", e.stage, e.model.as_deref().unwrap_or(""), e.message);
        }
    }
    println!("wrote {} file(s) to {}", report.files.len() + 1, out.display());
    if report.failed() {
        return Err(Failure::Runtime("at least one region failed; see error.json".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
