//! Running one scenario to disk.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use jcm_core::observables::uniform_grid;
use jcm_core::{build_initial_state, coherent_amplitudes, entropy_series, EntropySeries64, FieldSpec64, Hamiltonian64};
use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::output::{plot_script, write_csv};
use crate::predict::predict;

/// Rows whose norm deviates from 1 by more than this are reported.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ScenarioConfig,
    pub library_version: String,
    pub cli_version: String,
    pub engine: String,
    /// `nmax` per mode.
    pub cutoffs: Vec<usize>,
    pub dimension: usize,
    /// Retained coherent-state probability, product over modes.
    pub truncation_mass: f64,
    pub rows: usize,
    pub max_norm_deviation: f64,
    pub predicted_times: Vec<f64>,
    pub data_file: String,
    pub plot_file: Option<String>,
    pub wall_clock_seconds: f64,
    pub created_unix: u64,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub series: EntropySeries64,
    pub manifest: RunManifest,
    pub data_path: PathBuf,
    pub manifest_path: PathBuf,
    pub plot_path: Option<PathBuf>,
}

fn retained_mass(field: &FieldSpec64, cutoffs: &[jcm_core::FockCutoff]) -> Result<f64> {
    let specs = match field {
        FieldSpec64::OneMode(a) => vec![*a],
        FieldSpec64::TwoMode(a, b) => vec![*a, *b],
    };
    let mut mass = 1.0;
    for (spec, cut) in specs.iter().zip(cutoffs) {
        mass *= coherent_amplitudes(spec, *cut)?.iter().map(|z| z.norm_sqr()).sum::<f64>();
    }
    Ok(mass)
}

/// Computes the series without touching the filesystem.
pub fn simulate(cfg: &ScenarioConfig) -> Result<(EntropySeries64, jcm_core::JointSpace, f64)> {
    cfg.validate()?;
    let field = cfg.field()?;
    let space = field.space(cfg.cutoff_width);
    let mass = retained_mass(&field, space.cutoffs())?;
    let psi = build_initial_state(&cfg.atomic()?, &field, space)?;
    let h = Hamiltonian64::build(space);
    let engine = cfg.engine()?.build(&h)?;
    let grid = uniform_grid(cfg.tmin, cfg.tmax, cfg.steps);
    let series = entropy_series(engine.as_ref(), &psi, &grid)?;
    Ok((series, space, mass))
}

pub fn run_scenario(cfg: &ScenarioConfig, out_dir: &Path) -> Result<RunReport> {
    let start = Instant::now();
    let (series, space, mass) = simulate(cfg)?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating output directory {}", out_dir.display()))?;

    let data_file = format!("{}.csv", cfg.name);
    let data_path = out_dir.join(&data_file);
    let file = File::create(&data_path).with_context(|| format!("writing {}", data_path.display()))?;
    write_csv(BufWriter::new(file), &series).with_context(|| format!("writing {}", data_path.display()))?;

    let max_norm_deviation = series.norm.iter().fold(0.0f64, |m, n| m.max((n - 1.0).abs()));
    if max_norm_deviation > NORM_TOLERANCE {
        warn!("norm drift {max_norm_deviation:e} exceeds {NORM_TOLERANCE:e}");
    }

    let markers = predict(cfg)?.markers();
    let plot_file = cfg.plot.then(|| format!("{}_plot.py", cfg.name));
    let plot_path = match &plot_file {
        Some(name) => {
            let path = out_dir.join(name);
            let script = plot_script(&cfg.name, &data_file, &format!("{}.png", cfg.name), cfg.plot_offset, &markers);
            fs::write(&path, script).with_context(|| format!("writing {}", path.display()))?;
            Some(path)
        }
        None => None,
    };

    let manifest = RunManifest {
        config: cfg.clone(),
        library_version: jcm_core::VERSION.to_string(),
        cli_version: env!("CARGO_PKG_VERSION").to_string(),
        engine: cfg.engine()?.name().to_string(),
        cutoffs: space.cutoffs().iter().map(|c| c.nmax).collect(),
        dimension: space.dim(),
        truncation_mass: mass,
        rows: series.len(),
        max_norm_deviation,
        predicted_times: markers,
        data_file,
        plot_file,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        created_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
    };
    let manifest_path = out_dir.join(format!("{}.manifest.json", cfg.name));
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)? + "\n")
        .with_context(|| format!("writing {}", manifest_path.display()))?;
    info!("wrote {} rows to {}", series.len(), data_path.display());
    Ok(RunReport { series, manifest, data_path, manifest_path, plot_path })
}
