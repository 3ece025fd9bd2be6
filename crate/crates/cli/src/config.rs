//! Scenario configuration: a flat TOML table plus command-line overrides.

use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use jcm_core::{
    preset_atomic_state, AtomicPreset, AtomicState64, CoherentSpec, EngineKind, FieldSpec64, ModelKind, C64,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    OneMode,
    TwoMode,
}

impl Model {
    pub fn kind(self) -> ModelKind {
        match self {
            Model::OneMode => ModelKind::OneMode,
            Model::TwoMode => ModelKind::TwoMode,
        }
    }
}

/// Every key of a config file. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    /// Base name of the output files.
    pub name: String,
    pub model: Model,
    /// Preset name, or "custom" to use `alpha..delta`.
    pub state: String,
    /// Complex amplitudes such as `"0.5"`, `"0.5+0.5i"`; normalized before the run.
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub gamma: Option<String>,
    pub delta: Option<String>,
    pub nbar: f64,
    pub nbar2: f64,
    pub phase: f64,
    pub phase2: f64,
    pub tmin: f64,
    pub tmax: f64,
    pub steps: usize,
    pub cutoff_width: f64,
    pub engine: String,
    pub plot: bool,
    /// Vertical offset of the `W_++` curve in the plot script only.
    pub plot_offset: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            name: "custom".into(),
            model: Model::OneMode,
            state: "A".into(),
            alpha: None,
            beta: None,
            gamma: None,
            delta: None,
            nbar: 30.0,
            nbar2: 30.0,
            phase: 0.0,
            phase2: 0.0,
            tmin: 0.0,
            tmax: 2.0 * std::f64::consts::PI,
            steps: 2000,
            cutoff_width: jcm_core::fock::DEFAULT_CUTOFF_WIDTH,
            engine: EngineKind::BlockExact.name().into(),
            plot: true,
            plot_offset: 0.5,
        }
    }
}

fn parse_amplitude(key: &str, v: &Option<String>) -> Result<C64> {
    match v {
        None => Ok(C64::new(0.0, 0.0)),
        Some(s) => s
            .replace(' ', "")
            .parse::<C64>()
            .map_err(|_| anyhow::anyhow!("{key}: cannot parse '{s}' as a complex number")),
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        Ok(toml::from_str(s)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg = Self::from_toml_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if cfg.name == Self::default().name {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                cfg.name = stem.to_string();
            }
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.tmin.is_finite() && self.tmax.is_finite(), "time range must be finite");
        ensure!(self.tmax > self.tmin, "tmax ({}) must exceed tmin ({})", self.tmax, self.tmin);
        ensure!(self.steps >= 2, "steps must be at least 2, got {}", self.steps);
        ensure!(self.cutoff_width > 0.0, "cutoff-width must be positive");
        ensure!(!self.name.is_empty() && !self.name.contains(['/', '\\']), "invalid run name '{}'", self.name);
        self.engine()?;
        self.field()?;
        self.atomic()?;
        Ok(())
    }

    pub fn engine(&self) -> Result<EngineKind> {
        Ok(self.engine.parse()?)
    }

    pub fn field(&self) -> Result<FieldSpec64> {
        let first = CoherentSpec::new(self.nbar, self.phase)?;
        Ok(match self.model {
            Model::OneMode => FieldSpec64::OneMode(first),
            Model::TwoMode => FieldSpec64::TwoMode(first, CoherentSpec::new(self.nbar2, self.phase2)?),
        })
    }

    pub fn is_custom(&self) -> bool {
        self.state.eq_ignore_ascii_case("custom")
    }

    /// Preset states use the field phase (sum of phases for two modes) as `θ`.
    pub fn atomic(&self) -> Result<AtomicState64> {
        if self.is_custom() {
            let a = parse_amplitude("alpha", &self.alpha)?;
            let b = parse_amplitude("beta", &self.beta)?;
            let c = parse_amplitude("gamma", &self.gamma)?;
            let d = parse_amplitude("delta", &self.delta)?;
            return AtomicState64::normalized(a, b, c, d).context("custom atomic state");
        }
        if [&self.alpha, &self.beta, &self.gamma, &self.delta].iter().any(|v| v.is_some()) {
            bail!("alpha..delta are only used with state = \"custom\"");
        }
        let preset: AtomicPreset = self.state.parse()?;
        Ok(preset_atomic_state(preset, self.field()?.theta()))
    }

    /// Grid step in `gt`.
    pub fn step(&self) -> f64 {
        (self.tmax - self.tmin) / (self.steps - 1) as f64
    }
}

/// Command-line overrides; `None` keeps the base value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub name: Option<String>,
    pub model: Option<Model>,
    pub state: Option<String>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub gamma: Option<String>,
    pub delta: Option<String>,
    pub nbar: Option<f64>,
    pub nbar2: Option<f64>,
    pub phase: Option<f64>,
    pub phase2: Option<f64>,
    pub tmin: Option<f64>,
    pub tmax: Option<f64>,
    pub steps: Option<usize>,
    pub cutoff_width: Option<f64>,
    pub engine: Option<String>,
    pub no_plot: bool,
    pub plot_offset: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ScenarioConfig) {
        macro_rules! set {
            ($($f:ident),*) => {$(
                if let Some(v) = &self.$f {
                    cfg.$f = v.clone();
                }
            )*};
        }
        set!(name, model, state, nbar, nbar2, phase, phase2, tmin, tmax, steps, cutoff_width, engine, plot_offset);
        let amps = [&self.alpha, &self.beta, &self.gamma, &self.delta];
        if amps.iter().any(|v| v.is_some()) {
            // explicit amplitudes imply a custom state
            cfg.state = "custom".into();
            cfg.alpha = self.alpha.clone();
            cfg.beta = self.beta.clone();
            cfg.gamma = self.gamma.clone();
            cfg.delta = self.delta.clone();
        } else if self.state.is_some() {
            cfg.alpha = None;
            cfg.beta = None;
            cfg.gamma = None;
            cfg.delta = None;
        }
        if self.nbar2.is_some() && self.model.is_none() {
            cfg.model = Model::TwoMode;
        }
        if self.no_plot {
            cfg.plot = false;
        }
    }
}
