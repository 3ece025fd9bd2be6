//! Predicted revival periods and disentanglement times for a configuration.

use std::fmt::Write;

use anyhow::Result;
use jcm_core::predictors::{PredictedTime, RevivalPrediction, Series};
use jcm_core::{
    classify_initial_state, disentanglement_times, revival_periods_one_mode, revival_periods_two_mode,
    DisentanglementClass, ModelKind, StateClass,
};

use crate::config::{Model, ScenarioConfig};

#[derive(Debug, Clone)]
pub struct Prediction {
    pub model: Model,
    pub class: StateClass,
    pub revivals: Vec<RevivalPrediction<f64>>,
    /// Times for the series that applies to the state class, inside the configured range.
    pub times: Vec<PredictedTime<f64>>,
    /// `t3` times listed alongside the A/B series of the one-mode model.
    pub extra: Vec<PredictedTime<f64>>,
}

const REVIVAL_ORDERS: u32 = 3;

fn times_in_range(class: DisentanglementClass, nbar: f64, cfg: &ScenarioConfig) -> Result<Vec<PredictedTime<f64>>> {
    let step = match class {
        DisentanglementClass::AB => std::f64::consts::FRAC_PI_4,
        DisentanglementClass::Generic => std::f64::consts::PI,
        DisentanglementClass::TwoModeAB => std::f64::consts::FRAC_PI_2,
    };
    let count = (cfg.tmax / step + 1e-9).floor().max(0.0) as usize;
    let p = disentanglement_times(class, Some(nbar), count)?;
    Ok(p.times.into_iter().filter(|t| t.gt >= cfg.tmin - 1e-12).collect())
}

pub fn predict(cfg: &ScenarioConfig) -> Result<Prediction> {
    let field = cfg.field()?;
    let atomic = cfg.atomic()?;
    let class = classify_initial_state(&atomic, field.theta());
    let kind = cfg.model.kind();
    let revivals = (1..=REVIVAL_ORDERS)
        .map(|k| match kind {
            ModelKind::OneMode => revival_periods_one_mode(cfg.nbar, k),
            ModelKind::TwoMode => revival_periods_two_mode(cfg.nbar, cfg.nbar2, k),
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let times = match class.series_class(kind) {
        Some(c) => times_in_range(c, cfg.nbar, cfg)?,
        None => Vec::new(),
    };
    let extra = if class.series_class(kind) == Some(DisentanglementClass::AB) {
        times_in_range(DisentanglementClass::Generic, cfg.nbar, cfg)?
    } else {
        Vec::new()
    };
    Ok(Prediction { model: cfg.model, class, revivals, times, extra })
}

impl Prediction {
    /// Asymptotic times of the applicable series, for plot markers.
    pub fn markers(&self) -> Vec<f64> {
        self.times.iter().map(|t| t.gt).collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let model = match self.model {
            Model::OneMode => "one-mode",
            Model::TwoMode => "two-mode",
        };
        let _ = writeln!(out, "model: {model}");
        let _ = writeln!(out, "initial-state class: {}", self.class.label());
        let _ = writeln!(out);
        let _ = writeln!(out, "revival periods (gt)");
        let _ = writeln!(out, "{:>3}  {:>25}  {:>14}  {:>25}  {:>14}", "k", "T1R exact", "T1R asympt", "T2R exact", "T2R asympt");
        let interval = |v: Option<(f64, f64)>| match v {
            Some((a, b)) if (a - b).abs() < 1e-12 => format!("{a:.10}"),
            Some((a, b)) => format!("[{a:.8}, {b:.8}]"),
            None => "-".to_string(),
        };
        for r in &self.revivals {
            let _ = writeln!(
                out,
                "{:>3}  {:>25}  {:>14.10}  {:>25}  {:>14.10}",
                r.index,
                interval(r.exact_t1r),
                r.asymptotic_t1r,
                interval(r.exact_t2r),
                r.asymptotic_t2r
            );
        }
        if self.revivals.iter().any(|r| r.caveat) {
            let _ = writeln!(out, "note: two-mode revivals do not always appear at the predicted times");
        }
        let _ = writeln!(out);
        if self.times.is_empty() {
            let reason = match self.class {
                StateClass::Eigenstate(_) | StateClass::EigenstateDark => "initial state is an eigenstate",
                _ => "no prediction for this state in the two-mode model",
            };
            let _ = writeln!(out, "disentanglement times: none ({reason})");
            return out;
        }
        let _ = writeln!(out, "disentanglement times (gt)");
        let _ = writeln!(out, "{:>6}  {:>5}  {:>14}  {:>14}", "series", "index", "asymptotic", "exact T1R");
        for t in self.times.iter().chain(&self.extra) {
            let exact = t.gt_exact.map_or("-".to_string(), |v| format!("{v:.10}"));
            let _ = writeln!(out, "{:>6}  {:>5}  {:>14.10}  {:>14}", t.series.to_string(), t.index, t.gt, exact);
        }
        if !self.extra.is_empty() {
            let _ = writeln!(out, "note: {} rows are listed for comparison; the A/B series is t1 and t2", Series::T3);
        }
        out
    }
}
