//! Named scenarios.

use crate::config::{Model, ScenarioConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Entropy time series written to disk.
    Figure,
    /// Prints the predicted revival and disentanglement times only.
    Predict,
    /// Runs the engine cross-checks.
    Oracle,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub kind: ScenarioKind,
    pub description: &'static str,
    pub config: ScenarioConfig,
}

fn one_mode(name: &str, state: &str, nbar: f64) -> ScenarioConfig {
    ScenarioConfig { name: name.into(), model: Model::OneMode, state: state.into(), nbar, ..Default::default() }
}

fn two_mode(name: &str, state: &str, nbar: f64, nbar2: f64) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        model: Model::TwoMode,
        state: state.into(),
        nbar,
        nbar2,
        ..Default::default()
    }
}

pub fn registry() -> Vec<Scenario> {
    use ScenarioKind::*;
    let s = |name, kind, description, config| Scenario { name, kind, description, config };
    vec![
        s("fig1a", Figure, "one mode, A state, nbar = 30", one_mode("fig1a", "A", 30.0)),
        s("fig1b", Figure, "one mode, |+,+>, nbar = 30", one_mode("fig1b", "PP", 30.0)),
        s("fig2a", Figure, "two modes, A state, nbar1 = nbar2 = 50", two_mode("fig2a", "A", 50.0, 50.0)),
        s("fig2b", Figure, "two modes, A state, nbar1 = 50, nbar2 = 150", two_mode("fig2b", "A", 50.0, 150.0)),
        s("fig3a", Figure, "two modes, Phi3, nbar1 = nbar2 = 50", two_mode("fig3a", "Phi3", 50.0, 50.0)),
        s("fig3b", Figure, "two modes, |+,+>, nbar1 = nbar2 = 50", two_mode("fig3b", "PP", 50.0, 50.0)),
        s("predict-one-mode", Predict, "predicted times, one mode, A state, nbar = 30", one_mode("predict-one-mode", "A", 30.0)),
        s("predict-two-mode", Predict, "predicted times, two modes, A state, nbar1 = nbar2 = 50", two_mode("predict-two-mode", "A", 50.0, 50.0)),
        s("oracle", Oracle, "block-exact vs dense and closed-form vs block-exact on small cutoffs", ScenarioConfig { name: "oracle".into(), ..Default::default() }),
    ]
}

pub fn find(name: &str) -> Option<Scenario> {
    registry().into_iter().find(|s| s.name.eq_ignore_ascii_case(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_figures_plus_utilities() {
        let reg = registry();
        let figs: Vec<_> = reg.iter().filter(|s| s.kind == ScenarioKind::Figure).map(|s| s.name).collect();
        assert_eq!(figs, ["fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b"]);
        assert!(reg.iter().any(|s| s.kind == ScenarioKind::Predict));
        assert!(reg.iter().any(|s| s.kind == ScenarioKind::Oracle));
        for s in &reg {
            s.config.validate().unwrap();
        }
    }

    #[test]
    fn figure_parameters() {
        let f = find("fig1a").unwrap().config;
        assert_eq!((f.state.as_str(), f.nbar, f.phase, f.tmin), ("A", 30.0, 0.0, 0.0));
        assert!((f.tmax - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(find("fig3a").unwrap().config.state, "Phi3");
        assert_eq!(find("fig3b").unwrap().config.state, "PP");
        let b = find("fig2b").unwrap().config;
        assert_eq!((b.model, b.nbar, b.nbar2), (Model::TwoMode, 50.0, 150.0));
    }
}
