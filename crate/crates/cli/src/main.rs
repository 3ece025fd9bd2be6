use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use jcm_cli::scenarios::ScenarioKind;
use jcm_cli::verify::run_oracle_suite;
use jcm_cli::{find, predict::predict, registry, run_scenario, Model, Overrides, ScenarioConfig, OUT_DIR_ENV};

#[derive(Parser)]
#[command(name = "jcm", version, about = "Two-atom Jaynes-Cummings entropy dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named scenario or a TOML config file.
    Run {
        /// Scenario name (see `list`) or path to a config file.
        target: String,
        #[command(flatten)]
        params: Params,
        /// Output directory.
        #[arg(long, env = OUT_DIR_ENV, default_value = "out")]
        out: PathBuf,
    },
    /// List the registered scenarios.
    List,
    /// Print predicted revival periods and disentanglement times.
    Predict {
        /// Scenario name or config file; defaults to a one-mode A state.
        target: Option<String>,
        #[command(flatten)]
        params: Params,
    },
    /// Cross-check the propagation engines on small cutoffs.
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        states: usize,
        #[arg(long, default_value_t = 20)]
        times: usize,
    },
}

#[derive(Args)]
struct Params {
    #[arg(long)]
    name: Option<String>,
    /// one-mode or two-mode.
    #[arg(long, value_parser = parse_model)]
    model: Option<Model>,
    /// Atomic preset (phi1..phi4, A, B, PP, PM, MP, MM) or "custom".
    #[arg(long)]
    state: Option<String>,
    /// Complex amplitude of |+,+>, e.g. 0.5 or 0.5+0.5i.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    #[arg(long)]
    nbar: Option<f64>,
    /// Mean photon number of the second mode; selects the two-mode model.
    #[arg(long)]
    nbar2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phase: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phase2: Option<f64>,
    #[arg(long)]
    tmin: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    cutoff_width: Option<f64>,
    /// block-exact, closed-form or dense-oracle.
    #[arg(long)]
    engine: Option<String>,
    #[arg(long)]
    no_plot: bool,
    #[arg(long)]
    plot_offset: Option<f64>,
}

fn parse_model(s: &str) -> Result<Model, String> {
    match s.to_ascii_lowercase().as_str() {
        "one-mode" | "one" | "1" => Ok(Model::OneMode),
        "two-mode" | "two" | "2" => Ok(Model::TwoMode),
        _ => Err(format!("unknown model '{s}' (one-mode, two-mode)")),
    }
}

impl Params {
    fn overrides(self) -> Overrides {
        Overrides {
            name: self.name,
            model: self.model,
            state: self.state,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            delta: self.delta,
            nbar: self.nbar,
            nbar2: self.nbar2,
            phase: self.phase,
            phase2: self.phase2,
            tmin: self.tmin,
            tmax: self.tmax,
            steps: self.steps,
            cutoff_width: self.cutoff_width,
            engine: self.engine,
            no_plot: self.no_plot,
            plot_offset: self.plot_offset,
        }
    }
}

enum Target {
    Config(ScenarioConfig),
    Oracle,
}

fn resolve(target: &str) -> Result<Target> {
    let path = Path::new(target);
    if path.is_file() || target.ends_with(".toml") {
        return Ok(Target::Config(ScenarioConfig::from_file(path)?));
    }
    match find(target) {
        Some(s) if s.kind == ScenarioKind::Oracle => Ok(Target::Oracle),
        Some(s) => Ok(Target::Config(s.config)),
        None => bail!("unknown scenario '{target}' (see `jcm list`)"),
    }
}

fn verify(seed: u64, states: usize, times: usize) -> Result<bool> {
    let checks = run_oracle_suite(seed, states, times)?;
    for c in &checks {
        let tag = if c.passed() { "ok" } else { "FAILED" };
        println!("{tag:>6}  {}: max deviation {:.3e} (tolerance {:.0e})", c.name, c.max_deviation, c.tolerance);
    }
    Ok(checks.iter().all(|c| c.passed()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<bool> {
    match Cli::parse().command {
        Command::List => {
            for s in registry() {
                let kind = match s.kind {
                    ScenarioKind::Figure => "run",
                    ScenarioKind::Predict => "predict",
                    ScenarioKind::Oracle => "verify",
                };
                println!("{:<18} {:<8} {}", s.name, kind, s.description);
            }
            Ok(true)
        }
        Command::Verify { seed, states, times } => verify(seed, states, times),
        Command::Predict { target, params } => {
            let mut cfg = match target.as_deref().map(resolve).transpose()? {
                Some(Target::Config(c)) => c,
                Some(Target::Oracle) => bail!("'oracle' is not a predictable scenario"),
                None => ScenarioConfig::default(),
            };
            params.overrides().apply(&mut cfg);
            cfg.validate()?;
            print!("{}", predict(&cfg)?.render());
            Ok(true)
        }
        Command::Run { target, params, out } => {
            let mut cfg = match resolve(&target)? {
                Target::Oracle => return verify(7, 20, 20),
                Target::Config(c) => c,
            };
            if find(&target).is_some_and(|s| s.kind == ScenarioKind::Predict) {
                params.overrides().apply(&mut cfg);
                print!("{}", predict(&cfg)?.render());
                return Ok(true);
            }
            params.overrides().apply(&mut cfg);
            let report = run_scenario(&cfg, &out)?;
            let m = &report.manifest;
            println!(
                "{}: {} rows, cutoffs {:?}, retained mass {:.9}, {:.2}s",
                cfg.name, m.rows, m.cutoffs, m.truncation_mass, m.wall_clock_seconds
            );
            println!("  data      {}", report.data_path.display());
            println!("  manifest  {}", report.manifest_path.display());
            if let Some(p) = &report.plot_path {
                println!("  plot      {}", p.display());
            }
            Ok(true)
        }
    }
}
