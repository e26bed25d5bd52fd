//! Command-line front end: scenario files, figure recipes, and result
//! output for the `pbcov` binary.

pub mod config;
pub mod error;
pub mod output;
pub mod quantity;
pub mod recipes;
pub mod runner;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pbcov_core::{SimConfig, SimMode};

pub use config::Scenario;
pub use error::CliError;
pub use output::Format;
pub use recipes::figure_recipe;
pub use runner::{run, Plan, ResultRow};

#[derive(Debug, Parser)]
#[command(
    name = "pbcov",
    version,
    about = "Coverage of power-beacon-assisted mmWave ad hoc networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a scenario with the analytic engine.
    Analyze {
        config: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Estimate a scenario's coverage by Monte Carlo simulation.
    Simulate {
        config: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Regenerate a built-in figure (fig2 to fig8). Simulation rows are
    /// added when --trials, --seed or --mode is given.
    Reproduce {
        figure: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run both engines on a scenario and report their differences.
    Validate {
        config: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Faithful,
    Matched,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// Monte Carlo trials per point.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Base seed of the simulation.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Simulation mode.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Write results here instead of stdout, with timings in a
    /// `.meta.json` file alongside.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

impl Opts {
    fn touches_sim(&self) -> bool {
        self.trials.is_some() || self.seed.is_some() || self.mode.is_some()
    }

    /// The scenario's simulation settings (or defaults) with flag overrides.
    fn sim_config(&self, sc: &Scenario) -> SimConfig {
        let mut sim = sc.sim.clone().unwrap_or_default();
        if let Some(t) = self.trials {
            sim.trials = t;
        }
        if let Some(s) = self.seed {
            sim.seed = s;
        }
        if let Some(m) = self.mode {
            sim.mode = match m {
                ModeArg::Faithful => SimMode::Faithful,
                ModeArg::Matched => SimMode::AssumptionMatched,
            };
        }
        sim
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    Scenario::from_toml_str(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Run one command to completion.
pub fn execute(command: &Command) -> Result<(), CliError> {
    let started = output::unix_now();
    let (mut sc, plan, opts) = match command {
        Command::Analyze { config, opts } => {
            if opts.touches_sim() {
                log::warn!("analyze ignores --trials, --seed and --mode");
            }
            let sc = load_scenario(config)?;
            (
                sc,
                Plan {
                    analytic: true,
                    ..Plan::default()
                },
                opts,
            )
        }
        Command::Simulate { config, opts } => {
            let sc = load_scenario(config)?;
            let sim = opts.sim_config(&sc);
            (
                sc,
                Plan {
                    sim: Some(sim),
                    ..Plan::default()
                },
                opts,
            )
        }
        Command::Reproduce { figure, opts } => {
            let sc = figure_recipe(figure)?;
            let sim = opts.touches_sim().then(|| opts.sim_config(&sc));
            (
                sc,
                Plan {
                    analytic: true,
                    sim,
                    deltas: false,
                },
                opts,
            )
        }
        Command::Validate { config, opts } => {
            let sc = load_scenario(config)?;
            let sim = opts.sim_config(&sc);
            (
                sc,
                Plan {
                    analytic: true,
                    sim: Some(sim),
                    deltas: true,
                },
                opts,
            )
        }
    };
    if let Some(sim) = &plan.sim {
        sc.sim = Some(sim.clone());
    }
    let rows = run(&sc, &plan)?;
    match &opts.out {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
            output::write_rows(&sc, &rows, opts.format, std::io::BufWriter::new(file))?;
            output::write_sidecar(path, started, &rows)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            output::write_rows(&sc, &rows, opts.format, &mut lock)?;
            lock.flush().map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(())
}
