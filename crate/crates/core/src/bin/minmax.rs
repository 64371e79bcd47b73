//! Command-line front end. Exit codes: 0 ok, 1 I/O, 2 parse or validation
//! failure, 3 uncontrollable MDP, 4 enumeration cap exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use minmax_penalty::analysis::{
    minmax_penalty_with, AnalysisOptions, ControllabilityVariant, DEFAULT_POLICY_CAP,
};
use minmax_penalty::envs::{build_gridworld, GridLayout, GridSpec};
use minmax_penalty::experiment::{
    chainwalk_penalty_study, chainwalk_to_toml, emit_analysis, emit_chainwalk, emit_sweep,
    run_grid_sweep, sweep_to_toml, write_chainwalk_csv, write_sweep_csv, OutputFormat, SweepConfig,
    SweepKind, DEFAULT_SWEEP_SLIP,
};
use minmax_penalty::format::read_mdp;
use minmax_penalty::learner::{train, write_episode_csv, LearnerConfig, UnsafeReward};
use minmax_penalty::{AnalysisError, ExperimentError};

#[derive(Parser)]
#[command(
    name = "minmax",
    version,
    about = "Minmax-penalty analysis and experiments for tabular SSP MDPs"
)]
struct Cli {
    /// Directory for result files; results only go to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "csv")]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Controllability, diameter and Minmax penalty of an MDP file.
    Analyze {
        #[arg(long)]
        mdp: PathBuf,
        #[arg(long, default_value_t = DEFAULT_POLICY_CAP)]
        policy_cap: u128,
        #[arg(long, default_value = "pairs-max")]
        controllability_variant: ControllabilityVariant,
    },
    /// Value-iteration failure probabilities on the chain walk.
    Chainwalk {
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        penalty: Vec<f64>,
    },
    /// Gridworld penalty or slip sweep over many seeds.
    Sweep {
        #[arg(long)]
        kind: SweepKind,
        /// Map file; the built-in 5x5 layout when omitted.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        settings: Vec<f64>,
        #[arg(long, default_value_t = 70)]
        seeds: usize,
        /// Base seed; run k uses seed + k.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Slip probability for penalty sweeps.
        #[arg(long, default_value_t = DEFAULT_SWEEP_SLIP)]
        slip: f64,
        #[command(flatten)]
        learner: LearnerArgs,
    },
    /// One training run; writes the per-episode log.
    Train {
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SWEEP_SLIP)]
        slip: f64,
        /// Fixed lava reward; the learned estimate when omitted.
        #[arg(long, allow_hyphen_values = true)]
        penalty: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        learner: LearnerArgs,
    },
}

#[derive(Args)]
struct LearnerArgs {
    /// TOML learner config; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    episodes: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    step_cap: Option<usize>,
}

impl LearnerArgs {
    fn resolve(&self) -> Result<LearnerConfig, ExperimentError> {
        let mut cfg = match &self.config {
            Some(path) => LearnerConfig::from_toml(&read(path)?)?,
            None => LearnerConfig::default(),
        };
        if let Some(v) = self.episodes {
            cfg.episodes = v;
        }
        if let Some(v) = self.epsilon {
            cfg.epsilon = v;
        }
        if let Some(v) = self.alpha {
            cfg.alpha = v;
        }
        if let Some(v) = self.step_cap {
            cfg.step_cap = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn read(path: &Path) -> Result<String, ExperimentError> {
    std::fs::read_to_string(path).map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn layout(map: Option<&Path>) -> Result<GridLayout, ExperimentError> {
    match map {
        Some(path) => Ok(GridLayout::parse(&read(path)?)?),
        None => Ok(GridLayout::default()),
    }
}

fn exit_code(err: &ExperimentError) -> u8 {
    match err {
        ExperimentError::Analysis(AnalysisError::Uncontrollable { .. }) => 3,
        ExperimentError::Analysis(AnalysisError::CapExceeded { .. }) => 4,
        ExperimentError::Io { .. } | ExperimentError::Csv { .. } => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<(), ExperimentError> {
    match cli.command {
        Command::Analyze {
            mdp,
            policy_cap,
            controllability_variant,
        } => {
            let mdp = read_mdp(&read(&mdp)?)?;
            let opts = AnalysisOptions {
                policy_cap,
                variant: controllability_variant,
            };
            let report = minmax_penalty_with(&mdp, opts)?.report();
            print!("{}", report.to_toml());
            if let Some(dir) = &cli.out {
                emit_analysis(&report, dir)?;
            }
        }
        Command::Chainwalk { p, penalty } => {
            let study = chainwalk_penalty_study(&p, &penalty)?;
            match cli.format {
                OutputFormat::Csv => write_chainwalk_csv(&study, std::io::stdout().lock())
                    .map_err(|e| csv_error(Path::new(STDOUT), e))?,
                OutputFormat::Toml => print!("{}", chainwalk_to_toml(&study)),
            }
            if let Some(dir) = &cli.out {
                emit_chainwalk(&study, dir, cli.format)?;
            }
        }
        Command::Sweep {
            kind,
            map,
            settings,
            seeds,
            seed,
            slip,
            learner,
        } => {
            let mut cfg = SweepConfig::new(kind, layout(map.as_deref())?, settings);
            cfg.seeds = seeds;
            cfg.base_seed = seed;
            cfg.slip = slip;
            cfg.learner = learner.resolve()?;
            let result = run_grid_sweep(&cfg)?;
            match cli.format {
                OutputFormat::Csv => write_sweep_csv(&result, std::io::stdout().lock())
                    .map_err(|e| csv_error(Path::new(STDOUT), e))?,
                OutputFormat::Toml => print!("{}", sweep_to_toml(&result)),
            }
            if let Some(dir) = &cli.out {
                emit_sweep(&result, dir, cli.format)?;
            }
        }
        Command::Train {
            map,
            slip,
            penalty,
            seed,
            learner,
        } => {
            let mdp = build_gridworld(&GridSpec::new(layout(map.as_deref())?, slip))?;
            let cfg = learner.resolve()?.with_seed(seed);
            let mode = penalty.map_or(UnsafeReward::Learned, UnsafeReward::Fixed);
            let run = train(&mdp, &cfg, mode, |_| {})?;
            eprintln!(
                "failure rate {:.4}, final penalty {}, steps to convergence {:?}",
                run.converged_failure_rate,
                run.final_penalty(),
                run.steps_to_convergence
            );
            let path = match &cli.out {
                Some(dir) => {
                    std::fs::create_dir_all(dir).map_err(|source| ExperimentError::Io {
                        path: dir.clone(),
                        source,
                    })?;
                    dir.join("episodes.csv")
                }
                None => PathBuf::from(STDOUT),
            };
            let written = match &cli.out {
                Some(_) => std::fs::File::create(&path)
                    .map_err(|source| ExperimentError::Io {
                        path: path.clone(),
                        source,
                    })
                    .and_then(|f| {
                        write_episode_csv(&run.logs, f).map_err(|source| csv_error(&path, source))
                    }),
                None => write_episode_csv(&run.logs, std::io::stdout().lock())
                    .map_err(|source| csv_error(&path, source)),
            };
            written?;
        }
    }
    Ok(())
}

const STDOUT: &str = "<stdout>";

fn csv_error(path: &Path, source: csv::Error) -> ExperimentError {
    ExperimentError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
