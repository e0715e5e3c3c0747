#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "elephant-abm", version = elephant_abm::VERSION, about = "Elephant movement and crop-raid simulator")]
pub struct Cli {
    /// Worker threads for replicate batches (all cores when absent).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
pub struct ConfigArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a configuration value, e.g. `--set run.replicates=8`.
    #[arg(long = "set", value_name = "PATH=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch of replicates and write trajectories, events and a summary.
    Simulate {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit movement models and tune model parameters.
    #[command(subcommand)]
    Calibrate(Calibrate),
    /// Home-range, displacement, clustering, raid and convergence analyses.
    #[command(subcommand)]
    Analyze(Analyze),
}

#[derive(Subcommand)]
enum Calibrate {
    /// Fit two-state movement models to a relocation track.
    Hmm {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        track: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multi-objective search; ABM mode needs `--track` for the targets.
    Ga {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum)]
        problem: Option<Problem>,
        #[arg(long)]
        track: Option<PathBuf>,
        #[arg(long)]
        generations: Option<usize>,
        #[arg(long)]
        pop: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep slope tolerances and pick the largest that keeps steep ticks rare.
    Slope {
        #[command(flatten)]
        config: ConfigArgs,
        /// Comma-separated tolerances in metres.
        #[arg(long, value_delimiter = ',')]
        tolerances: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Problem {
    /// Two quadratics with the front on x in [0, 2].
    Schaffer,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Mcp,
    Diel,
    Net,
    Kl,
}

#[derive(Subcommand)]
enum Analyze {
    /// Minimum convex polygon area in km².
    Mcp {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kernel density home range areas.
    Kde {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        points: PathBuf,
        #[arg(long, value_delimiter = ',')]
        levels: Vec<f64>,
        /// Also write the density surface as an ASCII grid.
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Daily diel and net displacement of a regularly sampled trajectory.
    Displacement {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Density clusters of conflict locations.
    Dbscan {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        min_pts: Option<usize>,
        /// Keep only rows with this value in the `kind` column.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Raid, re-entry and intake statistics of a simulation directory.
    Raids {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        runs: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replicate-count convergence of a batch output.
    Converge {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        runs: PathBuf,
        #[arg(long, value_enum)]
        metric: Metric,
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), error::CliError> {
    let threads = cli.threads;
    match cli.command {
        Command::Simulate { config, out } => commands::simulate(&config, &out, threads),
        Command::Calibrate(c) => match c {
            Calibrate::Hmm { config, track, out } => commands::calibrate_hmm(&config, &track, out.as_deref()),
            Calibrate::Ga {
                config,
                problem,
                track,
                generations,
                pop,
                seed,
                out,
            } => commands::calibrate_ga(
                &config,
                commands::GaArgs {
                    problem,
                    track,
                    generations,
                    pop,
                    seed,
                },
                out.as_deref(),
            ),
            Calibrate::Slope {
                config,
                tolerances,
                out,
            } => commands::calibrate_slope(&config, &tolerances, out.as_deref(), threads),
        },
        Command::Analyze(a) => match a {
            Analyze::Mcp { points, out } => commands::analyze_mcp(&points, out.as_deref()),
            Analyze::Kde {
                config,
                points,
                levels,
                grid,
                out,
            } => commands::analyze_kde(&config, &points, &levels, grid.as_deref(), out.as_deref()),
            Analyze::Displacement { config, points, out } => {
                commands::analyze_displacement(&config, &points, out.as_deref())
            }
            Analyze::Dbscan {
                config,
                points,
                eps,
                min_pts,
                kind,
                out,
            } => commands::analyze_dbscan(&config, &points, eps, min_pts, kind.as_deref(), out.as_deref()),
            Analyze::Raids { config, runs, out } => commands::analyze_raids(&config, &runs, out.as_deref()),
            Analyze::Converge {
                config,
                runs,
                metric,
                eps,
                out,
            } => commands::analyze_converge(&config, &runs, metric, &eps, out.as_deref()),
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
