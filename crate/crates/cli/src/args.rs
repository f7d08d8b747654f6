//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::grid::Grid;

#[derive(Debug, Parser)]
#[command(
    name = "heston-fpt",
    version,
    about = "Survival and hitting probabilities for the first-passage problem of the Heston model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Exact survival S(z, v, tau) by Fourier-sine inversion.
    Exact,
    /// Exact survival averaged over the stationary variance law.
    Averaged,
    /// A closed-form approximation selected with --method.
    Approx,
    /// Monte Carlo survival estimate from simulated paths.
    Simulate,
    /// Crossing level l_c of the small- and large-beta hitting probabilities.
    CrossingLevel,
    /// Ratio of the averaged hitting probability to the Wiener one.
    Ratio,
    /// Several methods evaluated on one grid.
    Sweep,
    /// Plot-ready data for one of the reference figures.
    Figure {
        #[arg(value_enum)]
        name: FigureName,
    },
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Exact => "exact",
            Command::Averaged => "averaged",
            Command::Approx => "approx",
            Command::Simulate => "simulate",
            Command::CrossingLevel => "crossing-level",
            Command::Ratio => "ratio",
            Command::Sweep => "sweep",
            Command::Figure { .. } => "figure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureName {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig9b,
    Fig10,
}

impl FigureName {
    pub fn as_str(&self) -> &'static str {
        match self {
            FigureName::Fig1 => "fig1",
            FigureName::Fig2 => "fig2",
            FigureName::Fig3 => "fig3",
            FigureName::Fig4 => "fig4",
            FigureName::Fig5 => "fig5",
            FigureName::Fig6 => "fig6",
            FigureName::Fig7 => "fig7",
            FigureName::Fig8 => "fig8",
            FigureName::Fig9 => "fig9",
            FigureName::Fig9b => "fig9b",
            FigureName::Fig10 => "fig10",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Options shared by every subcommand. Grids accept a scalar, a comma list,
/// or `start:stop:count` for a log-spaced grid.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Mean-reversion rate alpha (1/day).
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Normal level m^2 of the variance (1/day).
    #[arg(long, global = true)]
    pub m2: Option<f64>,
    /// Vol-of-vol k (1/day).
    #[arg(long, global = true)]
    pub k: Option<f64>,
    /// Dimensionless normal level theta = m^2 / alpha.
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// Dimensionless vol-of-vol beta = k / alpha (a grid for crossing-level).
    #[arg(long, global = true)]
    pub beta: Option<Grid>,
    /// Distance to the barrier.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z: Option<Grid>,
    /// Initial variance (dimensionless); defaults to theta.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub v: Option<Grid>,
    /// Dimensionless time alpha * t.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tau: Option<Grid>,
    /// theta * tau for crossing-level.
    #[arg(long = "theta-tau", global = true)]
    pub theta_tau: Option<Grid>,
    /// Formula tag (approx: one tag; sweep: comma list).
    #[arg(long, global = true)]
    pub method: Option<String>,
    /// Use the beta-scaled phenomenological form.
    #[arg(long = "beta-factor", global = true)]
    pub beta_factor: bool,
    /// Number of simulated paths.
    #[arg(long, global = true)]
    pub paths: Option<usize>,
    /// Simulation time step.
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Master seed of the simulation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for the simulation.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Turn off the Brownian-bridge crossing correction.
    #[arg(long = "no-bridge", global = true)]
    pub no_bridge: bool,
    /// Draw the initial variance from the stationary law (simulate).
    #[arg(long, global = true)]
    pub stationary: bool,
    /// Absolute quadrature tolerance.
    #[arg(long = "abs-tol", global = true)]
    pub abs_tol: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long = "rel-tol", global = true)]
    pub rel_tol: Option<f64>,
    /// Panel budget of the oscillatory quadrature.
    #[arg(long = "max-panels", global = true)]
    pub max_panels: Option<usize>,
    /// Residual tolerance of the crossing-level solver.
    #[arg(long = "crossing-tol", global = true)]
    pub crossing_tol: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Flat key=value file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}
