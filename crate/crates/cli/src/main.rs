//! `mylar`: geometry tables, trajectories, action variables, verification
//! sweeps and radius quantization for the gyroscope on the Mylar balloon.

mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Format, PotentialKind, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numeric(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid configuration: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<mylar_core::Error> for CliError {
    fn from(e: mylar_core::Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mylar", version, about = "Infinitesimal gyroscope on the Mylar balloon")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the embedding (u, v, x, y, z, K) over a coordinate grid.
    #[command(after_help = "Example:\n  mylar geometry --r 1 --u-min -2 --u-max 2 --nu 41 --nv 24 --out mesh.csv")]
    Geometry {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GeometryArgs,
    },
    /// Integrate Hamilton's equations and write the trajectory.
    #[command(after_help = "Example:\n  mylar simulate --potential harmonic --kappa 1 --energy 1.6 --l 0.7 --s 0.4 --t-end 50 --out traj.csv")]
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        run: SimulateArgs,
    },
    /// Action variables at one (E, l, s): quadrature, closed form and region.
    #[command(after_help = "Example:\n  mylar actions --energy 1 --l 1 --s 0")]
    Actions {
        #[command(flatten)]
        common: Common,
        /// Point inside the intended well when the radicand has several.
        #[arg(long)]
        seed: Option<f64>,
    },
    /// Compare quadrature and closed-form J_u over an (E, l, s) grid.
    #[command(after_help = "Example:\n  mylar sweep --e-min 1 --e-max 5.5 --e-count 10 --l 0.8 --s 0.3 --out sweep.csv")]
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: SweepArgs,
    },
    /// Balloon radius r = sqrt(2N/pi) for a positive integer N.
    #[command(after_help = "Example:\n  mylar quantize --n 3")]
    Quantize {
        #[command(flatten)]
        common: Common,
        /// Quantum number N >= 1.
        #[arg(long)]
        n: Option<u64>,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Balloon radius.
    #[arg(long = "r")]
    r: Option<f64>,
    /// Point mass.
    #[arg(long = "m")]
    m: Option<f64>,
    /// Moment of inertia of the rotator.
    #[arg(long)]
    inertia: Option<f64>,
    /// Potential model.
    #[arg(long, value_enum)]
    potential: Option<PotentialKind>,
    /// Harmonic stiffness.
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<f64>,
    /// Anharmonic x^4 coefficient.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Anharmonic x^3 coefficient.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// Anharmonic x^2 coefficient.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// Anharmonic x coefficient.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    /// Total energy E.
    #[arg(long, allow_hyphen_values = true)]
    energy: Option<f64>,
    /// Conserved momentum p_v.
    #[arg(long = "l", allow_hyphen_values = true)]
    l: Option<f64>,
    /// Conserved momentum p_psi.
    #[arg(long = "s", allow_hyphen_values = true)]
    s: Option<f64>,
    /// Output file (standard output when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GeometryArgs {
    #[arg(long, allow_hyphen_values = true)]
    u_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    u_max: Option<f64>,
    /// Nodes along u.
    #[arg(long)]
    nu: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    v_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    v_max: Option<f64>,
    /// Nodes along v.
    #[arg(long)]
    nv: Option<usize>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Integration time.
    #[arg(long)]
    t_end: Option<f64>,
    /// Initial u.
    #[arg(long, allow_hyphen_values = true)]
    u0: Option<f64>,
    /// Initial p_u; when absent it follows from --energy.
    #[arg(long, allow_hyphen_values = true)]
    pu0: Option<f64>,
    /// Relative step tolerance.
    #[arg(long)]
    rtol: Option<f64>,
    /// Absolute step tolerance.
    #[arg(long)]
    atol: Option<f64>,
    /// Keep every n-th accepted step.
    #[arg(long)]
    record_every: Option<usize>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    e_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    e_max: Option<f64>,
    #[arg(long)]
    e_count: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    l_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    l_max: Option<f64>,
    #[arg(long)]
    l_count: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    s_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    s_max: Option<f64>,
    #[arg(long)]
    s_count: Option<usize>,
    /// Point inside the intended well when the radicand has several.
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<f64>,
    /// JSON summary file (default: <out>.summary.json, or standard error).
    #[arg(long)]
    summary: Option<PathBuf>,
}

impl Common {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            r: self.r,
            m: self.m,
            inertia: self.inertia,
            potential: self.potential,
            kappa: self.kappa,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            delta: self.delta,
            energy: self.energy,
            l: self.l,
            s: self.s,
            out: self.out,
            format: self.format,
            ..Default::default()
        };
        Ok(file.overlay(flags))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Geometry { common, grid } => {
            let extra = RunConfig {
                u_min: grid.u_min,
                u_max: grid.u_max,
                nu: grid.nu,
                v_min: grid.v_min,
                v_max: grid.v_max,
                nv: grid.nv,
                ..Default::default()
            };
            commands::geometry(common.into_config()?.overlay(extra))
        }
        Command::Simulate { common, run } => {
            let extra = RunConfig {
                t_end: run.t_end,
                u0: run.u0,
                pu0: run.pu0,
                rtol: run.rtol,
                atol: run.atol,
                record_every: run.record_every,
                ..Default::default()
            };
            commands::simulate(common.into_config()?.overlay(extra))
        }
        Command::Actions { common, seed } => {
            commands::actions(common.into_config()?.overlay(RunConfig { seed, ..Default::default() }))
        }
        Command::Sweep { common, grid } => {
            let extra = RunConfig {
                e_min: grid.e_min,
                e_max: grid.e_max,
                e_count: grid.e_count,
                l_min: grid.l_min,
                l_max: grid.l_max,
                l_count: grid.l_count,
                s_min: grid.s_min,
                s_max: grid.s_max,
                s_count: grid.s_count,
                seed: grid.seed,
                summary: grid.summary,
                ..Default::default()
            };
            commands::sweep(common.into_config()?.overlay(extra))
        }
        Command::Quantize { common, n } => {
            commands::quantize(common.into_config()?.overlay(RunConfig { n, ..Default::default() }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mylar: {e}");
            ExitCode::from(e.code())
        }
    }
}
