use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Command, Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "rddi", version, about = "Collective emission of atom arrays coupled by resonant dipole-dipole interactions")]
pub struct Cli {
    /// JSON config file; flags given on the command line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the merged configuration as JSON and exit.
    #[arg(long, global = true)]
    pub echo_config: bool,
    /// Output file (default: stdout).
    #[arg(short, long, global = true)]
    pub output: Option<String>,
    /// Output format (default: csv, table for oracle).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for sweeps (default: $RDDI_JOBS, else all cores).
    #[arg(short = 'j', long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Option<Sub>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Tabulate pair couplings against separation.
    Kernel(KernelArgs),
    /// Symmetric-state decay constant and shift over lattice sweeps.
    Symmetric(LatticeArgs),
    /// Eigen-decay constants of one lattice, optionally with mode weights.
    Spectrum(SpectrumArgs),
    /// Intensity of phase-imprinted states over time.
    Dynamics(DynamicsArgs),
    /// Run the numerical oracles and report every comparison.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Reservoir: 1d, 2d or 3d.
    #[arg(long)]
    pub kind: Option<String>,
    /// Comma list of parallel, perpendicular or c² values.
    #[arg(long)]
    pub pol: Option<String>,
    /// Largest separation k_L r.
    #[arg(long)]
    pub xi_max: Option<f64>,
    /// Number of samples on (0, xi-max].
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    /// Sites along x: `n`, `a..b` or a comma list.
    #[arg(long)]
    pub nx: Option<String>,
    /// Sites along z.
    #[arg(long)]
    pub nz: Option<String>,
    /// Lattice spacing k_L d: a value, `a:step:b` or a comma list.
    #[arg(long)]
    pub xi: Option<String>,
    /// Reservoir: 1d, 2d or 3d.
    #[arg(long)]
    pub kind: Option<String>,
    /// Dipole direction: x, z, transverse (to the drive) or degrees.
    #[arg(long)]
    pub pol: Option<String>,
    /// Drive direction: x, z or degrees from x toward z.
    #[arg(long)]
    pub klong: Option<String>,
    /// Site enumeration: z-major or x-major.
    #[arg(long)]
    pub order: Option<String>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Phase indices whose mode weights |w_l|² are added as columns.
    #[arg(long)]
    pub weights: Option<String>,
    /// Largest accepted condition number of the eigenvector matrix.
    #[arg(long)]
    pub condition_limit: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DynamicsArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Phase index m (0..=N), a range or a list.
    #[arg(long)]
    pub m: Option<String>,
    /// First sample time, in units of 1/Γ.
    #[arg(long)]
    pub t_min: Option<f64>,
    /// Last sample time.
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of sample times.
    #[arg(long)]
    pub points: Option<usize>,
    /// log or linear.
    #[arg(long)]
    pub time_grid: Option<String>,
    /// Largest accepted condition number of the eigenvector matrix.
    #[arg(long)]
    pub condition_limit: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Points for the angular Bessel identities.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Points for the principal-value identities.
    #[arg(long)]
    pub b: Option<String>,
    /// Phase indices for the dynamics oracle.
    #[arg(long)]
    pub m: Option<String>,
    /// Time horizon of the dynamics oracle.
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Largest lattice the dynamics oracle integrates directly.
    #[arg(long)]
    pub dynamics_cap: Option<usize>,
}

impl LatticeArgs {
    fn config(self) -> RunConfig {
        RunConfig {
            nx: self.nx,
            nz: self.nz,
            xi: self.xi,
            kind: self.kind,
            pol: self.pol,
            klong: self.klong,
            order: self.order,
            ..RunConfig::default()
        }
    }
}

impl Cli {
    /// Values given on the command line, as a config overlay.
    pub fn overlay(self) -> RunConfig {
        let mut cfg = match self.command {
            None => RunConfig::default(),
            Some(Sub::Kernel(k)) => RunConfig {
                command: Some(Command::Kernel),
                kind: k.kind,
                pol: k.pol,
                xi_max: k.xi_max,
                steps: k.steps,
                ..RunConfig::default()
            },
            Some(Sub::Symmetric(l)) => RunConfig { command: Some(Command::Symmetric), ..l.config() },
            Some(Sub::Spectrum(s)) => RunConfig {
                command: Some(Command::Spectrum),
                weights: s.weights,
                condition_limit: s.condition_limit,
                ..s.lattice.config()
            },
            Some(Sub::Dynamics(d)) => RunConfig {
                command: Some(Command::Dynamics),
                m: d.m,
                t_min: d.t_min,
                t_max: d.t_max,
                points: d.points,
                time_grid: d.time_grid,
                condition_limit: d.condition_limit,
                ..d.lattice.config()
            },
            Some(Sub::Oracle(o)) => RunConfig {
                command: Some(Command::Oracle),
                a: o.a,
                b: o.b,
                m: o.m,
                horizon: o.horizon,
                dynamics_cap: o.dynamics_cap,
                ..o.lattice.config()
            },
        };
        cfg.output = self.output;
        cfg.format = self.format;
        cfg.jobs = self.jobs;
        cfg
    }
}
