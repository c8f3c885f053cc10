//! `tpms`: batch studies of TPMS lattice stiffness and mesh convergence.

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use tpms_cli::commands;
use tpms_cli::config::StudyConfig;
use tpms_core::convergence::GciConvention;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConventionArg {
    /// Reference both convergence indices to the finest grid.
    Paper,
    /// Reference each index to its own fine pair member.
    Roache,
}

impl From<ConventionArg> for GciConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Paper => GciConvention::Paper,
            ConventionArg::Roache => GciConvention::Roache,
        }
    }
}

/// TPMS lattice study toolkit: generate, mesh, solve, sweep, and report.
///
/// Studies are declared in a JSON config file; every flag below can also be
/// set through its `TPMS_*` environment variable (flags win over the
/// environment, which wins over the config file).
#[derive(Parser)]
#[command(name = "tpms", version)]
struct Cli {
    /// JSON study configuration (desk-scale defaults when omitted).
    #[arg(long, global = true, env = "TPMS_CONFIG", value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (overrides the configuration).
    #[arg(long, global = true, env = "TPMS_OUT", value_name = "DIR")]
    out: Option<PathBuf>,
    /// Concurrent sweep jobs (default 1).
    #[arg(long, global = true, env = "TPMS_JOBS", value_name = "N")]
    jobs: Option<usize>,
    /// Convergence-index convention (default paper).
    #[arg(long, global = true, env = "TPMS_CONVENTION", value_enum)]
    convention: Option<ConventionArg>,
    /// Seed for stochastic samplers (overrides the configuration).
    #[arg(long, global = true, env = "TPMS_SEED")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Calibrate the level offset, export STL and the calibration table.
    Gen,
    /// Build one mesh; export VTK and a quality row.
    Mesh {
        /// Element size in mm (default: the coarsest configured size).
        #[arg(long)]
        h: Option<f64>,
        /// Scaled-Jacobian floor in (0, 1] (default: first configured value).
        #[arg(long)]
        mj: Option<f64>,
    },
    /// Mesh and solve one compression case; export the result row and VTK.
    Solve {
        /// Element size in mm (default: the coarsest configured size).
        #[arg(long)]
        h: Option<f64>,
        /// Scaled-Jacobian floor in (0, 1] (default: first configured value).
        #[arg(long)]
        mj: Option<f64>,
    },
    /// Solve every configured (h, MJ) pair into sweep.csv.
    Sweep,
    /// Richardson/GCI analysis of a three-grid study CSV with header `h,f`.
    Gci {
        /// Study CSV path.
        study: PathBuf,
        /// Safety factor (default 1.25 for three-grid studies).
        #[arg(long)]
        fs: Option<f64>,
    },
    /// Fit the Gibson-Ashby power law to a CSV with header `rd,e_ratio`.
    Fit {
        /// Density/stiffness CSV path.
        results: PathBuf,
    },
    /// Per-MJ GCI reports and convergence plot from sweep results
    /// (reused from RESULTS or sweep.csv when present, else computed).
    Report {
        /// Existing sweep CSV to analyze instead of running the sweep.
        results: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let mut config = StudyConfig::load(cli.config.as_deref())?;
    if let Some(out) = cli.out {
        config.output_dir = out;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let convention: GciConvention = cli.convention.unwrap_or(ConventionArg::Paper).into();
    let jobs = cli.jobs.unwrap_or(1);

    match cli.command {
        Command::Gen => commands::gen::run(&config),
        Command::Mesh { h, mj } => commands::mesh::run(&config, h, mj),
        Command::Solve { h, mj } => commands::solve::run(&config, h, mj),
        Command::Sweep => commands::sweep::run(&config, jobs),
        Command::Gci { study, fs } => commands::gci::run(&config, &study, convention, fs),
        Command::Fit { results } => commands::fit::run(&config, &results),
        Command::Report { results } => {
            commands::report::run(&config, results.as_deref(), convention, jobs)
        }
    }
}
