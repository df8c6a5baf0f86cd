//! `frontspeed`: speeds, bounds, sweeps and simulations of Stefan
//! free-boundary reaction–diffusion fronts.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod grid;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use table::Format;

#[derive(Parser, Debug)]
#[command(
    name = "frontspeed",
    version,
    about = "Front speeds for reaction-diffusion equations with a Stefan free boundary"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ReactionArgs {
    /// Built-in reaction term: fisher, mkpp, combustion, bistable_cubic.
    #[arg(long, conflicts_with = "config")]
    pub reaction: Option<String>,
    /// Parameters of the built-in term, as key=value (repeat or comma-separate).
    #[arg(long, value_delimiter = ',', num_args = 1.., requires = "reaction")]
    pub params: Vec<String>,
    /// JSON document describing the reaction term.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct KappaArgs {
    /// Single Stefan constant.
    #[arg(long, conflicts_with = "kappa_grid")]
    pub kappa: Option<f64>,
    /// Grid lo:hi:n[:log|lin] (default log) or a comma-separated list.
    #[arg(long)]
    pub kappa_grid: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Worker threads for grids (0: machine parallelism).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact front speed from phase-plane shooting.
    Speed {
        #[command(flatten)]
        reaction: ReactionArgs,
        #[command(flatten)]
        kappa: KappaArgs,
        /// Bisection width of the speed.
        #[arg(long, default_value_t = frontspeed::phaseplane::DEFAULT_SPEED_TOL)]
        tol: f64,
        /// Write the phase-plane profile p(q) of a single-kappa run here.
        #[arg(long)]
        profile: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Variational lower bounds.
    Bound {
        #[command(flatten)]
        reaction: ReactionArgs,
        #[command(flatten)]
        kappa: KappaArgs,
        /// linear, exp, rational, power_pair, power_general, zfk, g2, optimal,
        /// zfk-bound, fisher-simple, fisher-hyper or catalog.
        #[arg(long, default_value = "catalog")]
        trial: String,
        /// Trial parameters.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        theta: Vec<f64>,
        /// Maximize over the parameters of the trial family.
        #[arg(long)]
        optimize: bool,
        #[arg(long, default_value_t = frontspeed::phaseplane::DEFAULT_SPEED_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Speeds and closed-form bounds over a kappa grid and/or an m grid (mkpp).
    Sweep {
        #[command(flatten)]
        reaction: ReactionArgs,
        #[command(flatten)]
        kappa: KappaArgs,
        /// Exponents m of u^m(1-u): lo:hi:n[:lin|log] (default lin) or a list.
        #[arg(long)]
        m_grid: Option<String>,
        /// Add dc²/dκ (and dc²/dm on an m grid) columns.
        #[arg(long)]
        sensitivities: bool,
        #[arg(long, default_value_t = frontspeed::phaseplane::DEFAULT_SPEED_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Free-boundary PDE simulation.
    Simulate {
        #[command(flatten)]
        reaction: ReactionArgs,
        #[arg(long)]
        kappa: f64,
        /// Initial domain length.
        #[arg(long, default_value_t = 20.0)]
        l0: f64,
        /// Amplitude of the initial profile A·cos(πx/(2 L0)).
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        #[arg(long, default_value_t = 401)]
        n_xi: usize,
        #[arg(long, default_value_t = 150.0)]
        t_end: f64,
        /// Time step; the largest stable step is used when omitted.
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, default_value_t = 0.5)]
        record_interval: f64,
        /// Fraction of the run used to measure the speed.
        #[arg(long, default_value_t = 0.25)]
        window: f64,
        /// Prefix of the `<prefix>_trajectory.csv` and `<prefix>_profile.csv` files.
        #[arg(long, default_value = "simulation")]
        prefix: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fisher speed against its bounds on 40 log-spaced kappas in [0.05, 50].
    Compare {
        /// gnuplot script for the table (requires --out).
        #[arg(long, requires = "out")]
        script: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Runs the acceptance suite.
    Selftest {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        only: Vec<u32>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Speed {
            reaction,
            kappa,
            tol,
            profile,
            output,
        } => commands::speed(&reaction, &kappa, tol, profile.as_deref(), &output),
        Command::Bound {
            reaction,
            kappa,
            trial,
            theta,
            optimize,
            tol,
            output,
        } => commands::bound(&reaction, &kappa, &trial, &theta, optimize, tol, &output),
        Command::Sweep {
            reaction,
            kappa,
            m_grid,
            sensitivities,
            tol,
            output,
        } => commands::sweep(&reaction, &kappa, m_grid.as_deref(), sensitivities, tol, &output),
        Command::Simulate {
            reaction,
            kappa,
            l0,
            amplitude,
            n_xi,
            t_end,
            dt,
            record_interval,
            window,
            prefix,
            output,
        } => commands::simulate(
            &reaction,
            commands::SimArgs {
                kappa,
                l0,
                amplitude,
                n_xi,
                t_end,
                dt,
                record_interval,
                window,
            },
            &prefix,
            &output,
        ),
        Command::Compare { script, output } => commands::compare(script.as_deref(), &output),
        Command::Selftest { only } => commands::selftest(&only),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
