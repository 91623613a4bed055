use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(name = "frchain", version, about = "Fractional-revival spin chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design an FR chain and write it as JSON
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "theta_critical", required_unless_present = "theta_critical")]
        theta: Option<f64>,
        /// Use the angle at which the central couplings tie (even N)
        #[arg(long)]
        theta_critical: bool,
        /// Build odd N from the eigenvalue lattice
        #[arg(long)]
        odd_spectral: bool,
        /// Unbalance the central pair of an odd chain
        #[arg(long)]
        eta: Option<f64>,
        /// Output file; standard output when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Detect a revival and evaluate the speed limits for a chain file
    Analyze {
        file: PathBuf,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        time: f64,
        /// Exit with status 3 unless the chain revives at --time
        #[arg(long)]
        require_fr: bool,
    },
    /// Bound values for a chain at a given angle and revival time
    Bounds {
        file: PathBuf,
        /// Revival angle; taken from the chain file or detected when absent
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        tau0: Option<f64>,
    },
    /// Monte Carlo run of the heralded transfer protocol
    Simulate {
        #[arg(required_unless_present = "n", conflicts_with_all = ["n", "theta"])]
        file: Option<PathBuf>,
        #[arg(long, requires = "theta")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        theta: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Logical input as "a_re,a_im,b_re,b_im"
        #[arg(long, default_value = "1,0,0,0")]
        input: String,
        #[arg(long)]
        tau0: Option<f64>,
        #[arg(long, default_value_t = frchain::protocol::DEFAULT_MAX_ROUNDS)]
        max_rounds: u64,
        /// Write per-trial records here
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Expected arrival time against the transfer speed limit over a range of N
    Sweep {
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        /// "critical" or a fixed angle
        #[arg(long, default_value = "critical")]
        theta: commands::ThetaChoice,
        #[arg(long)]
        mc_trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compare the reduced protocol with the full 2^N register
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 5)]
        rounds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "0.6,0,0,0.8")]
        input: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = match frchain::Tolerances::from_env() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", frchain::tolerance::ENV_VAR);
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Build {
            n,
            theta,
            theta_critical,
            odd_spectral,
            eta,
            out,
        } => commands::build(n, theta, theta_critical, odd_spectral, eta, out.as_deref()),
        Command::Analyze { file, time, require_fr } => commands::analyze(&file, time, require_fr, &tol),
        Command::Bounds { file, theta, tau0 } => commands::bounds(&file, theta, tau0, &tol),
        Command::Simulate {
            file,
            n,
            theta,
            trials,
            seed,
            input,
            tau0,
            max_rounds,
            csv,
        } => {
            let source = match (file, n, theta) {
                (Some(f), _, _) => commands::ChainSource::File(f),
                (None, Some(n), Some(theta)) => commands::ChainSource::Design { n, theta },
                _ => unreachable!("clap enforces a chain source"),
            };
            commands::simulate(source, trials, seed, &input, tau0, max_rounds, csv.as_deref(), &tol)
        }
        Command::Sweep {
            n_min,
            n_max,
            theta,
            mc_trials,
            seed,
            format,
        } => commands::sweep(n_min, n_max, theta, mc_trials, seed, matches!(format, Format::Json), &tol),
        Command::Oracle {
            n,
            theta,
            rounds,
            seed,
            input,
        } => commands::oracle(n, theta, rounds, seed, &input),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
