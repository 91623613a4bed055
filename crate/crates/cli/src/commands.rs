use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use frchain::designer::{
    asymmetrize_odd, critical_angle, genest_chain, spectral_design, symmetric_design,
    Asymmetry, ChainDocument, FrDesign, FrSpectrumSpec, DEFAULT_TAU0,
};
use frchain::eigen::{eigendecompose_with, EigenSystem};
use frchain::protocol::oracle::full_space_oracle;
use frchain::protocol::{expected_weighted_time, monte_carlo, LogicalQubit, MonorailChannel, ProtocolStats};
use frchain::revival::{
    bounds_report, check_spectral_conditions, detect_revival_eig, pst_speed_limit, trace_identity_check,
    BoundsReport, RevivalCharacterization, SpectralFit, TraceIdentity,
};
use frchain::{ChainSpec, Tolerances};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

/// Oracle deviations at or above this fail the `oracle` command.
const ORACLE_THRESHOLD: f64 = 1e-9;
/// Allowed normalization error of `--input`.
const INPUT_TOLERANCE: f64 = 1e-6;

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<frchain::Error> for CliError {
    fn from(e: frchain::Error) -> Self {
        Self::usage(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError {
        code: 1,
        message: format!("{}: {e}", path.display()),
    }
}

fn emit<T: Serialize>(value: &T) -> CliResult {
    let text = serde_json::to_string_pretty(value).expect("plain data serializes");
    println!("{text}");
    Ok(())
}

fn read_document(path: &Path) -> Result<ChainDocument, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn parse_qubit(input: &str) -> Result<LogicalQubit, CliError> {
    let parts: Vec<f64> = input
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::usage(format!("--input {input:?}: {e}")))?;
    let [a_re, a_im, b_re, b_im] = parts[..] else {
        return Err(CliError::usage(format!(
            "--input expects four numbers a_re,a_im,b_re,b_im, got {}",
            parts.len()
        )));
    };
    let (alpha, beta) = (Complex64::new(a_re, a_im), Complex64::new(b_re, b_im));
    LogicalQubit::new(alpha, beta, INPUT_TOLERANCE)?;
    Ok(LogicalQubit::normalized(alpha, beta)?)
}

pub fn build(
    n: usize,
    theta: Option<f64>,
    theta_critical: bool,
    odd_spectral: bool,
    eta: Option<f64>,
    out: Option<&Path>,
) -> CliResult {
    let theta = match (theta, theta_critical) {
        (Some(t), false) => t,
        (None, true) => critical_angle(n)?,
        _ => return Err(CliError::usage("give exactly one of --theta and --theta-critical")),
    };
    if eta.is_some() && n % 2 == 0 {
        return Err(CliError::usage(format!("--eta needs odd N, got N = {n}")));
    }
    let design = if odd_spectral {
        spectral_design(&FrSpectrumSpec::with_default_lattice(n, theta, DEFAULT_TAU0))?
    } else if n % 2 == 0 {
        genest_chain(n, theta)?
    } else {
        return Err(CliError::usage(format!(
            "the closed-form chain needs even N, got N = {n}; use --odd-spectral"
        )));
    };
    let design = match eta {
        Some(eta) => asymmetric(design, eta)?,
        None => design,
    };
    let text = serde_json::to_string_pretty(&design.document()).expect("plain data serializes");
    match out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| io_error(path, e)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn asymmetric(source: FrDesign, eta: f64) -> Result<FrDesign, CliError> {
    let chain = asymmetrize_odd(&source.chain, eta)?;
    let eig = eigendecompose_with(&chain.hamiltonian(), &Tolerances::default())?;
    let revival = detect_revival_eig(&eig, source.tau0)?;
    Ok(FrDesign {
        chain,
        theta: revival.theta,
        tau0: source.tau0,
        phi: revival.phi,
        lattice: None,
        asymmetry: Some(Asymmetry {
            eta,
            theta_prime: source.theta,
        }),
    })
}

#[derive(Serialize)]
struct Analysis {
    n: usize,
    time: f64,
    revival: RevivalCharacterization,
    is_fr: bool,
    mirror_symmetric: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectral_fit: Option<SpectralFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace_identity: Option<TraceIdentity>,
    bounds: BoundsReport,
}

fn decompose(chain: &ChainSpec, tol: &Tolerances) -> Result<EigenSystem, CliError> {
    Ok(eigendecompose_with(&chain.hamiltonian(), tol)?)
}

pub fn analyze(file: &Path, time: f64, require_fr: bool, tol: &Tolerances) -> CliResult {
    let chain = read_document(file)?.chain;
    let eig = decompose(&chain, tol)?;
    let revival = detect_revival_eig(&eig, time)?;
    let mirror_symmetric = chain.is_mirror_symmetric_within(tol.algebraic);
    let is_fr = revival.residual <= tol.fr_verdict;
    let analysis = Analysis {
        n: chain.n_sites(),
        time,
        revival,
        is_fr,
        mirror_symmetric,
        spectral_fit: mirror_symmetric
            .then(|| check_spectral_conditions(&eig, time).ok())
            .flatten(),
        trace_identity: trace_identity_check(&chain, &eig).ok(),
        bounds: bounds_report(&chain, &eig, revival.theta, time, tol),
    };
    emit(&analysis)?;
    if require_fr && !is_fr {
        return Err(CliError {
            code: 3,
            message: format!(
                "no fractional revival at t = {time}: residual {:e} exceeds {:e}",
                revival.residual, tol.fr_verdict
            ),
        });
    }
    Ok(())
}

pub fn bounds(file: &Path, theta: Option<f64>, tau0: Option<f64>, tol: &Tolerances) -> CliResult {
    let doc = read_document(file)?;
    let tau0 = tau0.or(doc.design.as_ref().map(|d| d.tau0)).unwrap_or(DEFAULT_TAU0);
    let eig = decompose(&doc.chain, tol)?;
    let theta = match theta.or(doc.design.as_ref().map(|d| d.theta)) {
        Some(t) => t,
        None => detect_revival_eig(&eig, tau0)?.theta,
    };
    emit(&bounds_report(&doc.chain, &eig, theta, tau0, tol))
}

pub enum ChainSource {
    File(PathBuf),
    Design { n: usize, theta: f64 },
}

#[allow(clippy::too_many_arguments)]
pub fn simulate(
    source: ChainSource,
    trials: u64,
    seed: u64,
    input: &str,
    tau0: Option<f64>,
    max_rounds: u64,
    csv_path: Option<&Path>,
    tol: &Tolerances,
) -> CliResult {
    let psi = parse_qubit(input)?;
    let (chain, default_tau0) = match source {
        ChainSource::File(path) => {
            let doc = read_document(&path)?;
            let t = doc.design.as_ref().map_or(DEFAULT_TAU0, |d| d.tau0);
            (doc.chain, t)
        }
        ChainSource::Design { n, theta } => (symmetric_design(n, theta)?.chain, DEFAULT_TAU0),
    };
    let channel = MonorailChannel::with_tolerances(chain, tau0.unwrap_or(default_tau0), *tol)?;
    let (stats, records) = monte_carlo(&psi, &channel, trials, seed, max_rounds)?;
    if let Some(path) = csv_path {
        let mut w = csv::Writer::from_path(path).map_err(|e| io_error(path, e))?;
        for r in &records {
            w.serialize(r).map_err(|e| io_error(path, e))?;
        }
        w.flush().map_err(|e| io_error(path, e))?;
    }
    emit(&stats)
}

#[derive(Clone, Copy)]
pub enum ThetaChoice {
    Critical,
    Fixed(f64),
}

impl FromStr for ThetaChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("critical") {
            return Ok(Self::Critical);
        }
        s.parse()
            .map(Self::Fixed)
            .map_err(|_| format!("expected \"critical\" or a number, got {s:?}"))
    }
}

#[derive(Serialize)]
struct SweepRow {
    n: usize,
    theta: f64,
    j_max: f64,
    tau0: f64,
    expected_weighted_time: f64,
    pst_limit: f64,
    ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_mean_rounds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_std_error: Option<f64>,
}

fn sweep_row(n: usize, theta: f64, mc: Option<(u64, u64)>, tol: &Tolerances) -> Result<SweepRow, CliError> {
    let chain = symmetric_design(n, theta)?.chain;
    let expected = expected_weighted_time(&chain, theta, DEFAULT_TAU0)?;
    let pst_limit = pst_speed_limit(n);
    let stats: Option<ProtocolStats> = match mc {
        Some((trials, seed)) => {
            let channel = MonorailChannel::with_tolerances(chain.clone(), DEFAULT_TAU0, *tol)?;
            Some(monte_carlo(&LogicalQubit::zero(), &channel, trials, seed, frchain::protocol::DEFAULT_MAX_ROUNDS)?.0)
        }
        None => None,
    };
    Ok(SweepRow {
        n,
        theta,
        j_max: chain.j_max(),
        tau0: DEFAULT_TAU0,
        expected_weighted_time: expected,
        pst_limit,
        ratio: expected / pst_limit,
        mc_mean_rounds: stats.as_ref().map(|s| s.mean_rounds),
        mc_std_error: stats.as_ref().map(|s| s.std_error),
    })
}

pub fn sweep(
    n_min: usize,
    n_max: usize,
    theta: ThetaChoice,
    mc_trials: Option<u64>,
    seed: u64,
    json: bool,
    tol: &Tolerances,
) -> CliResult {
    if n_min > n_max {
        return Err(CliError::usage(format!("--n-min {n_min} exceeds --n-max {n_max}")));
    }
    let ns: Vec<usize> = match theta {
        ThetaChoice::Critical => {
            if n_min < 4 {
                return Err(CliError::usage(format!(
                    "critical sweeps start at N = 4 (the critical angle vanishes at N = 2), got --n-min {n_min}"
                )));
            }
            (n_min..=n_max).filter(|n| n % 2 == 0).collect()
        }
        ThetaChoice::Fixed(_) => {
            if n_min < 2 {
                return Err(CliError::usage(format!("chains need N >= 2, got --n-min {n_min}")));
            }
            (n_min..=n_max).collect()
        }
    };
    if ns.is_empty() {
        return Err(CliError::usage(format!("no even N in {n_min}..={n_max} for a critical sweep")));
    }
    let rows = ns
        .par_iter()
        .map(|&n| {
            let t = match theta {
                ThetaChoice::Critical => critical_angle(n)?,
                ThetaChoice::Fixed(t) => t,
            };
            sweep_row(n, t, mc_trials.map(|m| (m, seed)), tol)
        })
        .collect::<Result<Vec<_>, _>>()?;

    if json {
        return emit(&rows);
    }
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    let mut header = vec!["n", "theta", "j_max", "tau0", "expected_weighted_time", "pst_limit", "ratio"];
    if mc_trials.is_some() {
        header.extend(["mc_mean_rounds", "mc_std_error"]);
    }
    let stdout_error = |e: csv::Error| CliError {
        code: 1,
        message: e.to_string(),
    };
    w.write_record(&header).map_err(stdout_error)?;
    for r in rows {
        let mut record = vec![
            r.n.to_string(),
            r.theta.to_string(),
            r.j_max.to_string(),
            r.tau0.to_string(),
            r.expected_weighted_time.to_string(),
            r.pst_limit.to_string(),
            r.ratio.to_string(),
        ];
        if let (Some(m), Some(s)) = (r.mc_mean_rounds, r.mc_std_error) {
            record.extend([m.to_string(), s.to_string()]);
        }
        w.write_record(&record).map_err(stdout_error)?;
    }
    w.flush().map_err(|e| CliError {
        code: 1,
        message: e.to_string(),
    })?;
    Ok(())
}

pub fn oracle(n: usize, theta: f64, rounds: u64, seed: u64, input: &str) -> CliResult {
    let psi = parse_qubit(input)?;
    let report = full_space_oracle(n, theta, &psi, rounds, seed)?;
    emit(&report)?;
    std::io::stdout().flush().ok();
    if !(report.max_deviation < ORACLE_THRESHOLD) {
        return Err(CliError {
            code: 4,
            message: format!(
                "full-register deviation {:e} reaches the threshold {ORACLE_THRESHOLD:e}",
                report.max_deviation
            ),
        });
    }
    Ok(())
}
