//! Detection of fractional revivals and numerical witnesses for the speed
//! limits they obey.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::ChainSpec;
use crate::eigen::{eigendecompose, transfer_amplitude, EigenSystem, Propagator};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// Below this magnitude the start amplitude no longer fixes the global phase.
const PHASE_PIVOT_FLOOR: f64 = 1e-12;

/// Measured revival of `|1>` between the chain ends at `probe_time`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RevivalCharacterization {
    /// In `[0, pi/2]`.
    pub theta: f64,
    pub phi: f64,
    /// Probability left outside sites 1 and N.
    pub residual: f64,
    pub probe_time: f64,
}

impl RevivalCharacterization {
    pub fn is_revival(&self, tol: &Tolerances) -> bool {
        self.residual <= tol.fr_verdict
    }
}

/// Phase that makes `a_1` real non-negative, or puts `a_N` at phase `-pi/2`
/// when `a_1` is too small to serve as reference.
fn phase_reference(a1: Complex64, an: Complex64) -> Complex64 {
    if a1.norm() >= PHASE_PIVOT_FLOOR {
        a1.conj() / a1.norm()
    } else if an.norm() > 0.0 {
        Complex64::new(0.0, -1.0) * an.conj() / an.norm()
    } else {
        Complex64::new(1.0, 0.0)
    }
}

fn characterize(a1: Complex64, an: Complex64, t: f64) -> (RevivalCharacterization, Complex64) {
    let g = phase_reference(a1, an);
    let start = (a1 * g).re.max(0.0);
    let end = an * g;
    let theta = end.norm().atan2(start);
    let phi = if end.norm() > 0.0 { end.arg() } else { 0.0 };
    let residual = (1.0 - a1.norm_sqr() - an.norm_sqr()).max(0.0);
    (
        RevivalCharacterization {
            theta,
            phi,
            residual,
            probe_time: t,
        },
        g,
    )
}

pub fn detect_revival(chain: &ChainSpec, t: f64) -> Result<RevivalCharacterization> {
    detect_revival_eig(&eigendecompose(&chain.hamiltonian())?, t)
}

/// As [`detect_revival`] with a precomputed eigensystem.
pub fn detect_revival_eig(eig: &EigenSystem, t: f64) -> Result<RevivalCharacterization> {
    let n = eig.dim();
    let a1 = transfer_amplitude(eig, 1, 1, t)?;
    let an = transfer_amplitude(eig, 1, n, t)?;
    Ok(characterize(a1, an, t).0)
}

/// Largest distance, over every site `n` (the centre excluded for odd `N`),
/// between `e^{-iHt}|n>` and `cos(theta)|n> + sin(theta) e^{i phi}|N+1-n>`,
/// using the global phase fixed by site 1.
pub fn verify_mirror_revival(chain: &ChainSpec, t: f64, theta: f64, phi: f64) -> Result<f64> {
    let eig = eigendecompose(&chain.hamiltonian())?;
    let n = eig.dim();
    let u = Propagator::new(&eig, t)?;
    let (_, g) = characterize(u.element(1, 1), u.element(n, 1), t);
    let end = Complex64::from_polar(theta.sin(), phi);
    let centre = (n % 2 == 1).then_some(n.div_ceil(2));
    let mut worst = 0.0f64;
    for site in (1..=n).filter(|&s| Some(s) != centre) {
        let mirror = n + 1 - site;
        let dev = (1..=n)
            .map(|row| {
                let mut target = Complex64::new(0.0, 0.0);
                if row == site {
                    target += theta.cos();
                }
                if row == mirror {
                    target += end;
                }
                (u.element(row, site) * g - target).norm_sqr()
            })
            .sum::<f64>()
            .sqrt();
        worst = worst.max(dev);
    }
    Ok(worst)
}

/// Lattice fit of a mirror-symmetric spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralFit {
    pub theta_estimate: f64,
    pub lattice_residual: f64,
    pub sym_integers: Vec<i64>,
    pub antisym_integers: Vec<i64>,
}

/// Eigenvectors may deviate this much from exact parity alternation before a
/// chain counts as non-symmetric.
const PARITY_THRESHOLD: f64 = 1e-6;

/// Fits `lambda_1 - lambda_{2n-1}` to multiples of `2 pi / tau0` and
/// `lambda_1 - lambda_{2n}` to the same lattice offset by `2 theta / tau0`.
pub fn check_spectral_conditions(eig: &EigenSystem, tau0: f64) -> Result<SpectralFit> {
    if !(tau0.is_finite() && tau0 > 0.0) {
        return Err(Error::InvalidParameter(format!("revival time must be positive, got {tau0}")));
    }
    let parity = eig.parity_alternation_residual();
    if parity > PARITY_THRESHOLD {
        return Err(Error::NotMirrorSymmetric(format!(
            "eigenvector parity alternation violated by {parity:e}"
        )));
    }
    let lambda = eig.eigenvalues();
    let top = lambda[0];
    let step = 2.0 * PI / tau0;

    let sym: Vec<f64> = lambda.iter().step_by(2).map(|l| top - l).collect();
    let anti: Vec<f64> = lambda.iter().skip(1).step_by(2).map(|l| top - l).collect();

    let (s, c) = anti
        .iter()
        .map(|d| (d * tau0).sin_cos())
        .fold((0.0, 0.0), |(s, c), (ds, dc)| (s + ds, c + dc));
    let mut angle = s.atan2(c);
    if angle < 0.0 {
        angle += 2.0 * PI;
    }
    let theta = angle / 2.0;
    let offset = 2.0 * theta / tau0;

    let sym_integers: Vec<i64> = sym.iter().map(|d| (d / step).round() as i64).collect();
    let antisym_integers: Vec<i64> = anti.iter().map(|d| ((d - offset) / step).round() as i64).collect();
    let sym_dev = sym
        .iter()
        .zip(&sym_integers)
        .map(|(d, &k)| (d - step * k as f64).abs());
    let anti_dev = anti
        .iter()
        .zip(&antisym_integers)
        .map(|(d, &k)| (d - step * k as f64 - offset).abs());
    let lattice_residual = sym_dev.chain(anti_dev).fold(0.0, f64::max);

    Ok(SpectralFit {
        theta_estimate: theta,
        lattice_residual,
        sym_integers,
        antisym_integers,
    })
}

/// Deterministic transfer bound `J_max tau >= (pi/4) sqrt(N^2 - (1 - (-1)^N)/2)`.
pub fn pst_speed_limit(n: usize) -> f64 {
    let nf = n as f64;
    let parity = if n % 2 == 0 { 0.0 } else { 1.0 };
    PI / 4.0 * (nf * nf - parity).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityCase {
    Even,
    OddSymmetric,
}

impl ParityCase {
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            ParityCase::Even
        } else {
            ParityCase::OddSymmetric
        }
    }
}

/// Lower bound on `J_max tau0` for a `theta`-revival: `N theta / 2` for even
/// chains, `sqrt((N^2 - 1) theta (pi - theta)) / 2` for odd symmetric ones.
pub fn fr_speed_limit(n: usize, theta: f64, case: ParityCase) -> f64 {
    let nf = n as f64;
    match case {
        ParityCase::Even => nf * theta / 2.0,
        ParityCase::OddSymmetric => ((nf * nf - 1.0) * theta * (PI - theta)).sqrt() / 2.0,
    }
}

/// Odd-even eigenvalue gaps `lambda_{2n-1} - lambda_{2n}`.
pub fn odd_even_gaps(eig: &EigenSystem) -> Vec<f64> {
    eig.eigenvalues()
        .chunks_exact(2)
        .map(|p| p[0] - p[1])
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceIdentity {
    /// `|2 J_{N/2} - sum_n (lambda_{2n-1} - lambda_{2n})|`.
    pub residual: f64,
    pub gaps: Vec<f64>,
    pub min_gap: f64,
}

/// Checks `Tr(H S) = 2 J_{N/2} = sum_n (lambda_{2n-1} - lambda_{2n})` for an even
/// mirror-symmetric chain.
pub fn trace_identity_check(chain: &ChainSpec, eig: &EigenSystem) -> Result<TraceIdentity> {
    let n = chain.n_sites();
    if n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "trace identity needs an even number of sites, got {n}"
        )));
    }
    if !chain.is_mirror_symmetric() {
        return Err(Error::NotMirrorSymmetric("trace identity input".into()));
    }
    let gaps = odd_even_gaps(eig);
    let residual = (2.0 * chain.coupling(n / 2)? - gaps.iter().sum::<f64>()).abs();
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(TraceIdentity {
        residual,
        gaps,
        min_gap,
    })
}

/// `|Tr(H S) - sum_k (-1)^(k+1) lambda_k|`, meaningful for any mirror-symmetric chain.
pub fn mirror_trace_residual(chain: &ChainSpec, eig: &EigenSystem) -> f64 {
    let signed: f64 = eig
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(k, l)| if k % 2 == 0 { *l } else { -l })
        .sum();
    (chain.hamiltonian().mirror_trace() - signed).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Saturation {
    /// `J_max tau0` sits on the deterministic transfer limit.
    pub pst: bool,
    /// `J_max tau0` sits on the FR limit.
    pub fr: bool,
    /// The smallest odd-even gap equals `2 theta / tau0`.
    pub gap: bool,
}

/// Bound values for one chain, revival angle and revival time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub j_max_tau0: f64,
    pub pst_limit: f64,
    pub fr_limit: f64,
    pub min_gap: f64,
    pub gap_bound: f64,
    pub trace_residual: f64,
    pub saturated: Saturation,
}

pub fn bounds_report(
    chain: &ChainSpec,
    eig: &EigenSystem,
    theta: f64,
    tau0: f64,
    tol: &Tolerances,
) -> BoundsReport {
    let n = chain.n_sites();
    let j_max_tau0 = chain.j_max() * tau0;
    let pst_limit = pst_speed_limit(n);
    let fr_limit = fr_speed_limit(n, theta, ParityCase::of(n));
    let min_gap = odd_even_gaps(eig).into_iter().fold(f64::INFINITY, f64::min);
    let gap_bound = 2.0 * theta / tau0;
    let scale = tol.saturation * eig.spread().max(1.0);
    BoundsReport {
        j_max_tau0,
        pst_limit,
        fr_limit,
        min_gap,
        gap_bound,
        trace_residual: mirror_trace_residual(chain, eig),
        saturated: Saturation {
            pst: (j_max_tau0 - pst_limit).abs() <= scale,
            fr: (j_max_tau0 - fr_limit).abs() <= scale,
            gap: (min_gap - gap_bound).abs() <= scale,
        },
    }
}

/// Revival time used when none is given.
pub const DEFAULT_PROBE_TIME: f64 = FRAC_PI_2;
