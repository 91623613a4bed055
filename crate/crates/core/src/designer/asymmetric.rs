//! Odd-length chains that are mirror symmetric except for the two central
//! couplings, `sqrt2 J cos(eta)` and `sqrt2 J sin(eta)`.
//!
//! Such a chain is orthogonally similar to the symmetric chain with both
//! central couplings equal to `J`, so the two share a spectrum, and a
//! `theta'`-revival of the symmetric chain becomes a revival with
//! `sin(theta) = sin(2 eta) sin(theta')`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use crate::chain::ChainSpec;
use crate::error::{Error, Result};

fn check_eta(eta: f64) -> Result<()> {
    if eta.is_finite() && eta > 0.0 && eta < FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("eta must lie in (0, pi/2), got {eta}")))
    }
}

/// Replaces the central pair of an odd mirror-symmetric chain.
///
/// `J` is read from the left central coupling, position `(N - 1) / 2`.
pub fn asymmetrize_odd(symmetric: &ChainSpec, eta: f64) -> Result<ChainSpec> {
    let n = symmetric.n_sites();
    if n % 2 == 0 || n < 3 {
        return Err(Error::InvalidParameter(format!(
            "central asymmetry needs an odd number of sites >= 3, got {n}"
        )));
    }
    check_eta(eta)?;
    if !symmetric.is_mirror_symmetric() {
        return Err(Error::NotMirrorSymmetric(
            "source chain for central asymmetry".into(),
        ));
    }
    let left = (n - 1) / 2;
    let j = symmetric.coupling(left)?;
    let mut couplings = symmetric.couplings().to_vec();
    couplings[left - 1] = SQRT_2 * j * eta.cos();
    couplings[left] = SQRT_2 * j * eta.sin();
    symmetric.with_couplings(couplings)
}

/// `arcsin(sin(2 eta) sin(theta'))`.
pub fn effective_angle_asymmetric(theta_prime: f64, eta: f64) -> f64 {
    ((2.0 * eta).sin() * theta_prime.sin()).clamp(-1.0, 1.0).asin()
}

/// Where the largest coupling of an asymmetric odd chain sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhichMax {
    /// `J_{(N-1)/2} = sqrt2 J cos(eta)`.
    LeftCentral,
    /// `J_{(N+1)/2} = sqrt2 J sin(eta)`.
    RightCentral,
    /// Some non-central coupling.
    Other,
}

/// Classifies the position of the largest coupling of an odd chain.
/// Ties between the central pair resolve to [`WhichMax::LeftCentral`].
pub fn which_max(chain: &ChainSpec) -> Result<WhichMax> {
    let n = chain.n_sites();
    if n % 2 == 0 || n < 3 {
        return Err(Error::InvalidParameter(format!(
            "central classification needs odd N >= 3, got {n}"
        )));
    }
    let left = chain.coupling((n - 1) / 2)?;
    let right = chain.coupling((n + 1) / 2)?;
    let outer = chain
        .couplings()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i + 1 != (n - 1) / 2 && i + 1 != (n + 1) / 2)
        .map(|(_, &j)| j)
        .fold(0.0, f64::max);
    Ok(if outer > left.max(right) {
        WhichMax::Other
    } else if left >= right {
        WhichMax::LeftCentral
    } else {
        WhichMax::RightCentral
    })
}

/// Ratio of expected weighted arrival times, asymmetric over symmetric source.
///
/// The central cases require the named coupling to actually be the larger of
/// the pair (`eta <= pi/4` for left, `eta >= pi/4` for right); outside that
/// region the formula does not describe any chain and is rejected.
pub fn asymmetric_time_penalty(eta: f64, which: WhichMax) -> Result<f64> {
    check_eta(eta)?;
    let s2 = (2.0 * eta).sin().powi(2);
    let slack = 1e-12;
    match which {
        WhichMax::LeftCentral if eta <= FRAC_PI_4 + slack => Ok(SQRT_2 * eta.cos() / s2),
        WhichMax::RightCentral if eta >= FRAC_PI_4 - slack => Ok(SQRT_2 * eta.sin() / s2),
        WhichMax::Other => Ok(1.0 / s2),
        _ => Err(Error::InvalidParameter(format!(
            "{which:?} cannot hold the largest coupling at eta = {eta}"
        ))),
    }
}
