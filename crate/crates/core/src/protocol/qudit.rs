//! `d`-level generalization of the encoding and the arrival projection.
//!
//! Component `j` (1-based) sits on site `d + 1 - j` and arrives on site
//! `N - d + j`; for `d = 2` this is the qubit layout `alpha|2> + beta|1>`.

use num_complex::Complex64;

use crate::chain::SingleExcitationState;
use crate::error::{Error, Result};

/// Outcome of an arrival measurement over the last `d` sites.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditOutcome {
    pub success: bool,
    pub success_probability: f64,
    pub post_state: SingleExcitationState,
    /// Arrived components in logical order, present iff `success`.
    pub decoded: Option<Vec<Complex64>>,
}

pub(crate) fn check_dimension(d: usize, n: usize) -> Result<()> {
    if d < 2 || 2 * d > n {
        return Err(Error::InvalidParameter(format!(
            "qudit dimension must satisfy 2 <= d <= N/2, got d = {d}, N = {n}"
        )));
    }
    Ok(())
}

pub(crate) fn place(components: &[Complex64], n: usize) -> SingleExcitationState {
    let d = components.len();
    let mut amps = vec![Complex64::new(0.0, 0.0); n];
    for (j, c) in components.iter().enumerate() {
        amps[d - 1 - j] = *c;
    }
    SingleExcitationState::from_amplitudes(amps)
}

/// Places `d` normalized amplitudes on sites `1..=d` in mirrored order.
pub fn encode_qudit(components: &[Complex64], n: usize) -> Result<SingleExcitationState> {
    check_dimension(components.len(), n)?;
    let norm = components.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized {
            norm,
            tolerance: 1e-12,
        });
    }
    Ok(place(components, n))
}

/// Reads the components off the last `d` sites of an arrived state.
pub fn decode_qudit(state: &SingleExcitationState, d: usize) -> Vec<Complex64> {
    let n = state.n_sites();
    (1..=d).map(|j| state.amplitude(n - d + j)).collect()
}

/// Projects an evolved state onto arrival (last `d` sites) when `draw` falls
/// below the arrival probability, and onto the complement otherwise.
pub(crate) fn measure_arrival(evolved: &SingleExcitationState, d: usize, draw: f64) -> Result<QuditOutcome> {
    let n = evolved.n_sites();
    let arrival_first = n - d + 1;
    let p = evolved.weight_on(arrival_first, n).min(1.0);
    let success = draw < p;
    let projected: Vec<Complex64> = evolved
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let arrived = i + 1 >= arrival_first;
            if arrived == success {
                *a
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let post_state = SingleExcitationState::from_amplitudes(projected)
        .normalized()
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "measurement selected a branch of zero probability (p_success = {p})"
            ))
        })?;
    let decoded = success.then(|| decode_qudit(&post_state, d));
    Ok(QuditOutcome {
        success,
        success_probability: p,
        post_state,
        decoded,
    })
}
