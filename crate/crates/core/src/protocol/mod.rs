//! Heralded single-chain ("monorail") state transfer over an FR chain.
//!
//! A qubit `alpha|0> + beta|1>` is stored as `alpha|2> + beta|1>`. After the
//! revival time the excitation is either on sites `N-1, N`, carrying
//! `alpha|N-1> + beta|N>`, or back on sites 1 and 2 in its original form. A
//! CNOT from qubit `N` onto qubit `N-1` followed by a Z measurement of qubit
//! `N-1` tells the two cases apart without reading the qubit. In the
//! single-excitation picture that is the two-outcome projection onto
//! `span{|N-1>, |N>}` and its complement; [`oracle`] checks this against the
//! literal gate sequence on the full `2^N` register.
//!
//! Only evolution time is counted: gates and measurements take zero time.

mod monte_carlo;
pub mod oracle;
mod qudit;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainSpec, SingleExcitationState};
use crate::designer::{critical_angle, genest_chain, DEFAULT_TAU0};
use crate::eigen::{eigendecompose_with, Propagator};
use crate::error::{Error, Result};
use crate::revival::pst_speed_limit;
use crate::tolerance::Tolerances;

pub use monte_carlo::{monte_carlo, trial_rng, ProtocolStats, TrialRecord, DEFAULT_MAX_ROUNDS};
pub use qudit::{decode_qudit, encode_qudit, QuditOutcome};

/// Logical qubit `alpha|0> + beta|1>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogicalQubit {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl LogicalQubit {
    /// Requires `|alpha|^2 + |beta|^2 = 1` within `tol`.
    pub fn new(alpha: Complex64, beta: Complex64, tol: f64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm, tolerance: tol });
        }
        Ok(Self { alpha, beta })
    }

    /// Scales `(alpha, beta)` to unit norm.
    pub fn normalized(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized { norm, tolerance: 0.0 });
        }
        Ok(Self {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    pub fn zero() -> Self {
        Self {
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
        }
    }

    pub fn one() -> Self {
        Self {
            alpha: Complex64::new(0.0, 0.0),
            beta: Complex64::new(1.0, 0.0),
        }
    }

    pub fn plus() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { alpha: h, beta: h }
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        (self.alpha.conj() * other.alpha + self.beta.conj() * other.beta).norm_sqr()
    }

    fn components(&self) -> [Complex64; 2] {
        [self.alpha, self.beta]
    }
}

/// `alpha|2> + beta|1>` on a chain of `n >= 4` sites.
pub fn encode(psi: &LogicalQubit, n: usize) -> Result<SingleExcitationState> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!(
            "qubit encoding needs N >= 4 so the encoding and arrival pairs are distinct, got {n}"
        )));
    }
    Ok(encode_unchecked(psi, n))
}

pub(crate) fn encode_unchecked(psi: &LogicalQubit, n: usize) -> SingleExcitationState {
    qudit::place(&psi.components(), n)
}

/// Result of one evolve-and-measure cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundOutcome {
    pub success: bool,
    /// Probability of the arrival outcome (whichever outcome occurred).
    pub success_probability: f64,
    /// Renormalized post-measurement state.
    pub post_state: SingleExcitationState,
    /// Present iff `success`.
    pub decoded: Option<LogicalQubit>,
}

/// A chain prepared for repeated protocol rounds at a fixed revival time.
#[derive(Debug, Clone)]
pub struct MonorailChannel {
    chain: ChainSpec,
    propagator: Propagator,
    tol: Tolerances,
}

impl MonorailChannel {
    pub fn new(chain: ChainSpec, tau0: f64) -> Result<Self> {
        Self::with_tolerances(chain, tau0, Tolerances::default())
    }

    pub fn with_tolerances(chain: ChainSpec, tau0: f64, tol: Tolerances) -> Result<Self> {
        if !(tau0.is_finite() && tau0 > 0.0) {
            return Err(Error::InvalidParameter(format!("revival time must be positive, got {tau0}")));
        }
        let eig = eigendecompose_with(&chain.hamiltonian(), &tol)?;
        let propagator = Propagator::new(&eig, tau0)?;
        Ok(Self {
            chain,
            propagator,
            tol,
        })
    }

    pub fn chain(&self) -> &ChainSpec {
        &self.chain
    }

    pub fn tau0(&self) -> f64 {
        self.propagator.time()
    }

    pub fn n_sites(&self) -> usize {
        self.chain.n_sites()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn propagator(&self) -> &Propagator {
        &self.propagator
    }

    /// One round for an encoded qubit: evolve by `tau0`, then measure arrival
    /// with outcome "arrived" iff `draw < p_success`.
    pub fn round(&self, state: &SingleExcitationState, draw: f64) -> Result<RoundOutcome> {
        let out = self.heralded_round(state, 2, draw)?;
        Ok(qubit_outcome(out))
    }

    /// Evolution followed by arrival projection onto the last `d` sites.
    pub fn heralded_round(&self, state: &SingleExcitationState, d: usize, draw: f64) -> Result<QuditOutcome> {
        qudit::check_dimension(d, self.n_sites())?;
        self.heralded_round_unchecked(state, d, draw)
    }

    pub(crate) fn heralded_round_unchecked(
        &self,
        state: &SingleExcitationState,
        d: usize,
        draw: f64,
    ) -> Result<QuditOutcome> {
        let n = self.n_sites();
        if state.n_sites() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: state.n_sites(),
            });
        }
        let outside = state.norm_sqr() - state.weight_on(1, d);
        if outside > self.tol.support {
            return Err(Error::SupportViolation {
                weight: outside,
                sites: d,
            });
        }
        let evolved = self.propagator.apply(state)?;
        qudit::measure_arrival(&evolved, d, draw)
    }

    /// Repeats rounds until arrival or until `max_rounds` rounds have run.
    ///
    /// After a failed round the post-measurement state is fed back unchanged;
    /// on an FR chain it is the encoded input up to a global phase.
    pub fn run_until_success<R: rand::Rng>(
        &self,
        psi: &LogicalQubit,
        rng: &mut R,
        max_rounds: u64,
    ) -> Result<TrialRecord> {
        if max_rounds == 0 {
            return Err(Error::InvalidParameter("max_rounds must be at least 1".into()));
        }
        let mut state = encode(psi, self.n_sites())?;
        let weight = self.chain.j_max() * self.tau0();
        for round in 1..=max_rounds {
            let draw: f64 = rng.random();
            let out = self.round(&state, draw)?;
            if let Some(decoded) = out.decoded {
                return Ok(TrialRecord {
                    trial: 0,
                    rounds: round,
                    total_time: round as f64 * self.tau0(),
                    weighted_time: round as f64 * weight,
                    fidelity: psi.fidelity(&decoded).min(1.0),
                    truncated: false,
                });
            }
            state = out.post_state;
        }
        Ok(TrialRecord {
            trial: 0,
            rounds: max_rounds,
            total_time: max_rounds as f64 * self.tau0(),
            weighted_time: max_rounds as f64 * weight,
            fidelity: 0.0,
            truncated: true,
        })
    }
}

fn qubit_outcome(out: QuditOutcome) -> RoundOutcome {
    RoundOutcome {
        success: out.success,
        success_probability: out.success_probability,
        post_state: out.post_state,
        decoded: out.decoded.map(|v| LogicalQubit {
            alpha: v[0],
            beta: v[1],
        }),
    }
}

/// `J_max tau0 / sin^2(theta)`: mean weighted arrival time for a geometric
/// number of rounds with success probability `sin^2(theta)`.
pub fn expected_weighted_time(chain: &ChainSpec, theta: f64, tau0: f64) -> Result<f64> {
    if !(theta.is_finite() && theta > 0.0 && theta < PI) {
        return Err(Error::InvalidParameter(format!(
            "expected arrival time diverges unless 0 < theta < pi, got {theta}"
        )));
    }
    Ok(chain.j_max() * tau0 / theta.sin().powi(2))
}

fn check_speedup_n(n: usize) -> Result<()> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "speedup ratio is defined for even N >= 4, got {n}"
        )));
    }
    Ok(())
}

/// Expected weighted arrival time of the closed-form chain at the critical
/// angle divided by the deterministic transfer limit.
pub fn speedup_ratio(n: usize) -> Result<f64> {
    check_speedup_n(n)?;
    let theta = critical_angle(n)?;
    let design = genest_chain(n, theta)?;
    Ok(expected_weighted_time(&design.chain, theta, DEFAULT_TAU0)? / pst_speed_limit(n))
}

/// The same ratio as `(1 - eps) / cos^2(pi eps / 2)` with `theta_c = (pi/2)(1 - eps)`.
pub fn speedup_ratio_epsilon_form(n: usize) -> Result<f64> {
    check_speedup_n(n)?;
    let eps = 1.0 - (2.0 / PI) * critical_angle(n)?;
    Ok((1.0 - eps) / (PI * eps / 2.0).cos().powi(2))
}

/// `P(rounds > k) = cos^(2k)(theta)`.
pub fn tail_probability(theta: f64, k: u32) -> f64 {
    theta.cos().powi(2).powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::revival::detect_revival;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn channel(n: usize, theta: f64) -> MonorailChannel {
        MonorailChannel::new(genest_chain(n, theta).unwrap().chain, DEFAULT_TAU0).unwrap()
    }

    #[test]
    fn encoding_layout() {
        let s = encode(&LogicalQubit::zero(), 6).unwrap();
        assert_eq!(s.amplitude(2), Complex64::new(1.0, 0.0));
        assert_eq!(s.weight_on(1, 6), 1.0);
        let s = encode(&LogicalQubit::one(), 6).unwrap();
        assert_eq!(s.amplitude(1), Complex64::new(1.0, 0.0));
        let s = encode(&LogicalQubit::plus(), 6).unwrap();
        assert!((s.amplitude(1) - s.amplitude(2)).norm() < 1e-16);
        assert!(encode(&LogicalQubit::zero(), 3).is_err());
    }

    #[test]
    fn qubit_validation() {
        let h = Complex64::new(0.5, 0.0);
        assert!(LogicalQubit::new(h, h, 1e-12).is_err());
        let q = LogicalQubit::normalized(h, h).unwrap();
        assert!((q.fidelity(&LogicalQubit::plus()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pst_round_always_arrives() {
        let ch = channel(6, FRAC_PI_2);
        let psi = LogicalQubit::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), 1e-12).unwrap();
        let out = ch.round(&encode(&psi, 6).unwrap(), 0.999_999).unwrap();
        assert!(out.success);
        assert!((out.success_probability - 1.0).abs() < 1e-12);
        assert!((psi.fidelity(&out.decoded.unwrap()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_revival_reset() {
        let ch = channel(6, FRAC_PI_4);
        let psi = LogicalQubit::plus();
        let enc = encode(&psi, 6).unwrap();
        let out = ch.round(&enc, 0.9).unwrap();
        assert!((out.success_probability - 0.5).abs() < 1e-9);
        assert!(!out.success);
        assert!(out.decoded.is_none());
        assert!(out.post_state.distance_up_to_phase(&enc) < 1e-9);
    }

    #[test]
    fn arrival_is_exact() {
        let ch = channel(4, FRAC_PI_3);
        let psi = LogicalQubit::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), 1e-12).unwrap();
        let out = ch.round(&encode(&psi, 4).unwrap(), 0.0).unwrap();
        assert!(out.success);
        assert!((out.success_probability - 0.75).abs() < 1e-9);
        assert!((psi.fidelity(&out.decoded.unwrap()) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn support_contract() {
        let ch = channel(6, FRAC_PI_4);
        let bad = SingleExcitationState::basis(6, 3).unwrap();
        assert!(matches!(ch.round(&bad, 0.5), Err(Error::SupportViolation { .. })));
    }

    #[test]
    fn non_fr_chain_fails_loudly() {
        // after a failed round on a chain without revival the state has
        // spread, and the next round refuses to run
        let chain = ChainSpec::with_zero_fields(vec![1.0, 0.4, 1.3, 0.7, 0.9]).unwrap();
        assert!(detect_revival(&chain, 1.0).unwrap().residual > 1e-3);
        let ch = MonorailChannel::new(chain, 1.0).unwrap();
        let mut rng = trial_rng(1, 0);
        let r = ch.run_until_success(&LogicalQubit::plus(), &mut rng, 100);
        assert!(matches!(r, Err(Error::SupportViolation { .. })));
    }

    #[test]
    fn deterministic_transfer_takes_one_round() {
        let ch = channel(8, FRAC_PI_2);
        for trial in 0..20 {
            let mut rng = trial_rng(7, trial);
            let rec = ch.run_until_success(&LogicalQubit::plus(), &mut rng, 10).unwrap();
            assert_eq!(rec.rounds, 1);
            assert!(!rec.truncated);
            assert!((rec.fidelity - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn truncation_is_flagged() {
        let ch = channel(6, 0.05);
        let mut rng = trial_rng(3, 0);
        let rec = ch.run_until_success(&LogicalQubit::zero(), &mut rng, 1).unwrap();
        // p = sin^2(0.05) ~ 0.0025: one round almost surely fails
        if rec.truncated {
            assert_eq!(rec.rounds, 1);
            assert_eq!(rec.fidelity, 0.0);
        }
        assert!(ch.run_until_success(&LogicalQubit::zero(), &mut rng, 0).is_err());
    }

    #[test]
    fn expected_time_values() {
        let d = genest_chain(6, FRAC_PI_2).unwrap();
        let t = expected_weighted_time(&d.chain, FRAC_PI_2, DEFAULT_TAU0).unwrap();
        assert!((t - d.chain.j_max() * DEFAULT_TAU0).abs() < 1e-14);
        assert!(expected_weighted_time(&d.chain, 0.0, DEFAULT_TAU0).is_err());
        assert!(expected_weighted_time(&d.chain, PI, DEFAULT_TAU0).is_err());

        let tc = critical_angle(8).unwrap();
        let d = genest_chain(8, tc).unwrap();
        // 8 theta_c / (2 sin^2 theta_c), evaluated independently
        let t = expected_weighted_time(&d.chain, tc, DEFAULT_TAU0).unwrap();
        assert!((t - 6.140556721486176).abs() < 1e-12);

        for theta in [1.55, FRAC_PI_2, 1.59] {
            let d = genest_chain(10, theta).unwrap();
            let t = expected_weighted_time(&d.chain, theta, DEFAULT_TAU0).unwrap();
            assert!((t - 10.0 * theta / (2.0 * theta.sin().powi(2))).abs() < 1e-12);
        }
    }

    #[test]
    fn speedup_values() {
        assert!(speedup_ratio(2).is_err());
        assert!(speedup_ratio(7).is_err());
        // closed-form values computed independently
        assert!((speedup_ratio(4).unwrap() - 0.9194826673468524).abs() < 1e-12);
        assert!((speedup_ratio(8).unwrap() - 0.9772999555606877).abs() < 1e-12);
        let mut last = 0.0;
        for n in (4..=64).step_by(2) {
            let a = speedup_ratio(n).unwrap();
            let b = speedup_ratio_epsilon_form(n).unwrap();
            assert!((a - b).abs() < 1e-12);
            assert!(a < 1.0 && a > last);
            last = a;
        }
    }

    #[test]
    fn tail_values() {
        assert_eq!(tail_probability(0.3, 0), 1.0);
        assert!(tail_probability(FRAC_PI_2, 1) < 1e-30);
        assert!((tail_probability(FRAC_PI_4, 3) - 0.125).abs() < 1e-15);
        assert!((tail_probability(FRAC_PI_6, 2) - 0.5625).abs() < 1e-15);
    }
}
