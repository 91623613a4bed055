//! Brute-force check of the single-excitation protocol on the full `2^N`
//! register.
//!
//! The oracle builds the XY Hamiltonian on all `N` qubits, evolves with a
//! scaled Taylor series (no eigendecomposition), and applies the literal gate
//! sequence: a CNOT from qubit 1 onto qubit 2 that fires when qubit 1 is
//! `|0>`, evolution for `tau0`, a CNOT from qubit `N` onto qubit `N-1`, and a
//! Z measurement of qubit `N-1` driven by the same random draws as the reduced
//! simulation. Both measurement branches are compared at every round; the
//! sampled one is followed.
//!
//! Qubit `q` (1-based) is bit `q - 1` of the register index.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{encode_unchecked, trial_rng, LogicalQubit, MonorailChannel};
use crate::chain::{ChainSpec, SingleExcitationState};
use crate::designer::{symmetric_design, DEFAULT_TAU0};
use crate::error::{Error, Result};

/// Largest register the oracle will build.
pub const MAX_ORACLE_SITES: usize = 12;

/// Branches rarer than this are not compared; renormalization would only
/// amplify rounding noise.
const BRANCH_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub n: usize,
    pub tau0: f64,
    pub rounds: u64,
    pub seed: u64,
    /// Largest amplitude or probability mismatch over all rounds and branches.
    pub max_deviation: f64,
    /// Largest norm found outside the single-excitation sector after evolution.
    pub max_sector_leakage: f64,
    /// Largest weight of a failure branch outside sites 1 and 2.
    pub max_reset_leakage: f64,
    /// Largest distance of a failure branch from the re-encoded input, up to phase.
    pub max_reset_deviation: f64,
    /// Global round numbers (1-based) at which arrival was heralded.
    pub arrivals: Vec<u64>,
    /// Smallest fidelity of qubit `N` with the input over the arrivals.
    pub min_arrival_fidelity: f64,
}

/// Full-register XY Hamiltonian.
#[derive(Debug, Clone)]
pub struct FullHamiltonian {
    n: usize,
    couplings: Vec<f64>,
    fields: Vec<f64>,
}

impl FullHamiltonian {
    pub fn new(chain: &ChainSpec) -> Result<Self> {
        let n = chain.n_sites();
        if n > MAX_ORACLE_SITES {
            return Err(Error::InvalidParameter(format!(
                "full-register oracle is capped at {MAX_ORACLE_SITES} qubits, got {n}"
            )));
        }
        Ok(Self {
            n,
            couplings: chain.couplings().to_vec(),
            fields: chain.fields().to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// `H = 1/2 sum J_m (X_m X_{m+1} + Y_m Y_{m+1}) - 1/2 sum B_m Z_m` applied to `psi`.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        for (idx, &a) in psi.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let diag: f64 = self
                .fields
                .iter()
                .enumerate()
                .map(|(m, b)| if idx >> m & 1 == 0 { -0.5 * b } else { 0.5 * b })
                .sum();
            out[idx] += a * diag;
            // (XX + YY)/2 swaps |01> and |10> on each bond
            for (m, j) in self.couplings.iter().enumerate() {
                if (idx >> m & 1) != (idx >> (m + 1) & 1) {
                    out[idx ^ (0b11 << m)] += a * *j;
                }
            }
        }
        out
    }

    fn norm_bound(&self) -> f64 {
        self.couplings.iter().sum::<f64>() + 0.5 * self.fields.iter().map(|b| b.abs()).sum::<f64>()
    }

    /// `e^{-iHt} psi` by Taylor series on sub-steps with `|H dt| <= 1/2`.
    pub fn evolve(&self, psi: &[Complex64], t: f64) -> Vec<Complex64> {
        let steps = ((self.norm_bound() * t.abs()) / 0.5).ceil().max(1.0) as usize;
        let dt = t / steps as f64;
        let mut state = psi.to_vec();
        for _ in 0..steps {
            let mut term = state.clone();
            let mut acc = state.clone();
            for k in 1..=40 {
                term = self.apply(&term);
                let scale = Complex64::new(0.0, -dt / k as f64);
                let mut largest = 0.0f64;
                for (t, a) in term.iter_mut().zip(acc.iter_mut()) {
                    *t *= scale;
                    *a += *t;
                    largest = largest.max(t.norm());
                }
                if largest < 1e-20 {
                    break;
                }
            }
            state = acc;
        }
        state
    }
}

fn bit(q: usize) -> usize {
    1 << (q - 1)
}

/// CNOT with 1-based control and target; the target flips when the control
/// reads `control_value`.
fn controlled_not(psi: &mut [Complex64], control: usize, target: usize, control_value: bool) {
    let (c, t) = (bit(control), bit(target));
    for idx in 0..psi.len() {
        if ((idx & c) != 0) == control_value && idx & t == 0 {
            psi.swap(idx, idx | t);
        }
    }
}

fn single_excitation_index(site: usize) -> usize {
    bit(site)
}

/// Embeds single-excitation amplitudes into the full register.
fn embed(state: &SingleExcitationState, dim: usize, phase: Complex64) -> Vec<Complex64> {
    let mut full = vec![Complex64::new(0.0, 0.0); dim];
    for site in 1..=state.n_sites() {
        full[single_excitation_index(site)] = state.amplitude(site) * phase;
    }
    full
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn project_qubit(psi: &[Complex64], q: usize, value: bool) -> (f64, Vec<Complex64>) {
    let b = bit(q);
    let projected: Vec<Complex64> = psi
        .iter()
        .enumerate()
        .map(|(idx, a)| if ((idx & b) != 0) == value { *a } else { Complex64::new(0.0, 0.0) })
        .collect();
    let p: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
    (p, projected)
}

fn normalize(mut v: Vec<Complex64>, p: f64) -> Vec<Complex64> {
    let s = 1.0 / p.sqrt();
    v.iter_mut().for_each(|a| *a *= s);
    v
}

/// Runs the oracle for the symmetric FR chain of length `n` and angle `theta`
/// (closed form for even `n`, spectral design for odd `n`) at `tau0 = pi/2`.
pub fn full_space_oracle(n: usize, theta: f64, psi: &LogicalQubit, n_rounds: u64, seed: u64) -> Result<OracleReport> {
    if n > MAX_ORACLE_SITES {
        return Err(Error::InvalidParameter(format!(
            "full-register oracle is capped at {MAX_ORACLE_SITES} qubits, got {n}"
        )));
    }
    let design = symmetric_design(n, theta)?;
    full_space_oracle_for_chain(&design.chain, DEFAULT_TAU0, psi, n_rounds, seed)
}

/// Runs `n_rounds` protocol rounds on both representations. After an arrival
/// the next round starts a fresh trial on the next random stream.
pub fn full_space_oracle_for_chain(
    chain: &ChainSpec,
    tau0: f64,
    psi: &LogicalQubit,
    n_rounds: u64,
    seed: u64,
) -> Result<OracleReport> {
    let full = FullHamiltonian::new(chain)?;
    let channel = MonorailChannel::new(chain.clone(), tau0)?;
    let n = chain.n_sites();
    let dim = full.dim();
    // the full Hamiltonian carries -1/2 sum B on the single-excitation sector
    let vacuum_shift = Complex64::from_polar(1.0, 0.5 * chain.fields().iter().sum::<f64>() * tau0);

    let mut report = OracleReport {
        n,
        tau0,
        rounds: n_rounds,
        seed,
        max_deviation: 0.0,
        max_sector_leakage: 0.0,
        max_reset_leakage: 0.0,
        max_reset_deviation: 0.0,
        arrivals: Vec::new(),
        min_arrival_fidelity: 1.0,
    };
    let encoded = encode_unchecked(psi, n);

    let mut trial = 0u64;
    let mut rng = trial_rng(seed, trial);
    let mut reduced = encoded.clone();
    let mut register = prepare_register(psi, n);
    let mut phase = Complex64::new(1.0, 0.0);

    for round in 1..=n_rounds {
        let draw: f64 = rng.random();

        // step 3: evolve
        let evolved_reduced = channel.propagator().apply(&reduced)?;
        let evolved_full = full.evolve(&register, tau0);
        phase *= vacuum_shift;
        let expected = embed(&evolved_reduced, dim, phase);
        report.max_deviation = report.max_deviation.max(max_diff(&evolved_full, &expected));
        let leak = evolved_full
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx.count_ones() != 1)
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            .sqrt();
        report.max_sector_leakage = report.max_sector_leakage.max(leak);

        // steps 4-5: decode CNOT, then measure qubit N-1
        let mut decoded_full = evolved_full;
        if n >= 2 {
            controlled_not(&mut decoded_full, n, n - 1, true);
        }
        let (p_full, arrived_full) = project_qubit(&decoded_full, n - 1, true);
        let (q_full, missed_full) = project_qubit(&decoded_full, n - 1, false);

        let hit = channel.heralded_round_unchecked(&reduced, 2, 0.0)?;
        let p_reduced = hit.success_probability;
        report.max_deviation = report.max_deviation.max((p_full - p_reduced).abs());

        if p_reduced > BRANCH_FLOOR {
            // qubit N-1 reads 1, qubit N holds the decoded qubit
            let dec = hit.decoded.as_ref().expect("success branch carries a decoded state");
            let mut want = vec![Complex64::new(0.0, 0.0); dim];
            want[bit(n - 1)] = dec[0] * phase;
            want[bit(n - 1) | bit(n)] = dec[1] * phase;
            report.max_deviation = report
                .max_deviation
                .max(max_diff(&normalize(arrived_full.clone(), p_full), &want));
        }
        let mut miss = None;
        if 1.0 - p_reduced > BRANCH_FLOOR {
            let m = channel.heralded_round_unchecked(&reduced, 2, 1.0)?;
            let want = embed(&m.post_state, dim, phase);
            let got = normalize(missed_full.clone(), q_full);
            report.max_deviation = report.max_deviation.max(max_diff(&got, &want));
            let off_encoding: f64 = got
                .iter()
                .enumerate()
                .filter(|&(idx, _)| idx != bit(1) && (n < 2 || idx != bit(2)))
                .map(|(_, a)| a.norm_sqr())
                .sum();
            report.max_reset_leakage = report.max_reset_leakage.max(off_encoding);
            report.max_reset_deviation = report
                .max_reset_deviation
                .max(m.post_state.distance_up_to_phase(&encoded));
            miss = Some((m.post_state, got));
        }

        // step 6: follow the sampled branch
        if draw < p_reduced {
            let state = normalize(arrived_full, p_full);
            let out = LogicalQubit::normalized(state[bit(n - 1)], state[bit(n - 1) | bit(n)])?;
            report.min_arrival_fidelity = report.min_arrival_fidelity.min(psi.fidelity(&out));
            report.arrivals.push(round);
            trial += 1;
            rng = trial_rng(seed, trial);
            reduced = encoded.clone();
            register = prepare_register(psi, n);
            phase = Complex64::new(1.0, 0.0);
        } else {
            let (post, full_post) = miss.ok_or_else(|| {
                Error::InvalidParameter("draw selected a failure branch of zero probability".into())
            })?;
            reduced = post;
            register = full_post;
        }
    }
    Ok(report)
}

/// Steps 1-2: `psi` on qubit 1, then CNOT onto qubit 2 conditioned on qubit 1 being `|0>`.
fn prepare_register(psi: &LogicalQubit, n: usize) -> Vec<Complex64> {
    let mut reg = vec![Complex64::new(0.0, 0.0); 1 << n];
    reg[0] = psi.alpha;
    reg[bit(1)] = psi.beta;
    controlled_not(&mut reg, 1, 2, false);
    reg
}
