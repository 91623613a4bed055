//! Seeded Monte Carlo over independent protocol trials.
//!
//! Trial `i` draws from ChaCha8 stream `i` of the seed, one draw per round, so
//! `(seed, trial, round)` fixes every measurement regardless of how trials are
//! scheduled across threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{LogicalQubit, MonorailChannel};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_ROUNDS: u64 = 1_000_000;

/// Random stream for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub rounds: u64,
    /// `rounds * tau0`.
    pub total_time: f64,
    /// `J_max * total_time`.
    pub weighted_time: f64,
    /// `|<psi|psi_out>|^2`; zero for truncated trials.
    pub fidelity: f64,
    /// The round budget ran out before arrival.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolStats {
    #[serde(rename = "trials")]
    pub n_trials: u64,
    pub mean_rounds: f64,
    pub mean_weighted_time: f64,
    /// Standard error of `mean_rounds`.
    pub std_error: f64,
    /// Over arrived trials; 1 when none arrived.
    pub min_fidelity: f64,
    /// `(k, fraction of trials needing more than k rounds)` for `k = 0..=max rounds`.
    #[serde(rename = "tail")]
    pub empirical_tail: Vec<(u64, f64)>,
    pub truncated: u64,
}

impl ProtocolStats {
    pub fn tail_at(&self, k: u64) -> f64 {
        self.empirical_tail
            .iter()
            .find(|(kk, _)| *kk == k)
            .map_or(0.0, |(_, f)| *f)
    }
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Runs `n_trials` independent trials in parallel and aggregates them in trial order.
pub fn monte_carlo(
    psi: &LogicalQubit,
    channel: &MonorailChannel,
    n_trials: u64,
    seed: u64,
    max_rounds: u64,
) -> Result<(ProtocolStats, Vec<TrialRecord>)> {
    if n_trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is required".into()));
    }
    let records = (0..n_trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            channel
                .run_until_success(psi, &mut rng, max_rounds)
                .map(|r| TrialRecord { trial, ..r })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((aggregate(&records), records))
}

fn aggregate(records: &[TrialRecord]) -> ProtocolStats {
    let n = records.len() as f64;
    let mut rounds = CompensatedSum::default();
    let mut weighted = CompensatedSum::default();
    for r in records {
        rounds.add(r.rounds as f64);
        weighted.add(r.weighted_time);
    }
    let mean_rounds = rounds.value() / n;
    let mut sq = CompensatedSum::default();
    for r in records {
        sq.add((r.rounds as f64 - mean_rounds).powi(2));
    }
    let variance = if records.len() > 1 { sq.value() / (n - 1.0) } else { 0.0 };

    let max_rounds = records.iter().map(|r| r.rounds).max().unwrap_or(0);
    let mut exceed = vec![0u64; max_rounds as usize + 1];
    for r in records {
        // a trial with r rounds exceeds every k < r
        for slot in exceed.iter_mut().take(r.rounds as usize) {
            *slot += 1;
        }
    }
    let empirical_tail = exceed
        .iter()
        .enumerate()
        .map(|(k, &c)| (k as u64, c as f64 / n))
        .collect();

    ProtocolStats {
        n_trials: records.len() as u64,
        mean_rounds,
        mean_weighted_time: weighted.value() / n,
        std_error: (variance / n).sqrt(),
        min_fidelity: records
            .iter()
            .filter(|r| !r.truncated)
            .map(|r| r.fidelity)
            .fold(1.0, f64::min),
        empirical_tail,
        truncated: records.iter().filter(|r| r.truncated).count() as u64,
    }
}
