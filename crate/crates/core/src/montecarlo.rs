//! Ground-truth channel simulator.
//!
//! Each trial draws Rayleigh power gains, applies the splitting, harvesting,
//! decoding and selection rules literally, and flags outage. Trials are keyed
//! to `(seed, trial_index)` through per-trial ChaCha streams, so estimates are
//! bit-identical regardless of how trials are partitioned across workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::model::SystemConfig;

/// Trials per rayon work item. Purely a scheduling granularity: results do
/// not depend on it.
const TRIAL_BATCH: u64 = 8192;

/// Outcome of a single channel realization.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    /// Indices of relays whose first-hop SINR met the threshold.
    pub decoding_set: Vec<usize>,
    /// Relay chosen by opportunistic selection, if any decoded.
    pub selected_relay: Option<usize>,
    /// Destination SNR of the selected relay (0 when none decoded).
    pub dest_snr: f64,
    pub is_outage: bool,
}

/// Empirical outage probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    pub n_trials: u64,
    pub stderr: f64,
    pub seed: u64,
}

/// Counters accumulated over a simulation run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimStats {
    pub n_trials: u64,
    pub outages: u64,
    /// Trials in which relay 0 decoded the first hop.
    pub first_relay_decoded: u64,
    /// Histogram of decoding-set sizes, indexed 0..=relays.
    pub set_size_hist: Vec<u64>,
}

impl SimStats {
    fn zero(relays: usize) -> Self {
        SimStats {
            n_trials: 0,
            outages: 0,
            first_relay_decoded: 0,
            set_size_hist: vec![0; relays + 1],
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.n_trials += other.n_trials;
        self.outages += other.outages;
        self.first_relay_decoded += other.first_relay_decoded;
        for (a, b) in self.set_size_hist.iter_mut().zip(&other.set_size_hist) {
            *a += b;
        }
        self
    }
}

/// Fills `scratch` with the trial's 3L squared channel gains in the pinned
/// order: first hops, then second hops, then interference. Exactly one
/// uniform word is consumed per gain, even for zero-variance channels, so
/// the stream position is mode-independent.
pub(crate) fn trial_draws(
    config: &SystemConfig,
    seed: u64,
    trial_index: u64,
    scratch: &mut Vec<f64>,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    scratch.clear();
    let relays = config.relays;
    scratch.reserve(3 * relays);
    for mean in [
        config.first_hop_var,
        config.second_hop_var,
        config.interference_var,
    ] {
        for _ in 0..relays {
            let u: f64 = rng.random();
            scratch.push(if mean > 0.0 {
                -mean * (1.0 - u).ln()
            } else {
                0.0
            });
        }
    }
}

struct TrialEval {
    decoded: u32,
    first_relay_decoded: bool,
    best_relay: Option<usize>,
    best_snr: f64,
    is_outage: bool,
}

fn eval_trial(config: &SystemConfig, scratch: &[f64]) -> TrialEval {
    let relays = config.relays;
    let kept = 1.0 - config.split_ratio;
    let harvested = config.harvest_efficiency * config.split_ratio;

    let mut decoded = 0u32;
    let mut first_relay_decoded = false;
    let mut best_relay = None;
    let mut best_snr = 0.0f64;

    for i in 0..relays {
        let h2 = scratch[i];
        let g2 = scratch[relays + i];
        let b2 = scratch[2 * relays + i];
        let sinr = kept * config.source_power * h2
            / (config.relay_noise + kept * config.interferer_power * b2);
        if sinr >= config.snr_threshold {
            decoded += 1;
            if i == 0 {
                first_relay_decoded = true;
            }
            let relay_power = harvested * (config.source_power * h2 + config.interferer_power * b2);
            let dest_snr = relay_power * g2 / config.dest_noise;
            // Strict comparison keeps the lowest index on ties.
            if best_relay.is_none() || dest_snr > best_snr {
                best_relay = Some(i);
                best_snr = dest_snr;
            }
        }
    }
    let is_outage = decoded == 0 || best_snr < config.snr_threshold;
    TrialEval {
        decoded,
        first_relay_decoded,
        best_relay,
        best_snr,
        is_outage,
    }
}

/// Simulates one trial and reports the full outcome.
pub fn sample_trial(config: &SystemConfig, seed: u64, trial_index: u64) -> TrialOutcome {
    let mut scratch = Vec::new();
    trial_draws(config, seed, trial_index, &mut scratch);
    let eval = eval_trial(config, &scratch);

    let kept = 1.0 - config.split_ratio;
    let decoding_set: Vec<usize> = (0..config.relays)
        .filter(|&i| {
            let sinr = kept * config.source_power * scratch[i]
                / (config.relay_noise
                    + kept * config.interferer_power * scratch[2 * config.relays + i]);
            sinr >= config.snr_threshold
        })
        .collect();
    TrialOutcome {
        decoding_set,
        selected_relay: eval.best_relay,
        dest_snr: if eval.best_relay.is_some() {
            eval.best_snr
        } else {
            0.0
        },
        is_outage: eval.is_outage,
    }
}

/// Runs `n_trials` independent trials and accumulates counters. The result
/// is a pure function of `(config, n_trials, seed)`.
pub fn simulate_stats(config: &SystemConfig, n_trials: u64, seed: u64) -> SimStats {
    let batches = n_trials.div_ceil(TRIAL_BATCH);
    (0..batches)
        .into_par_iter()
        .map(|batch| {
            let lo = batch * TRIAL_BATCH;
            let hi = (lo + TRIAL_BATCH).min(n_trials);
            let mut acc = SimStats::zero(config.relays);
            let mut scratch = Vec::with_capacity(3 * config.relays);
            for index in lo..hi {
                trial_draws(config, seed, index, &mut scratch);
                let eval = eval_trial(config, &scratch);
                acc.n_trials += 1;
                acc.outages += eval.is_outage as u64;
                acc.first_relay_decoded += eval.first_relay_decoded as u64;
                acc.set_size_hist[eval.decoded as usize] += 1;
            }
            acc
        })
        .reduce(|| SimStats::zero(config.relays), SimStats::merge)
}

/// Estimates the outage probability empirically.
pub fn estimate_outage(config: &SystemConfig, n_trials: u64, seed: u64) -> OutageEstimate {
    let stats = simulate_stats(config, n_trials, seed);
    estimate_from_stats(&stats, seed)
}

pub(crate) fn estimate_from_stats(stats: &SimStats, seed: u64) -> OutageEstimate {
    let n = stats.n_trials;
    let p_hat = stats.outages as f64 / n as f64;
    OutageEstimate {
        p_hat,
        n_trials: n,
        stderr: (p_hat * (1.0 - p_hat) / n as f64).sqrt(),
        seed,
    }
}
