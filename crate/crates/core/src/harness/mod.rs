//! Trial driver and Monte Carlo aggregation.
//!
//! A trial draws Alice's pair uniformly, reveals the codeword to the
//! adversary one bit at a time, decodes the output, and records a validated
//! [`AttackTranscript`]. Campaigns run trials in parallel; trial `k` of a
//! campaign with master seed `s` uses a ChaCha8 generator seeded with `s` on
//! stream `k`, so results depend only on `(s, k)` and never on the worker
//! count or schedule.

mod diagnostics;
mod events;
mod exact;
mod stats;

pub use diagnostics::{b_size_diagnostic, gamma_diagnostic, gamma_fraction, BSizeReport, GAMMA_MAX_B};
pub use events::{compute_events, symmetrization_holds, EventReport};
pub use exact::{exact_symmetry_check, SymmetryReport, EXACT_MAX_N, EXACT_MAX_OUTCOMES, EXACT_MAX_PAIRS};
pub use stats::{TrialStats, TrialSummary, STATS_GAMMA_MAX_B};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::adversary::{AdversaryConfig, CausalAdversary, Strategy};
use crate::bits::BitWord;
use crate::codes::Codebook;
use crate::decoder::{min_distance_decode, DecoderConfig};
use crate::error::{Error, Result};
use crate::transcript::AttackTranscript;

/// Generator for trial `index` of a campaign.
pub fn trial_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub transcript: AttackTranscript,
    pub decoded: usize,
    /// Decoded message differs from the sent one.
    pub error: bool,
}

/// Runs one transmission.
pub fn run_trial(
    cb: &Codebook,
    adv: &mut dyn CausalAdversary,
    cfg: &AdversaryConfig,
    decoder: DecoderConfig,
    rng: &mut ChaCha8Rng,
) -> Result<TrialOutcome> {
    if cb.n() != cfg.n {
        return Err(Error::InvalidConfig(format!(
            "codebook has n = {} but the attack is configured for n = {}",
            cb.n(),
            cfg.n
        )));
    }
    let n = cb.n();
    let alice = cb.draw_pair(rng);
    let x = cb.encode(alice)?.clone();
    adv.reset(rng.next_u64());
    let e = BitWord::from_bits((0..n).map(|i| adv.observe_and_decide(i, x.get(i))));
    let y = x.xor(&e);
    let rec = adv.record();
    let babbles = rec.calvin_pair.is_some();

    let mut transcript = AttackTranscript {
        budget_used: e.weight(),
        x,
        e,
        y,
        ell: rec.ell,
        gamma: rec.gamma,
        alice_pair: alice,
        calvin_pair: rec.calvin_pair,
        intended_error: BitWord::from_bits(rec.intended_error),
        budget: cfg.budget,
        truncated: rec.truncated,
        b_size: rec.b_size,
        events: Default::default(),
    };
    transcript.validate(babbles.then_some(cfg.babble_flips))?;
    if babbles {
        let y1 = transcript.y.slice(0, transcript.ell);
        if y1.distance_to_prefix(&transcript.x) != cfg.babble_flips {
            return Err(Error::Invariant("sent pair is not in B_y1".into()));
        }
        transcript.events = compute_events(&transcript, cb, cfg).flags;
    }

    let radius = decoder.radius_or(cfg.budget);
    let decoded = min_distance_decode(cb, &transcript.y, radius, rng);
    Ok(TrialOutcome {
        error: decoded != alice.u,
        decoded,
        transcript,
    })
}

/// Runs trial `index` of a campaign from scratch.
pub fn run_indexed_trial(
    cb: &Codebook,
    strategy: Strategy,
    cfg: &AdversaryConfig,
    decoder: DecoderConfig,
    master_seed: u64,
    index: u64,
) -> Result<TrialOutcome> {
    let mut adv = strategy.build(cb, cfg);
    let mut rng = trial_rng(master_seed, index);
    run_trial(cb, adv.as_mut(), cfg, decoder, &mut rng)
}

/// Evaluates `f(0..trials)` on `workers` threads, preserving index order.
fn par_indexed<T, F>(trials: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    if workers <= 1 {
        return (0..trials).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| (0..trials).into_par_iter().map(f).collect())
}

/// Runs a campaign and returns every outcome, in trial order.
pub fn run_campaign(
    cb: &Codebook,
    strategy: Strategy,
    cfg: &AdversaryConfig,
    decoder: DecoderConfig,
    trials: u64,
    master_seed: u64,
    workers: usize,
) -> Result<Vec<TrialOutcome>> {
    par_indexed(trials, workers, |k| {
        run_indexed_trial(cb, strategy, cfg, decoder, master_seed, k)
    })
}

/// Runs a campaign and aggregates it.
///
/// Per-trial summaries are folded in trial order, so the result (floating
/// averages included) is identical for every worker count.
pub fn monte_carlo(
    cb: &Codebook,
    strategy: Strategy,
    cfg: &AdversaryConfig,
    decoder: DecoderConfig,
    trials: u64,
    master_seed: u64,
    workers: usize,
) -> Result<TrialStats> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let summaries = par_indexed(trials, workers, |k| {
        let outcome = run_indexed_trial(cb, strategy, cfg, decoder, master_seed, k)?;
        Ok(TrialSummary::from_outcome(&outcome, cb, cfg))
    })?;
    let mut stats = TrialStats::default();
    for s in &summaries {
        stats.absorb(s);
    }
    Ok(stats)
}
