//! Seeded urn simulations for the with-replacement (binomial) and
//! without-replacement (hypergeometric) models.
//!
//! Trials are partitioned into fixed-size logical blocks; block b draws from
//! ChaCha12 stream b of the run seed. Physical workers pick blocks up in any
//! order and histogram merging is integer addition, so the merged result is
//! a function of (seed, trials) alone, the same on 1 worker or 64.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::UrnSpec;

/// Generator recorded in results for cross-build reproducibility.
pub const RNG_ALGORITHM: &str = "chacha12";

const TRIALS_PER_BLOCK: u64 = 4096;

/// Histogram of draw outcomes over all trials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimResult {
    pub urn: UrnSpec,
    pub trials: u64,
    /// n₁ → number of trials that drew exactly n₁ white balls.
    pub histogram: BTreeMap<u64, u64>,
    pub seed: u64,
    pub rng: &'static str,
}

impl SimResult {
    /// Observed mean of n₁.
    pub fn mean(&self) -> f64 {
        let total: f64 = self
            .histogram
            .iter()
            .map(|(&n1, &f)| n1 as f64 * f as f64)
            .sum();
        total / self.trials as f64
    }

    /// Empirical frequency of one outcome.
    pub fn frequency(&self, n1: u64) -> f64 {
        *self.histogram.get(&n1).unwrap_or(&0) as f64 / self.trials as f64
    }
}

fn run_blocks<F>(urn: &UrnSpec, trials: u64, seed: u64, trial: F) -> SimResult
where
    F: Fn(&mut ChaCha12Rng) -> u64 + Sync,
{
    let n_blocks = trials.div_ceil(TRIALS_PER_BLOCK);
    let hist_len = (urn.n() + 1) as usize;
    let merged: Vec<u64> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(b + 1);
            let lo = b * TRIALS_PER_BLOCK;
            let hi = ((b + 1) * TRIALS_PER_BLOCK).min(trials);
            let mut hist = vec![0u64; hist_len];
            for _ in lo..hi {
                hist[trial(&mut rng) as usize] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; hist_len],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let histogram = merged
        .into_iter()
        .enumerate()
        .filter(|&(_, f)| f > 0)
        .map(|(n1, f)| (n1 as u64, f))
        .collect();
    SimResult { urn: *urn, trials, histogram, seed, rng: RNG_ALGORITHM }
}

/// Each trial draws n balls, returning each to the urn: n₁ is binomial with
/// success probability M₁/M. The draw is an exact integer comparison, not a
/// floating-point Bernoulli.
pub fn simulate_with_replacement(urn: &UrnSpec, trials: u64, seed: u64) -> Result<SimResult> {
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let (m, m1, n) = (urn.m(), urn.m1(), urn.n());
    Ok(run_blocks(urn, trials, seed, move |rng| {
        (0..n).filter(|_| rng.random_range(0..m) < m1).count() as u64
    }))
}

/// Each trial draws a uniform n-subset without replacement via partial
/// Fisher–Yates over the implicit index range 0..M (displaced positions kept
/// in a small map, no M-sized allocation). Balls with index < M₁ are white.
pub fn simulate_without_replacement(urn: &UrnSpec, trials: u64, seed: u64) -> Result<SimResult> {
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let (m, m1, n) = (urn.m(), urn.m1(), urn.n());
    if n > m {
        return Err(Error::Domain(format!(
            "cannot draw n = {n} balls without replacement from m = {m}"
        )));
    }
    Ok(run_blocks(urn, trials, seed, move |rng| {
        let mut displaced: HashMap<u64, u64> = HashMap::with_capacity(n as usize * 2);
        let mut n1 = 0u64;
        for i in 0..n {
            let j = rng.random_range(i..m);
            let ball_j = *displaced.get(&j).unwrap_or(&j);
            if i != j {
                let ball_i = *displaced.get(&i).unwrap_or(&i);
                displaced.insert(j, ball_i);
            }
            if ball_j < m1 {
                n1 += 1;
            }
        }
        displaced.clear();
        n1
    }))
}
