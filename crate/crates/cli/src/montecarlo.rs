//! Sampling cross-check of exact sequential probabilities.

use incompat_core::measure::{Event, MeasurementSystem};
use incompat_core::seed::rng_for;
use incompat_core::{rational, Error, Rational, Result};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub trials: u64,
    pub hits: u64,
    pub estimate: f64,
    #[serde(with = "rational::json")]
    pub exact: Rational,
    /// `4 sqrt(p (1 - p) / trials)` at the exact `p`.
    pub bound: f64,
    pub within_bound: bool,
}

/// Runs the events in order, stopping at the first one not reported.
/// `None` when a measurement found an empty pool.
fn run_events<R: Rng>(
    sys: &MeasurementSystem,
    config: &mut incompat_core::measure::Configuration,
    events: &[Event],
    rng: &mut R,
) -> Result<bool> {
    for e in events {
        match sys.sample_step(config, &e.variable, rng) {
            Ok((value, next)) => {
                if value != e.value {
                    return Ok(false);
                }
                *config = next;
            }
            Err(Error::EmptyPool) => return Ok(false),
            Err(other) => return Err(other),
        }
    }
    Ok(true)
}

fn one_trial(sys: &MeasurementSystem, prep: &[Event], seq: &[Event], seed: u64, t: u64) -> Result<bool> {
    let mut rng = rng_for(seed, t);
    let initial = sys.initial();
    loop {
        let mut config = initial[rng.random_range(0..initial.len())].clone();
        // Redraw the whole run until every preparation event is reported.
        if !run_events(sys, &mut config, prep, &mut rng)? {
            continue;
        }
        return run_events(sys, &mut config, seq, &mut rng);
    }
}

/// Estimates `Pr(seq)` after preparing by `prep` from the initial state.
/// Trial `t` uses its own sub-seed, so the count does not depend on
/// scheduling.
pub fn monte_carlo_estimate(
    sys: &MeasurementSystem,
    prep: &[Event],
    seq: &[Event],
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let sigma = sys.prepare(prep)?;
    let exact = sys.sequence_prob(&sigma, seq)?;
    let hits = (0..trials)
        .into_par_iter()
        .map(|t| one_trial(sys, prep, seq, seed, t).map(u64::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let p = rational::to_f64(&exact);
    let estimate = hits as f64 / trials as f64;
    let bound = 4.0 * (p * (1.0 - p) / trials as f64).sqrt();
    Ok(McEstimate {
        trials,
        hits,
        estimate,
        exact,
        bound,
        within_bound: (estimate - p).abs() <= bound,
    })
}
