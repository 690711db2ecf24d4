//! Repeated trials and their aggregation.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qmath::{nearly_pure, random_mixed, random_pure, Prng, PureMode};
use crate::tomography::Protocol;

use super::budget::{BatchMode, SampleBudget};
use super::simulate::{simulate, Sampling, TrialOutcome, TrialSpec, TrueState};

/// Where trial states come from.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSource {
    Fixed(TrueState),
    RandomPure {
        d: usize,
        mode: PureMode,
    },
    RandomMixed {
        d: usize,
    },
    /// `(1 - nu) |psi><psi| + nu I / d` around a Haar-random `psi`.
    NearlyPure {
        d: usize,
        nu: f64,
    },
}

impl StateSource {
    pub fn dim(&self) -> usize {
        match self {
            StateSource::Fixed(s) => s.dim(),
            StateSource::RandomPure { d, .. } | StateSource::RandomMixed { d } | StateSource::NearlyPure { d, .. } => {
                *d
            }
        }
    }

    pub fn draw(&self, prng: &mut Prng) -> Result<TrueState> {
        Ok(match self {
            StateSource::Fixed(s) => s.clone(),
            StateSource::RandomPure { d, mode } => TrueState::Pure(random_pure(*d, *mode, prng)),
            StateSource::RandomMixed { d } => TrueState::Mixed(random_mixed(*d, prng)),
            StateSource::NearlyPure { d, nu } => {
                let psi = random_pure(*d, PureMode::Haar, prng);
                TrueState::Mixed(nearly_pure(&psi, *nu)?)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub protocol: Protocol,
    pub theta: f64,
    pub budget: SampleBudget,
    pub sampling: Sampling,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateResult {
    pub config: ProtocolConfig,
    pub mean: f64,
    /// Sample standard deviation over trials.
    pub std: f64,
    pub outcomes: Vec<TrialOutcome>,
}

impl AggregateResult {
    pub fn std_error(&self) -> f64 {
        self.std / (self.outcomes.len() as f64).sqrt()
    }

    pub fn min(&self) -> f64 {
        self.outcomes.iter().map(|o| o.trace_dist).fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.outcomes
            .iter()
            .map(|o| o.trace_dist)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Substream of a trial stream that draws the trial's state. Shared by all
/// protocols so that they see the same states.
const STATE_STREAM: u64 = 0;
/// Substream of the master stream that draws the fixed-state-mode state.
const FIXED_STATE_STREAM: u64 = u64::MAX;

fn sampling_stream(trial: &Prng, protocol: Protocol) -> Prng {
    trial.substream(1 + protocol.code())
}

/// Run `M` trials in parallel. Trial `k` uses substream `k` of the master
/// seed, so adding or removing other trials never changes its result.
pub fn run_batches(config: &ProtocolConfig, source: &StateSource, seed: u64) -> Result<AggregateResult> {
    let budget = config.budget;
    let master = Prng::new(seed);
    let fixed = match budget.batch_mode() {
        BatchMode::FixedState => Some(source.draw(&mut master.substream(FIXED_STATE_STREAM))?),
        BatchMode::Paper => None,
    };
    let spec = TrialSpec {
        copies: budget.copies_per_trial(),
        budget_mode: budget.budget_mode(),
        sampling: config.sampling,
    };
    let outcomes = (0..budget.batches())
        .into_par_iter()
        .map(|k| {
            let trial = master.substream(k as u64);
            let state = match &fixed {
                Some(s) => s.clone(),
                None => source.draw(&mut trial.substream(STATE_STREAM))?,
            };
            let mut prng = sampling_stream(&trial, config.protocol);
            simulate(config.protocol, &state, config.theta, &spec, &mut prng)
        })
        .collect::<Result<Vec<_>>>()?;
    aggregate(*config, outcomes)
}

fn aggregate(config: ProtocolConfig, outcomes: Vec<TrialOutcome>) -> Result<AggregateResult> {
    let m = outcomes.len();
    if m == 0 {
        return Err(Error::BudgetTooSmall("no trials".into()));
    }
    let mean = outcomes.iter().map(|o| o.trace_dist).sum::<f64>() / m as f64;
    let std = if m > 1 {
        let ss: f64 = outcomes.iter().map(|o| (o.trace_dist - mean).powi(2)).sum();
        (ss / (m - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(AggregateResult {
        config,
        mean,
        std,
        outcomes,
    })
}
