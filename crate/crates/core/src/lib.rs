//! Rebit-embedded direct state measurement: state embedding, interaction
//! unitaries, tomographic estimators and Monte Carlo budget simulation.

pub mod coupling;
pub mod error;
pub mod montecarlo;
pub mod qmath;
pub mod rebit;
pub mod tomography;

pub use error::{Error, Result};
pub use montecarlo::{
    run_batches, AggregateResult, BatchMode, BudgetMode, ProtocolConfig, SampleBudget, Sampling, StateSource,
    TrialOutcome, TrueState,
};
pub use qmath::{CMatrix, CVector, Cplx, Prng, PureMode};
pub use tomography::{Protocol, ReconResult};
