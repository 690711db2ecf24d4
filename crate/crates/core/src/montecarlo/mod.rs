//! Finite-copy simulation: sampling, budgets, trials and batches.

mod batch;
mod budget;
mod sampling;
mod simulate;

pub use batch::{run_batches, AggregateResult, ProtocolConfig, StateSource};
pub use budget::{split_even, BatchMode, BudgetMode, SampleBudget};
pub use sampling::{categorical_sample, Cdf};
pub use simulate::{simulate, simulate_mixed, simulate_pure, Sampling, TrialOutcome, TrialSpec, TrueState};
