//! Copy budgets and their integer allocation.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// How pure-state protocols allocate copies to the probe index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BudgetMode {
    /// `floor(N P0 / d)` copies per `n` with `P0 = 1/d`. The rest of the
    /// budget is left unused.
    #[default]
    PaperP0,
    /// The whole budget split evenly over `n`; each copy is accepted with its
    /// true postselection probability.
    PhysicalNorm,
}

/// How the copy budget and states relate across trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BatchMode {
    /// Fresh state per trial, `N_c / M` copies each.
    #[default]
    Paper,
    /// Same state every trial, `N_c` copies each.
    FixedState,
}

impl fmt::Display for BudgetMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BudgetMode::PaperP0 => "paper",
            BudgetMode::PhysicalNorm => "physical",
        })
    }
}

impl FromStr for BudgetMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "paper" | "paper_P0" | "paper_p0" => Ok(BudgetMode::PaperP0),
            "physical" | "physical_norm" => Ok(BudgetMode::PhysicalNorm),
            other => Err(format!("unknown budget mode '{other}' (expected paper|physical)")),
        }
    }
}

impl fmt::Display for BatchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BatchMode::Paper => "paper",
            BatchMode::FixedState => "fixed-state",
        })
    }
}

impl FromStr for BatchMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "paper" => Ok(BatchMode::Paper),
            "fixed-state" | "fixed_state" | "fixed" => Ok(BatchMode::FixedState),
            other => Err(format!("unknown batch mode '{other}' (expected paper|fixed-state)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SampleBudget {
    total_copies: u64,
    batches: usize,
    budget_mode: BudgetMode,
    batch_mode: BatchMode,
}

impl SampleBudget {
    pub fn new(total_copies: u64, batches: usize, budget_mode: BudgetMode, batch_mode: BatchMode) -> Result<Self> {
        if batches == 0 || total_copies < batches as u64 {
            return Err(Error::BudgetTooSmall(format!(
                "{total_copies} copies cannot cover {batches} batches"
            )));
        }
        Ok(Self {
            total_copies,
            batches,
            budget_mode,
            batch_mode,
        })
    }

    pub fn total_copies(&self) -> u64 {
        self.total_copies
    }

    pub fn batches(&self) -> usize {
        self.batches
    }

    pub fn budget_mode(&self) -> BudgetMode {
        self.budget_mode
    }

    pub fn batch_mode(&self) -> BatchMode {
        self.batch_mode
    }

    pub fn copies_per_trial(&self) -> u64 {
        match self.batch_mode {
            BatchMode::Paper => self.total_copies / self.batches as u64,
            BatchMode::FixedState => self.total_copies,
        }
    }
}

/// Floor division with the remainder handed out one by one to the lowest
/// indices.
pub fn split_even(total: u64, parts: usize) -> Vec<u64> {
    assert!(parts > 0, "split_even needs at least one part");
    let base = total / parts as u64;
    let extra = (total % parts as u64) as usize;
    (0..parts).map(|k| base + u64::from(k < extra)).collect()
}
