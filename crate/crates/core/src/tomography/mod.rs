//! Reconstruction protocols: forward probability models and estimators.
//!
//! Every protocol is split into a forward model producing a [`ProbTable`] of
//! exact probabilities and an estimator inverting such a table. The Monte
//! Carlo engine swaps the exact table for observed frequencies.

mod mixed;
mod mub;
mod pure;
mod settings;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qmath::{min_eigenvalue, trace_distance, CMatrix, Cplx};

pub use mixed::{
    bbb_extract, dsm_mixed_estimate, dsm_mixed_forward, dsm_mixed_table, extract_elements, redsm_mixed_estimate,
    redsm_mixed_preparation_table, redsm_mixed_tables, ssb_extract, MixedScheme, OutcomeElements,
};
pub use mub::{mub_bases, mub_qst_estimate, mub_table};
pub use pure::{
    dsm_pure_estimate, dsm_pure_forward, dsm_pure_table, pointer_coherence, redsm_pure_estimate,
    redsm_pure_estimate_from_table, redsm_pure_table,
};
pub use settings::{setting, MeasurementSetting, SettingId, BASIS_TOL, BBB_SETTINGS, POINTER_SETTINGS, SSB_SETTINGS};

/// `(n, j, setting)` addressing one branch of one measurement setting.
///
/// Pure protocols always use `j = 0`; MUB tomography uses `n = j = 0`.
pub type CellKey = (usize, usize, SettingId);

/// Outcome probabilities (exact mode) or frequencies (sampled mode) per cell.
///
/// Entries of a cell are joint probabilities of reaching that branch and
/// observing each outcome, conditioned on the setting only.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProbTable {
    cells: BTreeMap<CellKey, Vec<f64>>,
    copies: BTreeMap<CellKey, u64>,
}

impl ProbTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, n: usize, j: usize, setting: SettingId, probs: Vec<f64>) {
        self.cells.insert((n, j, setting), probs);
    }

    /// Store `counts / copies` and remember the copy count.
    pub fn insert_counts(&mut self, n: usize, j: usize, setting: SettingId, counts: &[u64], copies: u64) {
        let scale = if copies == 0 { 0.0 } else { 1.0 / copies as f64 };
        self.cells
            .insert((n, j, setting), counts.iter().map(|&c| c as f64 * scale).collect());
        self.copies.insert((n, j, setting), copies);
    }

    pub fn get(&self, n: usize, j: usize, setting: SettingId) -> Result<&[f64]> {
        self.cells
            .get(&(n, j, setting))
            .map(Vec::as_slice)
            .ok_or_else(|| Error::MissingSetting(format!("{setting} for n={n}, j={j}")))
    }

    /// Copies spent in the cell, if it came from sampling.
    pub fn copies(&self, n: usize, j: usize, setting: SettingId) -> Option<u64> {
        self.copies.get(&(n, j, setting)).copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CellKey, &Vec<f64>)> {
        self.cells.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Protocol {
    RedsmPure,
    DsmPure,
    RedsmSsb,
    RedsmBbb,
    DsmMixed,
    MubQst,
}

impl Protocol {
    pub const ALL: [Protocol; 6] = [
        Protocol::RedsmPure,
        Protocol::DsmPure,
        Protocol::RedsmSsb,
        Protocol::RedsmBbb,
        Protocol::DsmMixed,
        Protocol::MubQst,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::RedsmPure => "redsm_pure",
            Protocol::DsmPure => "dsm_pure",
            Protocol::RedsmSsb => "redsm_ssb",
            Protocol::RedsmBbb => "redsm_bbb",
            Protocol::DsmMixed => "dsm_mixed",
            Protocol::MubQst => "mub_qst",
        }
    }

    /// Whether the protocol reconstructs a state vector rather than a
    /// density matrix. MUB tomography handles both.
    pub fn is_pure(self) -> bool {
        matches!(self, Protocol::RedsmPure | Protocol::DsmPure)
    }

    /// Stable small integer, used to derive per-protocol random substreams.
    pub fn code(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let key = s.trim().to_ascii_lowercase();
        let p = match key.as_str() {
            "redsm_pure" | "redsm" => Protocol::RedsmPure,
            "dsm_pure" | "dsm" => Protocol::DsmPure,
            "redsm_ssb" | "ssb" => Protocol::RedsmSsb,
            "redsm_bbb" | "bbb" => Protocol::RedsmBbb,
            "dsm_mixed" => Protocol::DsmMixed,
            "mub_qst" | "mub" => Protocol::MubQst,
            _ => return Err(format!("unknown protocol '{s}'")),
        };
        Ok(p)
    }
}

/// The qubit state of the published single-run reconstruction example.
pub fn reference_qubit_state() -> CMatrix {
    let off = Cplx::new(0.18711, 0.32119);
    CMatrix::from_rows(&[
        vec![Cplx::new(0.40693, 0.0), off],
        vec![off.conj(), Cplx::new(0.59307, 0.0)],
    ])
}

/// A reconstructed density matrix scored against the true state.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconResult {
    pub protocol: Protocol,
    /// Hermitian, unit trace. Not necessarily positive.
    pub state: CMatrix,
    pub trace_dist: f64,
    /// Smallest eigenvalue of `state`; negative means unphysical.
    pub positivity: f64,
}

impl ReconResult {
    pub fn new(protocol: Protocol, state: CMatrix, truth: &CMatrix) -> Result<Self> {
        let trace_dist = trace_distance(&state, truth)?;
        let positivity = min_eigenvalue(&state)?;
        Ok(Self {
            protocol,
            state,
            trace_dist,
            positivity,
        })
    }
}
