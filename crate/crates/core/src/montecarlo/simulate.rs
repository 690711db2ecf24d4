//! One finite-copy reconstruction experiment.

use crate::coupling::{postselect_operator, postselect_pure};
use crate::error::{Error, Result};
use crate::qmath::{CMatrix, CVector, Prng};
use crate::rebit::RebitPreparations;
use crate::tomography::{
    dsm_mixed_estimate, dsm_mixed_forward, dsm_mixed_table, dsm_pure_estimate, dsm_pure_forward, dsm_pure_table,
    extract_elements, mub_bases, mub_qst_estimate, mub_table, redsm_mixed_estimate, redsm_mixed_tables,
    redsm_pure_estimate_from_table, redsm_pure_table, setting, MixedScheme, OutcomeElements, ProbTable, Protocol,
    ReconResult, SettingId, POINTER_SETTINGS,
};

use super::budget::{split_even, BudgetMode};
use super::sampling::Cdf;

/// Finite sampling, or exact probabilities standing in for infinitely many
/// copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Sampling {
    #[default]
    Finite,
    Exact,
}

/// Budget of a single trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialSpec {
    pub copies: u64,
    pub budget_mode: BudgetMode,
    pub sampling: Sampling,
}

/// The state a trial tries to reconstruct.
#[derive(Debug, Clone, PartialEq)]
pub enum TrueState {
    Pure(CVector),
    Mixed(CMatrix),
}

impl TrueState {
    pub fn dim(&self) -> usize {
        match self {
            TrueState::Pure(v) => v.dim(),
            TrueState::Mixed(m) => m.rows(),
        }
    }

    pub fn density(&self) -> CMatrix {
        match self {
            TrueState::Pure(v) => v.outer(),
            TrueState::Mixed(m) => m.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub protocol: Protocol,
    pub trace_dist: f64,
    /// Copies that produced usable data.
    pub accepted_copies: u64,
    /// Copies discarded by postselection.
    pub rejected_copies: u64,
    /// Budget left over by integer allocation.
    pub unallocated_copies: u64,
    /// Seed of the sampling stream.
    pub seed: u64,
    pub min_eigenvalue: f64,
    pub state: CMatrix,
}

#[derive(Debug, Default)]
struct Ledger {
    accepted: u64,
    rejected: u64,
}

fn finish(
    protocol: Protocol,
    estimate: CMatrix,
    truth: &CMatrix,
    spec: &TrialSpec,
    ledger: Ledger,
    prng: &Prng,
) -> Result<TrialOutcome> {
    let recon = ReconResult::new(protocol, estimate, truth)?;
    let used = ledger.accepted + ledger.rejected;
    Ok(TrialOutcome {
        protocol,
        trace_dist: recon.trace_dist,
        accepted_copies: ledger.accepted,
        rejected_copies: ledger.rejected,
        unallocated_copies: spec.copies - used,
        seed: prng.seed(),
        min_eigenvalue: recon.positivity,
        state: recon.state,
    })
}

fn too_small(what: &str, copies: u64) -> Error {
    Error::BudgetTooSmall(format!("{what} received 0 of {copies} copies"))
}

/// Copies per probe index `n` for the pure protocols.
fn pure_allocation(spec: &TrialSpec, d: usize) -> Result<Vec<u64>> {
    let alloc = match spec.budget_mode {
        BudgetMode::PaperP0 => vec![spec.copies / (d * d) as u64; d],
        BudgetMode::PhysicalNorm => split_even(spec.copies, d),
    };
    if let Some(n) = alloc.iter().position(|&c| c == 0) {
        return Err(too_small(&format!("probe n={n}"), spec.copies));
    }
    Ok(alloc)
}

/// Draw `copies` samples from `probs` extended by a rejection category
/// carrying the missing weight; returns counts with rejections last.
fn sample_with_reject(probs: &[f64], copies: u64, prng: &mut Prng) -> Result<Vec<u64>> {
    let mut weights = probs.to_vec();
    weights.push((1.0 - probs.iter().sum::<f64>()).max(0.0));
    Ok(Cdf::new(&weights)?.counts(copies, prng))
}

pub fn simulate_pure(
    protocol: Protocol,
    psi: &CVector,
    theta: f64,
    spec: &TrialSpec,
    prng: &mut Prng,
) -> Result<TrialOutcome> {
    let d = psi.dim();
    let truth = psi.outer();
    let estimate = match (protocol, spec.sampling) {
        (Protocol::MubQst, _) => return simulate_mixed(protocol, &truth, theta, spec, prng),
        (Protocol::RedsmPure, Sampling::Exact) => {
            redsm_pure_estimate_from_table(&redsm_pure_table(psi, theta)?, theta, d)?
        }
        (Protocol::DsmPure, Sampling::Exact) => dsm_pure_estimate(&dsm_pure_table(psi, theta)?, theta, d)?,
        (Protocol::RedsmPure, Sampling::Finite) => {
            let alloc = pure_allocation(spec, d)?;
            let mut table = ProbTable::new();
            let mut ledger = Ledger::default();
            for (n, &copies) in alloc.iter().enumerate() {
                let out = postselect_pure(psi, n, theta)?;
                let probs: Vec<f64> = (0..4).map(|k| out.eta[k].norm_sqr()).collect();
                let counts = sample_with_reject(&probs, copies, prng)?;
                ledger.accepted += counts[..4].iter().sum::<u64>();
                ledger.rejected += counts[4];
                table.insert_counts(n, 0, SettingId::Computational, &counts[..4], copies);
            }
            let est = redsm_pure_estimate_from_table(&table, theta, d)?;
            return finish(protocol, est.outer(), &truth, spec, ledger, prng);
        }
        (Protocol::DsmPure, Sampling::Finite) => {
            let alloc = pure_allocation(spec, d)?;
            let mut table = ProbTable::new();
            let mut ledger = Ledger::default();
            for (n, &copies) in alloc.iter().enumerate() {
                let m = dsm_pure_forward(psi, n, theta)?;
                for (id, block) in POINTER_SETTINGS
                    .into_iter()
                    .zip(split_even(copies, POINTER_SETTINGS.len()))
                {
                    if block == 0 {
                        return Err(too_small(&format!("setting {id} at n={n}"), spec.copies));
                    }
                    let counts = sample_with_reject(&setting(id).probabilities(&m), block, prng)?;
                    ledger.accepted += counts[0] + counts[1];
                    ledger.rejected += counts[2];
                    table.insert_counts(n, 0, id, &counts[..2], block);
                }
            }
            let est = dsm_pure_estimate(&table, theta, d)?;
            return finish(protocol, est.outer(), &truth, spec, ledger, prng);
        }
        _ => {
            return Err(Error::UnsupportedProtocol {
                protocol: protocol.to_string(),
                state: "a pure state".into(),
            })
        }
    };
    finish(protocol, estimate.outer(), &truth, spec, Ledger::default(), prng)
}

/// Sample every `(n, setting)` block, each copy drawing a postselection
/// branch `j` and an outcome `k` jointly. `branch_probs(n, id)` returns the
/// `(j, k)` probabilities flattened as `j * outcomes + k`.
fn sample_branches(
    alloc: &[u64],
    settings: &[SettingId],
    branches: usize,
    outcomes: usize,
    branch_probs: impl Fn(usize, SettingId) -> Vec<f64>,
    prng: &mut Prng,
    table: &mut ProbTable,
) -> Result<u64> {
    let mut used = 0;
    for (n, &copies) in alloc.iter().enumerate() {
        for (&id, block) in settings.iter().zip(split_even(copies, settings.len())) {
            if block == 0 {
                return Err(too_small(&format!("setting {id} at n={n}"), copies));
            }
            let counts = Cdf::new(&branch_probs(n, id))?.counts(block, prng);
            for j in 0..branches {
                table.insert_counts(n, j, id, &counts[j * outcomes..(j + 1) * outcomes], block);
            }
            used += block;
        }
    }
    Ok(used)
}

fn redsm_mixed_finite(
    scheme: MixedScheme,
    rho: &CMatrix,
    theta: f64,
    spec: &TrialSpec,
    prng: &mut Prng,
) -> Result<(Vec<OutcomeElements>, u64)> {
    let d = rho.rows();
    let preps = RebitPreparations::new(rho)?;
    let inputs = preps.inputs();
    let per_n = split_even(spec.copies, d);
    // Real preparation gets half of each probe's copies, plus and minus a
    // quarter each. Real states need only the first.
    let shares: [Vec<u64>; 3] = if preps.weight == 0.0 {
        [per_n, vec![0; d], vec![0; d]]
    } else {
        let q: Vec<u64> = per_n.iter().map(|c| c / 4).collect();
        [per_n.iter().zip(&q).map(|(c, q)| c - 2 * q).collect(), q.clone(), q]
    };
    let mut parts = Vec::with_capacity(3);
    let mut used = 0;
    for (input, alloc) in inputs.iter().zip(&shares) {
        if alloc.iter().all(|&c| c == 0) && preps.weight == 0.0 {
            parts.push(vec![OutcomeElements::default(); d * d]);
            continue;
        }
        let outs: Vec<CMatrix> = (0..d * d)
            .map(|k| postselect_operator(input, k / d, k % d, theta).map(|m| m.hermitize()))
            .collect::<Result<_>>()?;
        let mut table = ProbTable::new();
        used += sample_branches(
            alloc,
            scheme.settings(),
            d,
            4,
            |n, id| {
                let s = setting(id);
                (0..d).flat_map(|j| s.probabilities(&outs[n * d + j])).collect()
            },
            prng,
            &mut table,
        )?;
        parts.push(extract_elements(scheme, &table, d)?);
    }
    let combined = (0..d * d)
        .map(|k| preps.combine(parts[0][k], parts[1][k], parts[2][k]))
        .collect();
    Ok((combined, used))
}

pub fn simulate_mixed(
    protocol: Protocol,
    rho: &CMatrix,
    theta: f64,
    spec: &TrialSpec,
    prng: &mut Prng,
) -> Result<TrialOutcome> {
    let d = rho.rows();
    let scheme = match protocol {
        Protocol::RedsmSsb => Some(MixedScheme::Ssb),
        Protocol::RedsmBbb => Some(MixedScheme::Bbb),
        _ => None,
    };
    let mut ledger = Ledger::default();
    let estimate = match (protocol, spec.sampling) {
        (Protocol::RedsmSsb | Protocol::RedsmBbb, Sampling::Exact) => {
            let scheme = scheme.expect("matched above");
            let (preps, tables) = redsm_mixed_tables(rho, theta, scheme)?;
            let parts = tables
                .iter()
                .map(|t| extract_elements(scheme, t, d))
                .collect::<Result<Vec<_>>>()?;
            let el: Vec<_> = (0..d * d)
                .map(|k| preps.combine(parts[0][k], parts[1][k], parts[2][k]))
                .collect();
            redsm_mixed_estimate(&el, theta, d)?
        }
        (Protocol::RedsmSsb | Protocol::RedsmBbb, Sampling::Finite) => {
            let (el, used) = redsm_mixed_finite(scheme.expect("matched above"), rho, theta, spec, prng)?;
            ledger.accepted = used;
            redsm_mixed_estimate(&el, theta, d)?
        }
        (Protocol::DsmMixed, Sampling::Exact) => dsm_mixed_estimate(&dsm_mixed_table(rho, theta)?, theta, d)?,
        (Protocol::DsmMixed, Sampling::Finite) => {
            rho.check_density(1e-10)?;
            let outs: Vec<CMatrix> = (0..d * d)
                .map(|k| dsm_mixed_forward(rho, k / d, k % d, theta))
                .collect::<Result<_>>()?;
            let mut table = ProbTable::new();
            ledger.accepted = sample_branches(
                &split_even(spec.copies, d),
                &POINTER_SETTINGS,
                d,
                2,
                |n, id| {
                    let s = setting(id);
                    (0..d).flat_map(|j| s.probabilities(&outs[n * d + j])).collect()
                },
                prng,
                &mut table,
            )?;
            dsm_mixed_estimate(&table, theta, d)?
        }
        (Protocol::MubQst, Sampling::Exact) => mub_qst_estimate(&mub_table(rho)?, d)?,
        (Protocol::MubQst, Sampling::Finite) => {
            rho.check_density(1e-10)?;
            let bases = mub_bases(d)?;
            let mut table = ProbTable::new();
            for (basis, copies) in bases.iter().zip(split_even(spec.copies, bases.len())) {
                if copies == 0 {
                    return Err(too_small(&format!("basis {}", basis.id()), spec.copies));
                }
                let counts = Cdf::new(&basis.probabilities(rho))?.counts(copies, prng);
                table.insert_counts(0, 0, basis.id(), &counts, copies);
                ledger.accepted += copies;
            }
            mub_qst_estimate(&table, d)?
        }
        _ => {
            return Err(Error::UnsupportedProtocol {
                protocol: protocol.to_string(),
                state: "a density matrix".into(),
            })
        }
    };
    finish(protocol, estimate, rho, spec, ledger, prng)
}

/// Dispatch on the kind of true state.
pub fn simulate(
    protocol: Protocol,
    state: &TrueState,
    theta: f64,
    spec: &TrialSpec,
    prng: &mut Prng,
) -> Result<TrialOutcome> {
    match state {
        TrueState::Pure(psi) => match protocol {
            Protocol::RedsmPure | Protocol::DsmPure | Protocol::MubQst => {
                simulate_pure(protocol, psi, theta, spec, prng)
            }
            _ => simulate_mixed(protocol, &psi.outer(), theta, spec, prng),
        },
        TrueState::Mixed(rho) => simulate_mixed(protocol, rho, theta, spec, prng),
    }
}
