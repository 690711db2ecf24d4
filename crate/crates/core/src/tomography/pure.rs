//! Pure-state protocols: ReDSM square-root inversion and the usual DSM.

use crate::coupling::{check_theta, epsilon, postselect_pure};
use crate::error::{Error, Result};
use crate::qmath::{CMatrix, CVector, Cplx};

use super::settings::{setting, SettingId, POINTER_SETTINGS};
use super::ProbTable;

/// Below this estimate of `|Σ|²` the usual DSM cannot fix the amplitudes.
/// The threshold sits on the estimated square because that is what the data
/// determine; its square root carries a rounding floor near 1e-8.
pub const SIGMA_TOL: f64 = 1e-9;

/// Exact joint probabilities of accepting `|c_0>` and reading each `|e p>`,
/// stored under `(n, 0, Computational)`.
pub fn redsm_pure_table(psi: &CVector, theta: f64) -> Result<ProbTable> {
    let mut table = ProbTable::new();
    for n in 0..psi.dim() {
        let out = postselect_pure(psi, n, theta)?;
        let probs = (0..4).map(|k| out.eta[k].norm_sqr()).collect();
        table.insert(n, 0, SettingId::Computational, probs);
    }
    Ok(table)
}

/// `psi_n = [sqrt(d P11(n)) + i sqrt(d P01(n))] / sin θ`, then normalized.
///
/// Negative frequencies cannot occur from sampling; they are clamped so that
/// perturbed tables still produce an estimate.
pub fn redsm_pure_estimate(p11: &[f64], p01: &[f64], theta: f64, d: usize) -> Result<CVector> {
    if p11.len() != d || p01.len() != d {
        return Err(Error::DimMismatch {
            expected: format!("{d} probabilities"),
            found: format!("{} and {}", p11.len(), p01.len()),
        });
    }
    let s = theta.sin();
    if s <= 0.0 {
        return Err(Error::SingularTheta(theta));
    }
    let df = d as f64;
    let amps = p11
        .iter()
        .zip(p01)
        .map(|(&a, &b)| Cplx::new((df * a.max(0.0)).sqrt() / s, (df * b.max(0.0)).sqrt() / s))
        .collect::<Vec<_>>();
    CVector::new(amps).normalized()
}

pub fn redsm_pure_estimate_from_table(table: &ProbTable, theta: f64, d: usize) -> Result<CVector> {
    let mut p11 = Vec::with_capacity(d);
    let mut p01 = Vec::with_capacity(d);
    for n in 0..d {
        let probs = table.get(n, 0, SettingId::Computational)?;
        p01.push(probs[1]);
        p11.push(probs[3]);
    }
    redsm_pure_estimate(&p11, &p01, theta, d)
}

/// Unnormalized pointer state `v v^dag / d` after the pointer-only coupling
/// `exp(i θ |n><n| ⊗ σx_p)` and postselection on `|c_0>`, with
/// `v = (Σ - ε psi_n, i sin θ psi_n)` and `Σ = Σ_m psi_m`.
pub fn dsm_pure_forward(psi: &CVector, n: usize, theta: f64) -> Result<CMatrix> {
    let d = psi.dim();
    check_theta(theta)?;
    if n >= d {
        return Err(Error::BadIndex { n, d });
    }
    let sum: Cplx = psi.iter().sum();
    let k = 1.0 / (d as f64).sqrt();
    let v = CVector::new(vec![
        (sum - psi[n] * epsilon(theta)) * k,
        Cplx::new(0.0, theta.sin()) * psi[n] * k,
    ]);
    Ok(v.outer())
}

/// Exact pointer probabilities in the X, Y and Z settings for every `n`.
pub fn dsm_pure_table(psi: &CVector, theta: f64) -> Result<ProbTable> {
    let mut table = ProbTable::new();
    for n in 0..psi.dim() {
        let m = dsm_pure_forward(psi, n, theta)?;
        for id in POINTER_SETTINGS {
            table.insert(n, 0, id, setting(id).probabilities(&m));
        }
    }
    Ok(table)
}

/// `rho_{1,0} = (<X> + i <Y>) / 2` from the pointer X and Y cells, where the
/// expectations carry the branch weight (they are not renormalized).
pub fn pointer_coherence(table: &ProbTable, n: usize, j: usize) -> Result<Cplx> {
    let x = table.get(n, j, SettingId::PointerX)?;
    let y = table.get(n, j, SettingId::PointerY)?;
    Ok(Cplx::new(x[0] - x[1], y[0] - y[1]) * 0.5)
}

/// Invert the usual-DSM forward model.
///
/// `alpha_n = -i d rho_{1,0}(n) / sin θ + d ε P_1(n) / sin² θ` equals
/// `psi_n Σ*`, so normalizing `alpha` gives `psi` up to the phase of `Σ`.
/// The phase is fixed by making `Σ_n alpha_n` (= `|Σ|²`) real and positive.
pub fn dsm_pure_estimate(table: &ProbTable, theta: f64, d: usize) -> Result<CVector> {
    let s = theta.sin();
    if s <= 0.0 {
        return Err(Error::SingularTheta(theta));
    }
    let df = d as f64;
    let eps = epsilon(theta);
    let mut alpha = Vec::with_capacity(d);
    for n in 0..d {
        let coh = pointer_coherence(table, n, 0)?;
        let p1 = table.get(n, 0, SettingId::PointerZ)?[1];
        alpha.push(Cplx::new(0.0, -df / s) * coh + df * eps * p1 / (s * s));
    }
    let total: Cplx = alpha.iter().sum();
    if total.norm() < SIGMA_TOL {
        return Err(Error::DegenerateSigma(total.norm().sqrt()));
    }
    let phase = total.conj() / total.norm();
    CVector::new(alpha.into_iter().map(|a| a * phase).collect()).normalized()
}
