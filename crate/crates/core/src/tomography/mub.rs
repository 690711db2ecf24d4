//! Tomography with a complete set of mutually unbiased bases (prime d).

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::qmath::{omega_pow, CMatrix, CVector, Cplx};

use super::settings::{MeasurementSetting, SettingId};
use super::ProbTable;

fn is_prime(d: usize) -> bool {
    d >= 2 && (2..).take_while(|k| k * k <= d).all(|k| !d.is_multiple_of(k))
}

/// `d + 1` mutually unbiased bases. For odd prime `d` these are the
/// computational basis and `|e_{b,k}> = Σ_n w^{b n² + k n} |n> / sqrt(d)`.
pub fn mub_bases(d: usize) -> Result<Vec<MeasurementSetting>> {
    if !is_prime(d) {
        return Err(Error::NotPrime(d));
    }
    let computational = (0..d).map(|k| CVector::basis(d, k)).collect();
    let mut bases = vec![MeasurementSetting::new(SettingId::Mub(0), computational)?];
    if d == 2 {
        let s = FRAC_1_SQRT_2;
        let x = vec![CVector::from_real(&[s, s]), CVector::from_real(&[s, -s])];
        let y = vec![
            CVector::new(vec![Cplx::new(s, 0.0), Cplx::new(0.0, s)]),
            CVector::new(vec![Cplx::new(s, 0.0), Cplx::new(0.0, -s)]),
        ];
        bases.push(MeasurementSetting::new(SettingId::Mub(1), x)?);
        bases.push(MeasurementSetting::new(SettingId::Mub(2), y)?);
        return Ok(bases);
    }
    let norm = 1.0 / (d as f64).sqrt();
    for b in 0..d {
        let kets = (0..d)
            .map(|k| {
                CVector::new(
                    (0..d)
                        .map(|n| omega_pow(d, (b * n * n + k * n) as i64) * norm)
                        .collect(),
                )
            })
            .collect();
        bases.push(MeasurementSetting::new(SettingId::Mub(b + 1), kets)?);
    }
    Ok(bases)
}

/// Exact outcome probabilities of `rho` in every basis, under `(0, 0, Mub(b))`.
pub fn mub_table(rho: &CMatrix) -> Result<ProbTable> {
    rho.check_density(1e-10)?;
    let mut table = ProbTable::new();
    for basis in mub_bases(rho.rows())? {
        table.insert(0, 0, basis.id(), basis.probabilities(rho));
    }
    Ok(table)
}

/// `rho = Σ_{b,k} p_{b,k} |e_{b,k}><e_{b,k}| - I`, Hermitized and normalized.
pub fn mub_qst_estimate(table: &ProbTable, d: usize) -> Result<CMatrix> {
    let bases = mub_bases(d)?;
    let mut rho = CMatrix::identity(d).scale_re(-1.0);
    for basis in &bases {
        let probs = table
            .get(0, 0, basis.id())
            .map_err(|_| Error::IncompleteData(format!("no data for basis {}", basis.id())))?;
        if probs.len() != d {
            return Err(Error::IncompleteData(format!(
                "basis {} has {} outcomes",
                basis.id(),
                probs.len()
            )));
        }
        for (v, &p) in basis.projectors().iter().zip(probs) {
            rho = &rho + &v.outer().scale_re(p);
        }
    }
    rho.hermitize().trace_normalized()
}
