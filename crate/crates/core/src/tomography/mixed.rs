//! Mixed-state protocols: ReDSM with separable (SSB) or Bell-type (BBB)
//! two-qubit settings, and the pointer-only usual DSM.

use std::ops::{Mul, Sub};

use crate::coupling::{check_theta, epsilon, postselect_operator};
use crate::error::{Error, Result};
use crate::qmath::{fourier_ket, omega_pow, CMatrix, CVector, Cplx, I, ZERO};
use crate::rebit::RebitPreparations;

use super::pure::pointer_coherence;
use super::settings::{setting, SettingId, BBB_SETTINGS, POINTER_SETTINGS, SSB_SETTINGS};
use super::ProbTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MixedScheme {
    Ssb,
    Bbb,
}

impl MixedScheme {
    pub fn settings(self) -> &'static [SettingId] {
        match self {
            MixedScheme::Ssb => &SSB_SETTINGS,
            MixedScheme::Bbb => &BBB_SETTINGS,
        }
    }
}

/// The four `(e, p)` elements of one outcome operator that the Fourier
/// inversion consumes, indices over `|00>, |01>, |10>, |11>`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OutcomeElements {
    pub rho30: Cplx,
    pub rho12: Cplx,
    pub rho33: Cplx,
    pub rho11: Cplx,
}

impl OutcomeElements {
    pub fn from_operator(m: &CMatrix) -> Self {
        Self {
            rho30: m[(3, 0)],
            rho12: m[(1, 2)],
            rho33: m[(3, 3)],
            rho11: m[(1, 1)],
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.rho30 - other.rho30,
            self.rho12 - other.rho12,
            self.rho33 - other.rho33,
            self.rho11 - other.rho11,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }
}

impl Sub for OutcomeElements {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        Self {
            rho30: self.rho30 - o.rho30,
            rho12: self.rho12 - o.rho12,
            rho33: self.rho33 - o.rho33,
            rho11: self.rho11 - o.rho11,
        }
    }
}

impl Mul<Cplx> for OutcomeElements {
    type Output = Self;

    fn mul(self, k: Cplx) -> Self {
        Self {
            rho30: self.rho30 * k,
            rho12: self.rho12 * k,
            rho33: self.rho33 * k,
            rho11: self.rho11 * k,
        }
    }
}

/// Signed sum over the four outcomes of a product setting.
fn correlator(p: &[f64]) -> f64 {
    p[0] - p[1] - p[2] + p[3]
}

pub fn ssb_extract(table: &ProbTable, n: usize, j: usize) -> Result<OutcomeElements> {
    let xx = correlator(table.get(n, j, SettingId::XX)?);
    let xy = correlator(table.get(n, j, SettingId::XY)?);
    let yx = correlator(table.get(n, j, SettingId::YX)?);
    let yy = correlator(table.get(n, j, SettingId::YY)?);
    let comp = table.get(n, j, SettingId::Computational)?;
    Ok(OutcomeElements {
        rho30: Cplx::new(xx - yy, xy + yx) * 0.25,
        rho12: Cplx::new(xx + yy, xy - yx) * 0.25,
        rho33: Cplx::new(comp[3], 0.0),
        rho11: Cplx::new(comp[1], 0.0),
    })
}

pub fn bbb_extract(table: &ProbTable, n: usize, j: usize) -> Result<OutcomeElements> {
    let bell = table.get(n, j, SettingId::Bell)?;
    let phase = table.get(n, j, SettingId::BellPhase)?;
    let comp = table.get(n, j, SettingId::Computational)?;
    Ok(OutcomeElements {
        rho30: Cplx::new(bell[0] - bell[1], phase[0] - phase[1]) * 0.5,
        rho12: Cplx::new(bell[2] - bell[3], -(phase[2] - phase[3])) * 0.5,
        rho33: Cplx::new(comp[3], 0.0),
        rho11: Cplx::new(comp[1], 0.0),
    })
}

/// Elements for every `(n, j)`, indexed `n * d + j`.
pub fn extract_elements(scheme: MixedScheme, table: &ProbTable, d: usize) -> Result<Vec<OutcomeElements>> {
    let mut out = Vec::with_capacity(d * d);
    for n in 0..d {
        for j in 0..d {
            out.push(match scheme {
                MixedScheme::Ssb => ssb_extract(table, n, j)?,
                MixedScheme::Bbb => bbb_extract(table, n, j)?,
            });
        }
    }
    Ok(out)
}

/// Exact outcome probabilities of one physical rebit preparation (a 2d x 2d
/// density in `e ⊗ s` order) for every `(n, j)` and every scheme setting.
pub fn redsm_mixed_preparation_table(input: &CMatrix, theta: f64, scheme: MixedScheme) -> Result<ProbTable> {
    let d = input.rows() / 2;
    let mut table = ProbTable::new();
    for n in 0..d {
        for j in 0..d {
            let out = postselect_operator(input, n, j, theta)?.hermitize();
            for &id in scheme.settings() {
                table.insert(n, j, id, setting(id).probabilities(&out));
            }
        }
    }
    Ok(table)
}

/// Exact tables for the real, plus and minus preparations of `rho`.
pub fn redsm_mixed_tables(
    rho: &CMatrix,
    theta: f64,
    scheme: MixedScheme,
) -> Result<(RebitPreparations, [ProbTable; 3])> {
    let preps = RebitPreparations::new(rho)?;
    let [a, b, c] = preps.inputs();
    let tables = [
        redsm_mixed_preparation_table(&a, theta, scheme)?,
        redsm_mixed_preparation_table(&b, theta, scheme)?,
        redsm_mixed_preparation_table(&c, theta, scheme)?,
    ];
    Ok((preps, tables))
}

/// Fourier inversion of the outcome elements (indexed `n * d + j`):
///
/// ```text
/// rho^r[m][n] = ( d tan(θ/2) δ_mn rho33(n) + i Σ_j rho30(n,j) w^{(n-m) j} ) / sin θ
/// rho^i[m][n] = ( d tan(θ/2) δ_mn rho11(n) + i Σ_j rho12(n,j) w^{(n-m) j} ) / sin θ
/// ```
///
/// with the populations averaged over `j`. Both blocks are real by
/// construction, so only real parts are kept before assembling
/// `rho^r + i rho^i`, which is then Hermitized and trace-normalized.
pub fn redsm_mixed_estimate(elements: &[OutcomeElements], theta: f64, d: usize) -> Result<CMatrix> {
    if elements.len() != d * d {
        return Err(Error::IncompleteData(format!(
            "expected {} outcome elements, got {}",
            d * d,
            elements.len()
        )));
    }
    let s = theta.sin();
    if s.abs() < 1e-15 {
        return Err(Error::SingularTheta(theta));
    }
    let diag = d as f64 * (0.5 * theta).tan();
    let mut rho = CMatrix::zeros(d, d);
    for n in 0..d {
        let cells = &elements[n * d..(n + 1) * d];
        let pop_r = cells.iter().map(|e| e.rho33.re).sum::<f64>() / d as f64;
        let pop_i = cells.iter().map(|e| e.rho11.re).sum::<f64>() / d as f64;
        for m in 0..d {
            let (mut fr, mut fi) = (ZERO, ZERO);
            for (j, e) in cells.iter().enumerate() {
                let w = omega_pow(d, (n as i64 - m as i64) * j as i64);
                fr += e.rho30 * w;
                fi += e.rho12 * w;
            }
            let (dr, di) = if m == n {
                (diag * pop_r, diag * pop_i)
            } else {
                (0.0, 0.0)
            };
            let re = (dr + (I * fr).re) / s;
            let im = (di + (I * fi).re) / s;
            rho[(m, n)] = Cplx::new(re, im);
        }
    }
    rho.hermitize().trace_normalized()
}

/// Unnormalized pointer operator of the usual DSM after coupling
/// `exp(i θ |n><n| ⊗ σx_p)` and contracting the system with `|c_j>`:
///
/// ```text
/// rho^p_{1,0}(n,j) = (i sin θ / d) [ Σ_m rho_{n,m} w^{(m-n) j} - ε rho_{n,n} ]
/// rho^p_{1,1}(n,j) = sin² θ rho_{n,n} / d
/// ```
pub fn dsm_mixed_forward(rho: &CMatrix, n: usize, j: usize, theta: f64) -> Result<CMatrix> {
    let d = rho.rows();
    check_theta(theta)?;
    if n >= d {
        return Err(Error::BadIndex { n, d });
    }
    let cj = fourier_ket(d, j)?;
    // Kraus rows <c_j|(I - ε Π_n) and i sinθ <c_j|Π_n, stored as kets.
    let mut k0 = cj.clone();
    k0[n] -= cj[n] * epsilon(theta);
    let mut k1 = CVector::zeros(d);
    k1[n] = Cplx::new(0.0, -theta.sin()) * cj[n];
    let kets = [k0, k1];
    Ok(CMatrix::from_fn(2, 2, |a, b| kets[a].inner(&rho.mul_vec(&kets[b]))))
}

/// Exact pointer X, Y, Z probabilities for every `(n, j)`.
pub fn dsm_mixed_table(rho: &CMatrix, theta: f64) -> Result<ProbTable> {
    rho.check_density(1e-10)?;
    let d = rho.rows();
    let mut table = ProbTable::new();
    for n in 0..d {
        for j in 0..d {
            let m = dsm_mixed_forward(rho, n, j, theta)?;
            for id in POINTER_SETTINGS {
                table.insert(n, j, id, setting(id).probabilities(&m));
            }
        }
    }
    Ok(table)
}

/// `rho_{n,k} = -(i / sin θ) Σ_j rho^p_{1,0}(n,j) w^{(n-k) j} + ε δ_nk rho_{n,n}`
/// with `rho_{n,n} = Σ_j rho^p_{1,1}(n,j) / sin² θ`.
pub fn dsm_mixed_estimate(table: &ProbTable, theta: f64, d: usize) -> Result<CMatrix> {
    let s = theta.sin();
    if s.abs() < 1e-15 {
        return Err(Error::SingularTheta(theta));
    }
    let eps = epsilon(theta);
    let mut rho = CMatrix::zeros(d, d);
    for n in 0..d {
        let mut coh = Vec::with_capacity(d);
        let mut pop = 0.0;
        for j in 0..d {
            coh.push(pointer_coherence(table, n, j)?);
            pop += table.get(n, j, SettingId::PointerZ)?[1];
        }
        let pop = pop / (s * s);
        for k in 0..d {
            let f: Cplx = coh
                .iter()
                .enumerate()
                .map(|(j, c)| c * omega_pow(d, (n as i64 - k as i64) * j as i64))
                .sum();
            let mut v = Cplx::new(0.0, -1.0 / s) * f;
            if k == n {
                v += eps * pop;
            }
            rho[(n, k)] = v;
        }
    }
    rho.hermitize().trace_normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::{pointer_interaction, postselect_mixed};
    use crate::qmath::{random_mixed, trace_distance, Prng};
    use crate::tomography::reference_qubit_state;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    /// Probabilities by brute force over each projector, for a Hermitian
    /// operator, without going through MeasurementSetting::probabilities.
    fn brute_table(m: &CMatrix, scheme: MixedScheme) -> ProbTable {
        let mut t = ProbTable::new();
        for &id in scheme.settings() {
            let probs = setting(id)
                .projectors()
                .iter()
                .map(|v| (&v.outer() * m).trace().re)
                .collect();
            t.insert(0, 0, id, probs);
        }
        t
    }

    fn full_pipeline(rho: &CMatrix, theta: f64, scheme: MixedScheme) -> Vec<OutcomeElements> {
        let d = rho.rows();
        let (preps, tables) = redsm_mixed_tables(rho, theta, scheme).unwrap();
        let parts: Vec<_> = tables.iter().map(|t| extract_elements(scheme, t, d).unwrap()).collect();
        (0..d * d)
            .map(|k| preps.combine(parts[0][k], parts[1][k], parts[2][k]))
            .collect()
    }

    #[test]
    fn ssb_on_bell_state() {
        let phi = setting(SettingId::Bell).projectors()[0].outer();
        let e = ssb_extract(&brute_table(&phi, MixedScheme::Ssb), 0, 0).unwrap();
        assert!((e.rho30 - Cplx::new(0.5, 0.0)).norm() < 1e-15);
        assert!(e.rho12.norm() < 1e-15);
        let zero = CVector::basis(4, 0).outer();
        let e = ssb_extract(&brute_table(&zero, MixedScheme::Ssb), 0, 0).unwrap();
        assert!(e.rho30.norm() < 1e-15 && e.rho12.norm() < 1e-15);
    }

    #[test]
    fn bbb_simple_states() {
        let phi = setting(SettingId::Bell).projectors()[0].outer();
        let e = bbb_extract(&brute_table(&phi, MixedScheme::Bbb), 0, 0).unwrap();
        assert!((e.rho30.re - 0.5).abs() < 1e-15);
        let mixed = CMatrix::identity(4).scale_re(0.25);
        let e = bbb_extract(&brute_table(&mixed, MixedScheme::Bbb), 0, 0).unwrap();
        assert!(e.rho30.norm() < 1e-15 && e.rho12.norm() < 1e-15);
    }

    #[test]
    fn extraction_recovers_random_hermitian_elements() {
        let mut p = Prng::new(201);
        for _ in 0..200 {
            let m = random_mixed(4, &mut p);
            let want = OutcomeElements::from_operator(&m);
            for scheme in [MixedScheme::Ssb, MixedScheme::Bbb] {
                let t = brute_table(&m, scheme);
                let got = match scheme {
                    MixedScheme::Ssb => ssb_extract(&t, 0, 0).unwrap(),
                    MixedScheme::Bbb => bbb_extract(&t, 0, 0).unwrap(),
                };
                assert!(got.max_abs_diff(&want) < 1e-12);
            }
        }
    }

    #[test]
    fn extraction_matches_postselected_operator() {
        let mut p = Prng::new(202);
        for _ in 0..100 {
            let d = 2 + (p.uniform() * 2.0) as usize;
            let rho = random_mixed(d, &mut p);
            let theta = 0.05 + p.uniform() * (FRAC_PI_2 - 0.05);
            let ssb = full_pipeline(&rho, theta, MixedScheme::Ssb);
            let bbb = full_pipeline(&rho, theta, MixedScheme::Bbb);
            for n in 0..d {
                for j in 0..d {
                    let want = OutcomeElements::from_operator(&postselect_mixed(&rho, n, j, theta).unwrap().rho_out);
                    assert!(ssb[n * d + j].max_abs_diff(&want) < 1e-12);
                    assert!(bbb[n * d + j].max_abs_diff(&ssb[n * d + j]) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn redsm_mixed_reported_state() {
        let rho = reference_qubit_state();
        for scheme in [MixedScheme::Ssb, MixedScheme::Bbb] {
            let est = redsm_mixed_estimate(&full_pipeline(&rho, FRAC_PI_2, scheme), FRAC_PI_2, 2).unwrap();
            assert!(est.max_abs_diff(&rho) < 1e-12);
        }
    }

    #[test]
    fn redsm_mixed_fixed_point_and_diagonal() {
        let theta = 0.7;
        for d in 2..5 {
            let rho = CMatrix::identity(d).scale_re(1.0 / d as f64);
            let est = redsm_mixed_estimate(&full_pipeline(&rho, theta, MixedScheme::Ssb), theta, d).unwrap();
            assert!(est.max_abs_diff(&rho) < 1e-12);
        }
        let pops = [0.5, 0.3, 0.2];
        let s2 = theta.sin().powi(2);
        let elements: Vec<_> = (0..3)
            .flat_map(|n| {
                (0..3).map(move |_| OutcomeElements {
                    rho33: Cplx::new(s2 * pops[n] / 3.0, 0.0),
                    ..Default::default()
                })
            })
            .collect();
        let est = redsm_mixed_estimate(&elements, theta, 3).unwrap();
        let want = CMatrix::diagonal(&pops.map(|p| Cplx::new(p, 0.0)));
        assert!(est.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn redsm_mixed_round_trip() {
        let mut p = Prng::new(203);
        for _ in 0..100 {
            let d = 2 + (p.uniform() * 3.0) as usize;
            let rho = random_mixed(d, &mut p);
            let theta = 0.05 + p.uniform() * (FRAC_PI_2 - 0.05);
            let est = redsm_mixed_estimate(&full_pipeline(&rho, theta, MixedScheme::Bbb), theta, d).unwrap();
            assert!(trace_distance(&est, &rho).unwrap() < 1e-10);
        }
    }

    #[test]
    fn redsm_mixed_guards() {
        assert!(matches!(
            redsm_mixed_estimate(&[], 1.0, 2),
            Err(Error::IncompleteData(_))
        ));
        let e = vec![OutcomeElements::default(); 4];
        assert_eq!(redsm_mixed_estimate(&e, 0.0, 2), Err(Error::SingularTheta(0.0)));
    }

    /// Pointer-only circuit for a density input, `s ⊗ p` order.
    fn dsm_circuit(rho: &CMatrix, n: usize, j: usize, theta: f64) -> CMatrix {
        let d = rho.rows();
        let u = pointer_interaction(d, n, theta).unwrap();
        let input = rho.kron(&CVector::basis(2, 0).outer());
        let ev = &(&u * &input) * &u.dagger();
        let cj = fourier_ket(d, j).unwrap();
        CMatrix::from_fn(2, 2, |a, b| {
            let mut acc = ZERO;
            for s in 0..d {
                for t in 0..d {
                    acc += cj[s].conj() * ev[(2 * s + a, 2 * t + b)] * cj[t];
                }
            }
            acc
        })
    }

    #[test]
    fn dsm_mixed_forward_matches_circuit_and_closed_form() {
        let mut p = Prng::new(204);
        for _ in 0..300 {
            let d = 2 + (p.uniform() * 3.0) as usize;
            let rho = random_mixed(d, &mut p);
            let n = (p.uniform() * d as f64) as usize;
            let j = (p.uniform() * d as f64) as usize;
            let theta = 0.05 + p.uniform() * (FRAC_PI_2 - 0.05);
            let m = dsm_mixed_forward(&rho, n, j, theta).unwrap();
            assert!(m.max_abs_diff(&dsm_circuit(&rho, n, j, theta)) < 1e-12);
            let s = theta.sin();
            let sum: Cplx = (0..d)
                .map(|k| rho[(n, k)] * omega_pow(d, (k as i64 - n as i64) * j as i64))
                .sum();
            let coh = Cplx::new(0.0, s / d as f64) * (sum - epsilon(theta) * rho[(n, n)]);
            assert!((m[(1, 0)] - coh).norm() < 1e-12);
            assert!((m[(1, 1)] - rho[(n, n)] * (s * s / d as f64)).norm() < 1e-12);
        }
    }

    #[test]
    fn dsm_mixed_examples() {
        let rho = reference_qubit_state();
        let est = dsm_mixed_estimate(&dsm_mixed_table(&rho, FRAC_PI_2).unwrap(), FRAC_PI_2, 2).unwrap();
        assert!(est.max_abs_diff(&rho) < 1e-12);
        let half = CMatrix::identity(2).scale_re(0.5);
        let est = dsm_mixed_estimate(&dsm_mixed_table(&half, 0.6).unwrap(), 0.6, 2).unwrap();
        assert!(est.max_abs_diff(&half) < 1e-12);
        let d = 3;
        let rho = CMatrix::identity(d).scale_re(1.0 / 3.0);
        let m = dsm_mixed_forward(&rho, 1, 2, 0.6).unwrap();
        assert!((m[(1, 1)].re - 0.6f64.sin().powi(2) / 9.0).abs() < 1e-15);
    }

    #[test]
    fn dsm_mixed_round_trip() {
        let mut p = Prng::new(205);
        for _ in 0..100 {
            let d = 2 + (p.uniform() * 3.0) as usize;
            let rho = random_mixed(d, &mut p);
            let theta = 0.05 + p.uniform() * (FRAC_PI_2 - 0.05);
            let est = dsm_mixed_estimate(&dsm_mixed_table(&rho, theta).unwrap(), theta, d).unwrap();
            assert!(trace_distance(&est, &rho).unwrap() < 1e-10);
        }
    }

    fn shift(m: &CMatrix) -> CMatrix {
        let d = m.rows();
        m.permuted(&(0..d).map(|k| (k + 1) % d).collect::<Vec<_>>())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Relabeling |m> -> |m+1> maps the data of (n, j) to (n+1, j), so
        /// shifting noisy inputs must shift the reconstruction.
        #[test]
        fn redsm_estimate_is_shift_equivariant(
            d in 2usize..5,
            theta in 0.1f64..1.5,
            noise in proptest::collection::vec(-0.05f64..0.05, 64),
        ) {
            let rho = random_mixed(d, &mut Prng::new((d as u64) * 7 + 1));
            let mut el = full_pipeline(&rho, theta, MixedScheme::Ssb);
            for (k, e) in el.iter_mut().enumerate() {
                e.rho30 += Cplx::new(noise[k % 64], noise[(k + 7) % 64]);
                e.rho12 += Cplx::new(noise[(k + 3) % 64], 0.0);
                e.rho33 += Cplx::new(0.1 * noise[(k + 5) % 64].abs(), 0.0);
            }
            let shifted: Vec<_> = (0..d * d).map(|k| {
                let (n, j) = (k / d, k % d);
                el[((n + d - 1) % d) * d + j]
            }).collect();
            let a = shift(&redsm_mixed_estimate(&el, theta, d).unwrap());
            let b = redsm_mixed_estimate(&shifted, theta, d).unwrap();
            prop_assert!(a.max_abs_diff(&b) < 1e-12);
        }

        #[test]
        fn dsm_estimate_is_shift_equivariant(d in 2usize..5, theta in 0.1f64..1.5, seed in 0u64..1000) {
            let rho = random_mixed(d, &mut Prng::new(seed));
            let table = dsm_mixed_table(&rho, theta).unwrap();
            let mut noisy = ProbTable::new();
            let mut shifted = ProbTable::new();
            let mut p = Prng::new(seed + 1);
            for (&(n, j, id), probs) in table.iter() {
                let bumped: Vec<f64> = probs.iter().map(|x| x + 0.01 * (p.uniform() - 0.5)).collect();
                noisy.insert(n, j, id, bumped.clone());
                shifted.insert((n + 1) % d, j, id, bumped);
            }
            let a = shift(&dsm_mixed_estimate(&noisy, theta, d).unwrap());
            let b = dsm_mixed_estimate(&shifted, theta, d).unwrap();
            prop_assert!(a.max_abs_diff(&b) < 1e-12);
        }

        #[test]
        fn estimates_are_hermitian_unit_trace(d in 2usize..5, theta in 0.1f64..1.5, seed in 0u64..1000) {
            let rho = random_mixed(d, &mut Prng::new(seed));
            let mut el = full_pipeline(&rho, theta, MixedScheme::Bbb);
            let mut p = Prng::new(seed ^ 0xff);
            for e in el.iter_mut() {
                e.rho30 += Cplx::new(0.02 * (p.uniform() - 0.5), 0.02 * (p.uniform() - 0.5));
            }
            let est = redsm_mixed_estimate(&el, theta, d).unwrap();
            prop_assert!(est.hermiticity_residual() < 1e-12);
            prop_assert!((est.trace().re - 1.0).abs() < 1e-12);
        }
    }
}
