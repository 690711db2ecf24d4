//! Dense complex linear algebra, spectra, distances and random states.

mod eig;
mod matrix;
mod prng;
mod random;

use std::f64::consts::PI;

pub use eig::{hermitian_eig, min_eigenvalue, trace_distance, Spectrum, HERMITIAN_TOL};
pub use matrix::{kron, pauli, CMatrix, CVector, Cplx, I, ONE, ZERO};
pub use prng::Prng;
pub use random::{nearly_pure, random_mixed, random_pure, PureMode};

use crate::error::{Error, Result};

/// Conjugate-basis ket |c_j> = sum_n w^{nj} |n> / sqrt(d), w = exp(2 pi i / d).
pub fn fourier_ket(d: usize, j: usize) -> Result<CVector> {
    if j >= d {
        return Err(Error::IndexOutOfRange { index: j, dim: d });
    }
    let norm = 1.0 / (d as f64).sqrt();
    Ok(CVector::new(
        (0..d).map(|n| omega_pow(d, (n * j) as i64) * norm).collect(),
    ))
}

/// w^k for w = exp(2 pi i / d); the exponent is reduced mod d first.
pub fn omega_pow(d: usize, k: i64) -> Cplx {
    let r = k.rem_euclid(d as i64) as f64;
    Cplx::from_polar(1.0, 2.0 * PI * r / d as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourier_kets() {
        let s = 1.0 / 2f64.sqrt();
        let c0 = fourier_ket(2, 0).unwrap();
        assert!(c0.max_abs_diff(&CVector::from_real(&[s, s])) < 1e-15);
        let c1 = fourier_ket(2, 1).unwrap();
        assert!(c1.max_abs_diff(&CVector::from_real(&[s, -s])) < 1e-15);
        let c = fourier_ket(3, 1).unwrap();
        let expect = Cplx::from_polar(1.0, 4.0 * PI / 3.0) / 3f64.sqrt();
        assert!((c[2] - expect).norm() < 1e-15);
    }

    #[test]
    fn fourier_index_guard() {
        assert_eq!(fourier_ket(3, 3), Err(Error::IndexOutOfRange { index: 3, dim: 3 }));
    }

    #[test]
    fn fourier_basis_is_orthonormal() {
        for d in 2..7 {
            for a in 0..d {
                for b in 0..d {
                    let ip = fourier_ket(d, a).unwrap().inner(&fourier_ket(d, b).unwrap());
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((ip - Cplx::new(want, 0.0)).norm() < 1e-12);
                }
            }
        }
    }
}
