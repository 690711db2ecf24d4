//! Cyclic Jacobi eigensolver for small Hermitian matrices.

use super::matrix::{CMatrix, Cplx};
use crate::error::{Error, Result};

/// Hermiticity tolerance accepted on input.
pub const HERMITIAN_TOL: f64 = 1e-10;

const OFF_DIAGONAL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Sorted in descending order.
    pub eigenvalues: Vec<f64>,
    /// Column k is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    /// V f(Λ) V^dag for a scalar function of the eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> Cplx) -> CMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        CMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| v[(r, k)] * f(self.eigenvalues[k]) * v[(c, k)].conj())
                .sum()
        })
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Full spectrum of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of `a[p][q]` with a diagonal unitary
/// and then applies the classical real rotation that annihilates it.
pub fn hermitian_eig(h: &CMatrix) -> Result<Spectrum> {
    let residual = h.hermiticity_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian { residual });
    }
    let n = h.rows();
    // Start from the exactly Hermitian part so rounding on input does not leak.
    let mut a = h.hermitize();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    while off_diagonal_norm(&a) > OFF_DIAGONAL_TOL * scale {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag < 1e-300 {
        return;
    }
    let phase = apq / mag; // e^{i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = tau.signum() / (tau.abs() + (tau * tau + 1.0).sqrt());
    let t = if tau == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = D R with D = diag(1, e^{-i phi}) on (p, q) and R the real rotation.
    let g_pp = Cplx::new(c, 0.0);
    let g_pq = Cplx::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let n = a.rows();
    // A <- A G (columns p, q)
    for r in 0..n {
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        a[(r, p)] = arp * g_pp + arq * g_qp;
        a[(r, q)] = arp * g_pq + arq * g_qq;
    }
    // A <- G^dag A (rows p, q)
    for col in 0..n {
        let apc = a[(p, col)];
        let aqc = a[(q, col)];
        a[(p, col)] = g_pp.conj() * apc + g_qp.conj() * aqc;
        a[(q, col)] = g_pq.conj() * apc + g_qq.conj() * aqc;
    }
    a[(p, q)] = Cplx::new(0.0, 0.0);
    a[(q, p)] = Cplx::new(0.0, 0.0);
    a[(p, p)] = Cplx::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Cplx::new(a[(q, q)].re, 0.0);
    // V <- V G
    for r in 0..n {
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = vrp * g_pp + vrq * g_qp;
        v[(r, q)] = vrp * g_pq + vrq * g_qq;
    }
}

/// Half the sum of absolute eigenvalues of `a - b`.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimMismatch {
            expected: format!("{:?}", a.shape()),
            found: format!("{:?}", b.shape()),
        });
    }
    let spec = hermitian_eig(&(a - b))?;
    Ok(0.5 * spec.eigenvalues.iter().map(|x| x.abs()).sum::<f64>())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &CMatrix) -> Result<f64> {
    Ok(hermitian_eig(h)?.min())
}
