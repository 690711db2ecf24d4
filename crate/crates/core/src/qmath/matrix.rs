//! Dense complex vectors and matrices.
//!
//! Everything in this crate is small (the largest operator is the 4d x 4d
//! interaction with d at most a handful), so a plain row-major `Vec` is all
//! the storage we need.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Cplx = Complex64;

pub const ZERO: Cplx = Cplx::new(0.0, 0.0);
pub const ONE: Cplx = Cplx::new(1.0, 0.0);
pub const I: Cplx = Cplx::new(0.0, 1.0);

/// Dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    entries: Vec<Cplx>,
}

impl CVector {
    pub fn new(entries: Vec<Cplx>) -> Self {
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: vec![ZERO; dim],
        }
    }

    /// Computational basis vector |k>.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[k] = ONE;
        v
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| Cplx::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[Cplx] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Cplx> {
        self.entries.iter()
    }

    pub fn into_vec(self) -> Vec<Cplx> {
        self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: Cplx) -> Self {
        Self::new(self.entries.iter().map(|&z| z * k).collect())
    }

    /// Unit-norm copy, or `ZeroNorm` for the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scale(Cplx::new(1.0 / n, 0.0)))
    }

    /// <self|other>
    pub fn inner(&self, other: &CVector) -> Cplx {
        self.entries.iter().zip(&other.entries).map(|(a, b)| a.conj() * b).sum()
    }

    /// |self><self|
    pub fn outer(&self) -> CMatrix {
        self.outer_with(self)
    }

    /// |self><other|
    pub fn outer_with(&self, other: &CVector) -> CMatrix {
        CMatrix::from_fn(self.dim(), other.dim(), |r, c| {
            self.entries[r] * other.entries[c].conj()
        })
    }

    pub fn kron(&self, other: &CVector) -> CVector {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            for b in &other.entries {
                out.push(a * b);
            }
        }
        CVector::new(out)
    }

    pub fn max_abs_diff(&self, other: &CVector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "vector dimensions differ");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for CVector {
    type Output = Cplx;
    fn index(&self, i: usize) -> &Cplx {
        &self.entries[i]
    }
}

impl IndexMut<usize> for CVector {
    fn index_mut(&mut self, i: usize) -> &mut Cplx {
        &mut self.entries[i]
    }
}

impl From<Vec<Cplx>> for CVector {
    fn from(entries: Vec<Cplx>) -> Self {
        Self::new(entries)
    }
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Cplx>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cplx) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from row-major entries. Panics if the length is not `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Cplx>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Cplx>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_vec(r, c, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let rows: Vec<Vec<Cplx>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| Cplx::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diagonal(values: &[Cplx]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |r, c| if r == c { values[r] } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[Cplx] {
        &self.data
    }

    pub fn column(&self, c: usize) -> CVector {
        CVector::new((0..self.rows).map(|r| self[(r, c)]).collect())
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Cplx) -> Cplx) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Entrywise real part, as a complex matrix with zero imaginary parts.
    pub fn real_part(&self) -> Self {
        self.map(|z| Cplx::new(z.re, 0.0))
    }

    /// Entrywise imaginary part, as a complex matrix with zero imaginary parts.
    pub fn imag_part(&self) -> Self {
        self.map(|z| Cplx::new(z.im, 0.0))
    }

    pub fn scale(&self, k: Cplx) -> Self {
        self.map(|z| z * k)
    }

    pub fn scale_re(&self, k: f64) -> Self {
        self.map(|z| z * k)
    }

    pub fn trace(&self) -> Cplx {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        assert_eq!(self.cols, v.dim(), "matrix-vector shape mismatch");
        CVector::new(
            (0..self.rows)
                .map(|r| {
                    let row = &self.data[r * self.cols..(r + 1) * self.cols];
                    row.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
                })
                .collect(),
        )
    }

    /// <u| self |v>
    pub fn sandwich(&self, u: &CVector, v: &CVector) -> Cplx {
        u.inner(&self.mul_vec(v))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (ar, ac) = self.shape();
        let (br, bc) = other.shape();
        CMatrix::from_fn(ar * br, ac * bc, |r, c| {
            self[(r / br, c / bc)] * other[(r % br, c % bc)]
        })
    }

    /// A B - B A
    pub fn commutator(&self, other: &CMatrix) -> CMatrix {
        &(self * other) - &(other * self)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "matrix shapes differ");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry of |A - A^dag|; infinite for non-square input.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entry of |U^dag U - I|.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.dagger() * self).max_abs_diff(&CMatrix::identity(self.rows))
    }

    /// (A + A^dag) / 2
    pub fn hermitize(&self) -> Self {
        (self + &self.dagger()).scale_re(0.5)
    }

    /// Divide by the (real part of the) trace. `ZeroNorm` if the trace vanishes.
    pub fn trace_normalized(&self) -> Result<Self> {
        let t = self.trace().re;
        if t.abs() < 1e-300 || !t.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scale_re(1.0 / t))
    }

    /// Check the density-matrix contract: square, Hermitian and unit trace
    /// within `tol`. Positivity is deliberately not part of it.
    pub fn check_density(&self, tol: f64) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotDensityMatrix {
                reason: format!("shape {}x{} is not square", self.rows, self.cols),
            });
        }
        let herm = self.hermiticity_residual();
        if herm > tol {
            return Err(Error::NotDensityMatrix {
                reason: format!("Hermiticity residual {herm:e} exceeds {tol:e}"),
            });
        }
        let t = self.trace();
        if (t - ONE).norm() > tol {
            return Err(Error::NotDensityMatrix {
                reason: format!("trace {t} differs from 1"),
            });
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Reorder basis indices: `out[perm[r], perm[c]] = self[r, c]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert!(
            self.is_square() && perm.len() == self.rows,
            "permutation length mismatch"
        );
        let mut out = CMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(perm[r], perm[c])] = self[(r, c)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Cplx;
    fn index(&self, (r, c): (usize, usize)) -> &Cplx {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Cplx {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| {
                    let z = self[(r, c)];
                    format!(
                        "{:>9.5} {} {:.5}i",
                        z.re,
                        if z.im < 0.0 { '-' } else { '+' },
                        z.im.abs()
                    )
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Kronecker product of two matrices.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kron(b)
}

/// Single-qubit Pauli matrices.
pub mod pauli {
    use super::{CMatrix, Cplx};

    pub fn x() -> CMatrix {
        CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn y() -> CMatrix {
        CMatrix::from_rows(&[
            vec![Cplx::new(0.0, 0.0), Cplx::new(0.0, -1.0)],
            vec![Cplx::new(0.0, 1.0), Cplx::new(0.0, 0.0)],
        ])
    }

    pub fn z() -> CMatrix {
        CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }

    /// |k><k| on a `dim`-level system.
    pub fn projector(dim: usize, k: usize) -> CMatrix {
        CMatrix::from_fn(dim, dim, |r, c| {
            if r == k && c == k {
                Cplx::new(1.0, 0.0)
            } else {
                Cplx::new(0.0, 0.0)
            }
        })
    }
}
