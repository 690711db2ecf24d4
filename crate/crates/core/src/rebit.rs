//! Real enlarged ("rebit") encodings of complex states and gates.
//!
//! A complex amplitude `psi_n = psi_n^r + i psi_n^i` is stored as two real
//! amplitudes of `|n>|e>`, with the extra qubit `e = 0` holding the real part
//! and `e = 1` the imaginary part.
//!
//! Two index layouts are in use. Pure-state rebits put the system index first
//! (`|n>|e>`), density rebits put the extra qubit first (`|e>|n>`). The
//! [`RebitLayout`] constants name both and [`RebitLayout::index`] converts.

use crate::error::{Error, Result};
use crate::qmath::{hermitian_eig, CMatrix, CVector, Cplx};

/// Tolerance on imaginary residue when reading a rebit back.
pub const REAL_TOL: f64 = 1e-10;
/// Unitarity tolerance for [`real_form_gate`].
pub const UNITARY_TOL: f64 = 1e-10;
/// Density-matrix tolerance for [`embed_mixed`].
pub const DENSITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RebitLayout {
    /// `|n>|e>`: index `2 n + e`.
    SystemMajor,
    /// `|e>|n>`: index `e d + n`.
    ExtraMajor,
}

/// Layout used by [`RebitState`].
pub const PURE_LAYOUT: RebitLayout = RebitLayout::SystemMajor;
/// Layout used by [`RebitDensity`].
pub const MIXED_LAYOUT: RebitLayout = RebitLayout::ExtraMajor;

impl RebitLayout {
    pub fn index(self, d: usize, n: usize, e: usize) -> usize {
        debug_assert!(n < d && e < 2);
        match self {
            RebitLayout::SystemMajor => 2 * n + e,
            RebitLayout::ExtraMajor => e * d + n,
        }
    }

    /// Permutation taking indices of `self` to indices of `to`.
    pub fn permutation_to(self, to: RebitLayout, d: usize) -> Vec<usize> {
        let mut perm = vec![0; 2 * d];
        for n in 0..d {
            for e in 0..2 {
                perm[self.index(d, n, e)] = to.index(d, n, e);
            }
        }
        perm
    }
}

/// Re-index a 2d x 2d operator between rebit layouts.
pub fn convert_layout(m: &CMatrix, d: usize, from: RebitLayout, to: RebitLayout) -> CMatrix {
    m.permuted(&from.permutation_to(to, d))
}

/// Real-amplitude enlarged pure state, [`PURE_LAYOUT`] ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct RebitState {
    dim_system: usize,
    amplitudes: CVector,
}

impl RebitState {
    /// Wrap 2d amplitudes in system-major order.
    pub fn from_amplitudes(amplitudes: CVector) -> Result<Self> {
        if !amplitudes.dim().is_multiple_of(2) || amplitudes.dim() == 0 {
            return Err(Error::DimMismatch {
                expected: "even, nonzero length".into(),
                found: amplitudes.dim().to_string(),
            });
        }
        Ok(Self {
            dim_system: amplitudes.dim() / 2,
            amplitudes,
        })
    }

    pub fn dim_system(&self) -> usize {
        self.dim_system
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Real amplitude attached to `|n>|e>`.
    pub fn component(&self, n: usize, e: usize) -> f64 {
        self.amplitudes[PURE_LAYOUT.index(self.dim_system, n, e)].re
    }
}

pub fn embed_pure(psi: &CVector) -> RebitState {
    let d = psi.dim();
    let mut amps = CVector::zeros(2 * d);
    for n in 0..d {
        amps[PURE_LAYOUT.index(d, n, 0)] = Cplx::new(psi[n].re, 0.0);
        amps[PURE_LAYOUT.index(d, n, 1)] = Cplx::new(psi[n].im, 0.0);
    }
    RebitState {
        dim_system: d,
        amplitudes: amps,
    }
}

pub fn unembed_pure(r: &RebitState) -> Result<CVector> {
    let residual = r.amplitudes.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residual > REAL_TOL {
        return Err(Error::NotReal { residual });
    }
    let d = r.dim_system;
    Ok(CVector::new(
        (0..d)
            .map(|n| Cplx::new(r.component(n, 0), r.component(n, 1)))
            .collect(),
    ))
}

/// Orthogonal 2d x 2d real form of a d x d unitary, [`PURE_LAYOUT`] ordering:
///
/// ```text
/// U~ |n>|0> =  Re(U)|n> |0> + Im(U)|n> |1>
/// U~ |n>|1> = -Im(U)|n> |0> + Re(U)|n> |1>
/// ```
pub fn real_form_gate(u: &CMatrix) -> Result<CMatrix> {
    let residual = u.unitarity_residual();
    if residual > UNITARY_TOL {
        return Err(Error::NotUnitary { residual });
    }
    let d = u.rows();
    let mut out = CMatrix::zeros(2 * d, 2 * d);
    for m in 0..d {
        for n in 0..d {
            let z = u[(m, n)];
            let at = |e| PURE_LAYOUT.index(d, m, e);
            let from = |e| PURE_LAYOUT.index(d, n, e);
            out[(at(0), from(0))] = Cplx::new(z.re, 0.0);
            out[(at(1), from(0))] = Cplx::new(z.im, 0.0);
            out[(at(0), from(1))] = Cplx::new(-z.im, 0.0);
            out[(at(1), from(1))] = Cplx::new(z.re, 0.0);
        }
    }
    Ok(out)
}

/// Block bookkeeping form `|0><0|_e ⊗ Re(rho) + |1><1|_e ⊗ Im(rho)`.
///
/// Not a physical state: the Im block is antisymmetric, so the matrix is
/// neither Hermitian nor positive. Only its trace (= 1) is guaranteed.
#[derive(Debug, Clone, PartialEq)]
pub struct RebitDensity {
    dim_system: usize,
    matrix: CMatrix,
}

impl RebitDensity {
    pub fn dim_system(&self) -> usize {
        self.dim_system
    }

    /// 2d x 2d matrix in [`MIXED_LAYOUT`] ordering.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// The `e`-diagonal block (`e = 0`: Re(rho), `e = 1`: Im(rho)).
    pub fn block(&self, e: usize) -> CMatrix {
        let d = self.dim_system;
        CMatrix::from_fn(d, d, |r, c| self.matrix[(e * d + r, e * d + c)])
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }
}

pub fn embed_mixed(rho: &CMatrix) -> Result<RebitDensity> {
    rho.check_density(DENSITY_TOL)?;
    let d = rho.rows();
    let mut m = CMatrix::zeros(2 * d, 2 * d);
    for r in 0..d {
        for c in 0..d {
            let z = rho[(r, c)];
            m[(MIXED_LAYOUT.index(d, r, 0), MIXED_LAYOUT.index(d, c, 0))] = Cplx::new(z.re, 0.0);
            m[(MIXED_LAYOUT.index(d, r, 1), MIXED_LAYOUT.index(d, c, 1))] = Cplx::new(z.im, 0.0);
        }
    }
    Ok(RebitDensity {
        dim_system: d,
        matrix: m,
    })
}

/// Build a [`RebitDensity`]-shaped operator `|e><e| ⊗ block` without any
/// density checks. Used for the physical preparations in the sampler.
pub(crate) fn extra_block(block: &CMatrix, e: usize) -> CMatrix {
    let d = block.rows();
    let mut m = CMatrix::zeros(2 * d, 2 * d);
    for r in 0..d {
        for c in 0..d {
            m[(e * d + r, e * d + c)] = block[(r, c)];
        }
    }
    m
}

/// The rebit density as a signed combination of three physical preparations:
///
/// ```text
/// rho_rebit = |0><0| ⊗ Re(rho) - i t (|1><1| ⊗ sigma_plus - |1><1| ⊗ sigma_minus)
/// ```
///
/// where `i Im(rho) = t (sigma_plus - sigma_minus)` is the Jordan decomposition
/// of a traceless Hermitian matrix into unit-trace positive parts. Each
/// preparation is an ordinary density matrix, so a laboratory can prepare it
/// and estimate any linear functional of the rebit density by recombining.
#[derive(Debug, Clone, PartialEq)]
pub struct RebitPreparations {
    dim_system: usize,
    /// Re(rho), Hermitian with unit trace.
    pub real: CMatrix,
    pub plus: CMatrix,
    pub minus: CMatrix,
    /// `t = Tr` of the positive part of `i Im(rho)`; zero for real `rho`.
    pub weight: f64,
}

impl RebitPreparations {
    pub fn new(rho: &CMatrix) -> Result<Self> {
        rho.check_density(DENSITY_TOL)?;
        let d = rho.rows();
        let real = rho.map(|z| Cplx::new(z.re, 0.0));
        let b = rho.map(|z| Cplx::new(0.0, z.im)).hermitize();
        let spec = hermitian_eig(&b)?;
        let plus = spec.apply(|l| Cplx::new(l.max(0.0), 0.0));
        let minus = spec.apply(|l| Cplx::new((-l).max(0.0), 0.0));
        let weight = plus.trace().re;
        let uniform = CMatrix::identity(d).scale_re(1.0 / d as f64);
        if weight <= 1e-14 {
            return Ok(Self {
                dim_system: d,
                real,
                plus: uniform.clone(),
                minus: uniform,
                weight: 0.0,
            });
        }
        Ok(Self {
            dim_system: d,
            real,
            plus: plus.scale_re(1.0 / weight),
            minus: minus.scale_re(1.0 / minus.trace().re.max(1e-300)),
            weight,
        })
    }

    pub fn dim_system(&self) -> usize {
        self.dim_system
    }

    /// Physical 2d x 2d inputs in [`MIXED_LAYOUT`] ordering: real, plus, minus.
    pub fn inputs(&self) -> [CMatrix; 3] {
        [
            extra_block(&self.real, 0),
            extra_block(&self.plus, 1),
            extra_block(&self.minus, 1),
        ]
    }

    /// Recombine a quantity that is linear in the input density.
    pub fn combine<T>(&self, real: T, plus: T, minus: T) -> T
    where
        T: std::ops::Sub<Output = T> + std::ops::Mul<Cplx, Output = T>,
    {
        real - (plus - minus) * Cplx::new(0.0, self.weight)
    }
}
