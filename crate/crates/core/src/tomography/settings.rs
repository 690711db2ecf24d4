//! Projective measurement settings on the pointer qubit, on the
//! (extra, pointer) qubit pair, and on the system for MUB tomography.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::qmath::{CMatrix, CVector, Cplx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SettingId {
    /// Pointer measured in the σx eigenbasis `|+>, |->`.
    PointerX,
    /// Pointer measured in the σy eigenbasis `|L>, |R>`.
    PointerY,
    /// Pointer measured in `|0>, |1>`.
    PointerZ,
    /// Outcomes `DD, DA, AD, AA`.
    XX,
    /// Outcomes `DL, DR, AL, AR`.
    XY,
    /// Outcomes `LD, LA, RD, RA`.
    YX,
    /// Outcomes `LL, LR, RL, RR`.
    YY,
    /// Two-qubit computational basis `|00>, |01>, |10>, |11>`.
    Computational,
    /// `Φ+, Φ-, Ψ+, Ψ-` with real phases.
    Bell,
    /// Bell-like states with `±i` relative phases.
    BellPhase,
    /// Basis `b` of a complete MUB set.
    Mub(usize),
}

impl fmt::Display for SettingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SettingId::Mub(b) => write!(f, "Mub{b}"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetting {
    id: SettingId,
    projectors: Vec<CVector>,
}

/// Orthonormality and completeness tolerance.
pub const BASIS_TOL: f64 = 1e-12;

impl MeasurementSetting {
    pub fn new(id: SettingId, projectors: Vec<CVector>) -> Result<Self> {
        let dim = projectors.first().map(CVector::dim).unwrap_or(0);
        if projectors.len() != dim || projectors.iter().any(|v| v.dim() != dim) {
            return Err(Error::DimMismatch {
                expected: format!("{dim} vectors of length {dim}"),
                found: format!("{} vectors", projectors.len()),
            });
        }
        let mut sum = CMatrix::zeros(dim, dim);
        for v in &projectors {
            sum = &sum + &v.outer();
        }
        let residual = sum.max_abs_diff(&CMatrix::identity(dim));
        if residual > BASIS_TOL {
            return Err(Error::NotDensityMatrix {
                reason: format!("setting {id} is not a complete orthonormal basis (residual {residual:e})"),
            });
        }
        Ok(Self { id, projectors })
    }

    pub fn id(&self) -> SettingId {
        self.id
    }

    pub fn projectors(&self) -> &[CVector] {
        &self.projectors
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    /// `<v|op|v>` for each projector, real part. For a Hermitian `op` of
    /// trace `w` these are probabilities summing to `w`.
    pub fn probabilities(&self, op: &CMatrix) -> Vec<f64> {
        self.projectors.iter().map(|v| v.inner(&op.mul_vec(v)).re).collect()
    }
}

fn ket(amps: &[Cplx]) -> CVector {
    CVector::new(amps.to_vec())
}

fn r(x: f64) -> Cplx {
    Cplx::new(x, 0.0)
}

fn im(x: f64) -> Cplx {
    Cplx::new(0.0, x)
}

/// `|D>, |A>`: σx eigenstates.
fn x_pair() -> [CVector; 2] {
    let s = FRAC_1_SQRT_2;
    [ket(&[r(s), r(s)]), ket(&[r(s), r(-s)])]
}

/// `|L>, |R>`: σy eigenstates.
fn y_pair() -> [CVector; 2] {
    let s = FRAC_1_SQRT_2;
    [ket(&[r(s), im(s)]), ket(&[r(s), im(-s)])]
}

fn z_pair() -> [CVector; 2] {
    [CVector::basis(2, 0), CVector::basis(2, 1)]
}

fn product(first: &[CVector; 2], second: &[CVector; 2]) -> Vec<CVector> {
    first
        .iter()
        .flat_map(|a| second.iter().map(move |b| a.kron(b)))
        .collect()
}

fn build(id: SettingId, v: Vec<CVector>) -> MeasurementSetting {
    MeasurementSetting::new(id, v).expect("fixed bases are orthonormal")
}

pub fn setting(id: SettingId) -> MeasurementSetting {
    let s = FRAC_1_SQRT_2;
    let z = r(0.0);
    match id {
        SettingId::PointerX => build(id, x_pair().to_vec()),
        SettingId::PointerY => build(id, y_pair().to_vec()),
        SettingId::PointerZ => build(id, z_pair().to_vec()),
        SettingId::XX => build(id, product(&x_pair(), &x_pair())),
        SettingId::XY => build(id, product(&x_pair(), &y_pair())),
        SettingId::YX => build(id, product(&y_pair(), &x_pair())),
        SettingId::YY => build(id, product(&y_pair(), &y_pair())),
        SettingId::Computational => build(id, product(&z_pair(), &z_pair())),
        SettingId::Bell => build(
            id,
            vec![
                ket(&[r(s), z, z, r(s)]),
                ket(&[r(s), z, z, r(-s)]),
                ket(&[z, r(s), r(s), z]),
                ket(&[z, r(s), r(-s), z]),
            ],
        ),
        SettingId::BellPhase => build(
            id,
            vec![
                ket(&[r(s), z, z, im(s)]),
                ket(&[r(s), z, z, im(-s)]),
                ket(&[z, r(s), im(s), z]),
                ket(&[z, r(s), im(-s), z]),
            ],
        ),
        SettingId::Mub(_) => panic!("MUB settings come from mub_bases"),
    }
}

/// Settings of the separable-basis ReDSM scheme, in extraction order.
pub const SSB_SETTINGS: [SettingId; 5] = [
    SettingId::XX,
    SettingId::XY,
    SettingId::YX,
    SettingId::YY,
    SettingId::Computational,
];

/// Settings of the Bell-basis ReDSM scheme, in extraction order.
pub const BBB_SETTINGS: [SettingId; 3] = [SettingId::Bell, SettingId::BellPhase, SettingId::Computational];

/// Pointer settings of the usual DSM.
pub const POINTER_SETTINGS: [SettingId; 3] = [SettingId::PointerX, SettingId::PointerY, SettingId::PointerZ];
