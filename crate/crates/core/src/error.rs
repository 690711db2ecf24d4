use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A^dag| = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not unitary (max |U^dag U - I| = {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("not a density matrix: {reason}")]
    NotDensityMatrix { reason: String },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimMismatch { expected: String, found: String },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("noise weight nu = {0} outside [0, 1]")]
    NuOutOfRange(f64),

    #[error("rebit amplitudes carry an imaginary residue of {residual:e}")]
    NotReal { residual: f64 },

    #[error("coupling strength theta = {0} outside (0, pi/2]")]
    BadTheta(f64),

    #[error("probed basis index {n} out of range for dimension {d}")]
    BadIndex { n: usize, d: usize },

    #[error("operation supports only d = 2, got d = {0}")]
    UnsupportedDimension(usize),

    #[error("estimate has zero norm")]
    ZeroNorm,

    #[error("|sum of amplitudes| = {0:e} is too small for the DSM estimator to fix the phase")]
    DegenerateSigma(f64),

    #[error("missing measurement setting {0}")]
    MissingSetting(String),

    #[error("sin(theta) vanishes for theta = {0}")]
    SingularTheta(f64),

    #[error("dimension {0} is not prime")]
    NotPrime(usize),

    #[error("incomplete data: {0}")]
    IncompleteData(String),

    #[error("cannot sample from an empty distribution")]
    EmptyDistribution,

    #[error("copy budget too small: {0}")]
    BudgetTooSmall(String),

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("protocol {protocol} cannot reconstruct {state}")]
    UnsupportedProtocol { protocol: String, state: String },
}
