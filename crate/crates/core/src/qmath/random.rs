//! Random pure, mixed and nearly-pure states.

use rand_distr::{Distribution, StandardNormal};

use super::matrix::{CMatrix, CVector, Cplx};
use super::prng::Prng;
use crate::error::{Error, Result};

/// Ensemble for [`random_pure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PureMode {
    /// Haar measure (normalized complex Gaussian vector).
    Haar,
    /// Haar draw with every real and imaginary component folded to be
    /// nonnegative. The square-root inversion of ReDSM-pure only recovers
    /// magnitudes, so these are the states it can reconstruct.
    Nonneg,
}

fn gaussian(prng: &mut Prng) -> Cplx {
    let re: f64 = StandardNormal.sample(prng);
    let im: f64 = StandardNormal.sample(prng);
    Cplx::new(re, im)
}

pub fn random_pure(d: usize, mode: PureMode, prng: &mut Prng) -> CVector {
    assert!(d >= 2, "random_pure needs d >= 2");
    loop {
        let raw: Vec<Cplx> = (0..d)
            .map(|_| {
                let z = gaussian(prng);
                match mode {
                    PureMode::Haar => z,
                    PureMode::Nonneg => Cplx::new(z.re.abs(), z.im.abs()),
                }
            })
            .collect();
        if let Ok(v) = CVector::new(raw).normalized() {
            return v;
        }
    }
}

/// Ginibre ensemble: G G^dag / Tr(G G^dag) with standard complex Gaussian G.
pub fn random_mixed(d: usize, prng: &mut Prng) -> CMatrix {
    assert!(d >= 2, "random_mixed needs d >= 2");
    let g = CMatrix::from_fn(d, d, |_, _| gaussian(prng));
    let w = &g * &g.dagger();
    w.hermitize()
        .trace_normalized()
        .expect("Ginibre product has positive trace")
}

/// (1 - nu) |psi><psi| + nu I / d
pub fn nearly_pure(psi: &CVector, nu: f64) -> Result<CMatrix> {
    if !(0.0..=1.0).contains(&nu) || nu.is_nan() {
        return Err(Error::NuOutOfRange(nu));
    }
    let d = psi.dim();
    let pure = psi.outer().scale_re(1.0 - nu);
    let noise = CMatrix::identity(d).scale_re(nu / d as f64);
    Ok(&pure + &noise)
}
