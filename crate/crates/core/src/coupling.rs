//! System-extra-pointer interaction, its Mølmer–Sørensen decomposition, and
//! postselected outcome states.
//!
//! Tensor orderings: pure-state circuits are `s ⊗ e ⊗ p`, density circuits are
//! `e ⊗ s ⊗ p`. Outcome states over `(e, p)` are always ordered
//! `|00>, |01>, |10>, |11>`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::qmath::{fourier_ket, hermitian_eig, pauli, CMatrix, CVector, Cplx, I, ONE, ZERO};
use crate::rebit::embed_mixed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorLayout {
    /// system ⊗ extra ⊗ pointer
    Pure,
    /// extra ⊗ system ⊗ pointer
    Mixed,
}

impl TensorLayout {
    pub fn index(self, d: usize, s: usize, e: usize, p: usize) -> usize {
        match self {
            TensorLayout::Pure => s * 4 + e * 2 + p,
            TensorLayout::Mixed => e * 2 * d + s * 2 + p,
        }
    }

    /// Permutation mapping indices of `self` onto indices of `to`.
    pub fn permutation_to(self, to: TensorLayout, d: usize) -> Vec<usize> {
        let mut perm = vec![0; 4 * d];
        for s in 0..d {
            for e in 0..2 {
                for p in 0..2 {
                    perm[self.index(d, s, e, p)] = to.index(d, s, e, p);
                }
            }
        }
        perm
    }
}

/// Check `0 < theta <= pi/2`.
pub fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta <= FRAC_PI_2 + 1e-15 {
        Ok(())
    } else {
        Err(Error::BadTheta(theta))
    }
}

/// `2 sin^2(theta / 2)`, i.e. `1 - cos(theta)`.
pub fn epsilon(theta: f64) -> f64 {
    let h = (0.5 * theta).sin();
    2.0 * h * h
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionSpec {
    d: usize,
    n: usize,
    theta: f64,
    layout: TensorLayout,
}

impl InteractionSpec {
    pub fn new(d: usize, n: usize, theta: f64, layout: TensorLayout) -> Result<Self> {
        check_theta(theta)?;
        if n >= d {
            return Err(Error::BadIndex { n, d });
        }
        Ok(Self { d, n, theta, layout })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn layout(&self) -> TensorLayout {
        self.layout
    }
}

/// `exp(i theta |n><n|_s ⊗ σy_e ⊗ σy_p)` as a 4d x 4d matrix.
///
/// Since `(σy ⊗ σy)^2 = I` this is
/// `I + (cos θ - 1) Π_n ⊗ I ⊗ I + i sin θ Π_n ⊗ σy ⊗ σy`.
pub fn interaction(spec: &InteractionSpec) -> CMatrix {
    let InteractionSpec { d, n, theta, layout } = *spec;
    let yy = pauli::y().kron(&pauli::y());
    let mut u = CMatrix::identity(4 * d);
    let diag = Cplx::new(theta.cos() - 1.0, 0.0);
    let coupling = I * theta.sin();
    for a in 0..4 {
        let (ea, pa) = (a / 2, a % 2);
        u[(layout.index(d, n, ea, pa), layout.index(d, n, ea, pa))] += diag;
        for b in 0..4 {
            let (eb, pb) = (b / 2, b % 2);
            u[(layout.index(d, n, ea, pa), layout.index(d, n, eb, pb))] += coupling * yy[(a, b)];
        }
    }
    u
}

/// Pointer-only coupling of the usual DSM, `exp(i theta |n><n|_s ⊗ σx_p)`,
/// ordered `s ⊗ p`.
pub fn pointer_interaction(d: usize, n: usize, theta: f64) -> Result<CMatrix> {
    check_theta(theta)?;
    if n >= d {
        return Err(Error::BadIndex { n, d });
    }
    let proj = pauli::projector(d, n);
    let base = CMatrix::identity(2 * d);
    let diag = proj.kron(&CMatrix::identity(2)).scale_re(theta.cos() - 1.0);
    let flip = proj.kron(&pauli::x()).scale(I * theta.sin());
    Ok(&(&base + &diag) + &flip)
}

/// Pauli `p` acting on qubit `q` of an `n_qubits` register (qubit 0 is the
/// most significant tensor factor).
fn on_qubit(p: &CMatrix, q: usize, n_qubits: usize) -> CMatrix {
    (0..n_qubits).fold(CMatrix::identity(1), |acc, k| {
        if k == q {
            acc.kron(p)
        } else {
            acc.kron(&CMatrix::identity(2))
        }
    })
}

fn collective(p: &CMatrix, n_qubits: usize) -> CMatrix {
    let dim = 1 << n_qubits;
    (0..n_qubits).fold(CMatrix::zeros(dim, dim), |acc, q| &acc + &on_qubit(p, q, n_qubits))
}

/// Mølmer–Sørensen gate `exp[-i (phi/4) (cos φ' S_x + sin φ' S_y)^2]` on
/// `n_qubits` qubits, with `S_{x,y}` the collective Pauli sums.
pub fn ms_gate(phi: f64, varphi: f64, n_qubits: usize) -> CMatrix {
    assert!(n_qubits >= 2, "ms_gate needs at least two qubits");
    let s = &collective(&pauli::x(), n_qubits).scale_re(varphi.cos())
        + &collective(&pauli::y(), n_qubits).scale_re(varphi.sin());
    let generator = (&s * &s).hermitize();
    let spec = hermitian_eig(&generator).expect("collective spin square is Hermitian");
    spec.apply(|lambda| Cplx::from_polar(1.0, -0.25 * phi * lambda))
}

/// The two commuting factors of the qubit interaction, in `s ⊗ e ⊗ p` order:
/// the two-body term `exp(i θ/2 I ⊗ σy ⊗ σy)` and the three-body term
/// `exp(± i θ/2 σz ⊗ σy ⊗ σy)`, the latter synthesised as
/// `U_MS(-π/2, π/2) · exp(∓ i θ/2 σz_s) · U_MS(-π/2, π/2)^dag`.
pub fn decomposition_factors(spec: &InteractionSpec) -> Result<(CMatrix, CMatrix)> {
    if spec.d != 2 {
        return Err(Error::UnsupportedDimension(spec.d));
    }
    let half = 0.5 * spec.theta;
    let yy = pauli::y().kron(&pauli::y());
    let two_body = &CMatrix::identity(8).scale_re(half.cos()) + &CMatrix::identity(2).kron(&yy).scale(I * half.sin());

    // |0><0| = (I + σz)/2, |1><1| = (I - σz)/2
    let sign = if spec.n == 0 { 1.0 } else { -1.0 };
    let rot = CMatrix::diagonal(&[Cplx::from_polar(1.0, -sign * half), Cplx::from_polar(1.0, sign * half)]);
    let local = on_qubit(&rot, 0, 3);
    let ms = ms_gate(-FRAC_PI_2, FRAC_PI_2, 3);
    let three_body = &(&ms * &local) * &ms.dagger();
    Ok((two_body, three_body))
}

/// Interaction rebuilt from two-body, MS and local gates (d = 2 only).
pub fn decomposed_interaction(spec: &InteractionSpec) -> Result<CMatrix> {
    let (two_body, three_body) = decomposition_factors(spec)?;
    let u = &two_body * &three_body;
    Ok(match spec.layout {
        TensorLayout::Pure => u,
        TensorLayout::Mixed => u.permuted(&TensorLayout::Pure.permutation_to(TensorLayout::Mixed, 2)),
    })
}

/// Unnormalized `(e, p)` outcome after postselecting the system onto `|c_0>`.
#[derive(Debug, Clone, PartialEq)]
pub struct PostselectedPure {
    /// Amplitudes over `|00>, |01>, |10>, |11>`.
    pub eta: CVector,
    pub accept_prob: f64,
}

impl PostselectedPure {
    /// Joint probability of accepting and reading `|e p>`.
    pub fn prob(&self, e: usize, p: usize) -> f64 {
        self.eta[2 * e + p].norm_sqr()
    }
}

/// Closed-form postselected outcome for a pure state:
///
/// ```text
/// eta = [ (Σr - ε ψr_n)|00> + (Σi - ε ψi_n)|10> - i sinθ ψr_n |11> + i sinθ ψi_n |01> ] / sqrt(d)
/// ```
pub fn postselect_pure(psi: &CVector, n: usize, theta: f64) -> Result<PostselectedPure> {
    let d = psi.dim();
    check_theta(theta)?;
    if n >= d {
        return Err(Error::BadIndex { n, d });
    }
    let sum: Cplx = psi.iter().sum();
    let eps = epsilon(theta);
    let s = theta.sin();
    let scale = 1.0 / (d as f64).sqrt();
    let (pr, pi) = (psi[n].re, psi[n].im);
    let eta = CVector::new(vec![
        Cplx::new(sum.re - eps * pr, 0.0) * scale,
        Cplx::new(0.0, s * pi) * scale,
        Cplx::new(sum.im - eps * pi, 0.0) * scale,
        Cplx::new(0.0, -s * pr) * scale,
    ]);
    let accept_prob = eta.norm_sqr();
    Ok(PostselectedPure { eta, accept_prob })
}

/// Unnormalized `(e, p)` operator after postselecting onto `|c_j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct PostselectedMixed {
    /// 4 x 4 over `|00>, |01>, |10>, |11>`.
    pub rho_out: CMatrix,
    pub n: usize,
    pub j: usize,
}

impl PostselectedMixed {
    /// Total weight of this `(n, j)` branch.
    pub fn weight(&self) -> f64 {
        self.rho_out.trace().re
    }
}

/// Evolve `input ⊗ |0><0|_p` (input is 2d x 2d in `e ⊗ s` order) with the
/// interaction for probe `n`, then contract the system with `<c_j| · |c_j>`.
pub fn postselect_operator(input: &CMatrix, n: usize, j: usize, theta: f64) -> Result<CMatrix> {
    let d = input.rows() / 2;
    if input.shape() != (2 * d, 2 * d) || d == 0 {
        return Err(Error::DimMismatch {
            expected: "2d x 2d operator".into(),
            found: format!("{:?}", input.shape()),
        });
    }
    let spec = InteractionSpec::new(d, n, theta, TensorLayout::Mixed)?;
    let cj = fourier_ket(d, j)?;
    let pointer0 = CMatrix::diagonal(&[ONE, ZERO]);
    let rho_in = input.kron(&pointer0);
    let u = interaction(&spec);
    let evolved = &(&u * &rho_in) * &u.dagger();

    let layout = TensorLayout::Mixed;
    Ok(CMatrix::from_fn(4, 4, |a, b| {
        let (ea, pa, eb, pb) = (a / 2, a % 2, b / 2, b % 2);
        let mut acc = ZERO;
        for s in 0..d {
            for t in 0..d {
                acc += cj[s].conj() * evolved[(layout.index(d, s, ea, pa), layout.index(d, t, eb, pb))] * cj[t];
            }
        }
        acc
    }))
}

/// Outcome operator for the rebit density of `rho`.
///
/// The bookkeeping input is not Hermitian, so neither is the result:
/// `rho_out[(3,0)]` is carried by its Hermitian part and `rho_out[(1,2)]` by
/// its anti-Hermitian part.
pub fn postselect_mixed(rho: &CMatrix, n: usize, j: usize, theta: f64) -> Result<PostselectedMixed> {
    let rebit = embed_mixed(rho)?;
    let rho_out = postselect_operator(rebit.matrix(), n, j, theta)?;
    Ok(PostselectedMixed { rho_out, n, j })
}
