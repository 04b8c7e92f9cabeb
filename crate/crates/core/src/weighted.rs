//! B-weighted traces and inner products.
//!
//! The same weight `B` is used under two hypothesis sets: decompositions only
//! need `Re tr B ≠ 0`, the B-inner product needs `B` Hermitian positive
//! definite. [`WeightMatrix`] checks each one at the point of use.

use crate::error::{Error, Result};
use crate::linalg::{
    self, frobenius, herm_eig, is_hermitian, require_dim, vec_mat, ComplexMatrix, ComplexVector,
    C64,
};
use crate::superop::{CpCheck, KrausSet, Superoperator};

#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    b: ComplexMatrix,
    trace: C64,
    vec: ComplexVector,
}

impl WeightMatrix {
    pub fn new(b: ComplexMatrix) -> Result<Self> {
        let vec = vec_mat(&b)?;
        let trace = linalg::trace(&b);
        Ok(Self { b, trace, vec })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(linalg::identity(n)).expect("identity is square")
    }

    pub fn dim(&self) -> usize {
        self.b.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn trace(&self) -> C64 {
        self.trace
    }

    pub fn re_trace(&self) -> f64 {
        self.trace.re
    }

    pub fn vec(&self) -> &ComplexVector {
        &self.vec
    }

    pub fn is_zero(&self) -> bool {
        self.b.iter().all(|z| *z == linalg::ZERO)
    }

    /// Hypothesis for unique decompositions: Re tr B ≠ 0.
    pub fn require_decomposable(&self, tol: f64) -> Result<()> {
        if self.trace.re.abs() <= tol * frobenius(&self.b) || self.trace.re == 0.0 {
            return Err(Error::Weight(format!(
                "Re tr(B) = {:.3e} vanishes (‖B‖_F = {:.3e})",
                self.trace.re,
                frobenius(&self.b)
            )));
        }
        Ok(())
    }

    /// Hypothesis for the B-inner product: B Hermitian positive definite.
    /// Returns the smallest eigenvalue.
    pub fn require_positive_definite(&self, tol: f64) -> Result<f64> {
        if !is_hermitian(&self.b, tol) {
            return Err(Error::NotPositiveDefinite { min_eig: f64::NAN });
        }
        let min_eig = herm_eig(&self.b, tol)?.min();
        if min_eig <= tol {
            return Err(Error::NotPositiveDefinite { min_eig });
        }
        Ok(min_eig)
    }
}

fn require_map_dim(phi: &Superoperator, b: &WeightMatrix) -> Result<()> {
    if phi.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "map acts on {0}x{0} matrices, weight is {1}x{1}",
            phi.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// tr(Φ(X(·)Y)) evaluated as the Choi bilinear form ⟨vec X*| C(Φ) |vec Y⟩.
pub fn sandwich_trace(phi: &Superoperator, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<C64> {
    let n = phi.dim();
    require_dim(x, n, "left factor")?;
    require_dim(y, n, "right factor")?;
    let left = vec_mat(&x.adjoint())?;
    let right = phi.choi().matrix() * vec_mat(y)?;
    Ok(left.dotc(&right))
}

/// tr(Φ(B*(·)B)) = ⟨vec B| C(Φ) |vec B⟩.
pub fn weighted_trace(phi: &Superoperator, b: &WeightMatrix) -> Result<C64> {
    require_map_dim(phi, b)?;
    Ok(b.vec().dotc(&(phi.choi().matrix() * b.vec())))
}

/// Membership report for CP_B(n).
#[derive(Debug, Clone, PartialEq)]
pub struct CpBReport {
    pub member: bool,
    pub cp: CpCheck,
    pub weighted_trace: C64,
    /// ‖C(Φ)·vec B‖.
    pub kernel_residual: f64,
    /// tr(B*V_j) for the Kraus operators extracted from C(Φ); empty when Φ is not CP.
    pub kraus_overlaps: Vec<C64>,
    pub choi_norm: f64,
}

pub fn in_cp_b(phi: &Superoperator, b: &WeightMatrix, tol: f64) -> Result<CpBReport> {
    require_map_dim(phi, b)?;
    let choi = phi.choi();
    let cp = choi.cp_check(tol);
    let image = choi.matrix() * b.vec();
    let wt = b.vec().dotc(&image);
    let choi_norm = frobenius(choi.matrix());
    let kraus_overlaps = if cp.is_cp {
        choi.kraus(tol)?
            .ops()
            .iter()
            .map(|v| linalg::hs_inner(b.matrix(), v).expect("same shape"))
            .collect()
    } else {
        Vec::new()
    };
    Ok(CpBReport {
        member: cp.is_cp && wt.norm() <= tol * choi_norm.max(1.0),
        cp,
        weighted_trace: wt,
        kernel_residual: image.norm(),
        kraus_overlaps,
        choi_norm,
    })
}

/// F_e(Φ, ρ) = tr(Φ(ρ(·)ρ)) = Σ_j |tr(V_j ρ)|².
pub fn entanglement_fidelity(phi: &Superoperator, rho: &ComplexMatrix, tol: f64) -> Result<f64> {
    require_dim(rho, phi.dim(), "state")?;
    if !is_hermitian(rho, tol) {
        return Err(Error::InvalidState("state is not Hermitian".into()));
    }
    let tr = linalg::trace(rho);
    if (tr - linalg::ONE).norm() > tol {
        return Err(Error::InvalidState(format!("state has trace {tr}")));
    }
    let min_eig = herm_eig(rho, tol)?.min();
    if min_eig < -tol {
        return Err(Error::InvalidState(format!(
            "state has negative eigenvalue {min_eig:.3e}"
        )));
    }
    let value = sandwich_trace(phi, rho, rho)?;
    let bound = tol * frobenius(phi.choi().matrix()).max(1.0);
    if value.im.abs() > bound {
        return Err(Error::NotHermitianPreserving {
            residual: value.im.abs(),
            bound,
        });
    }
    Ok(value.re)
}

/// ⟨Φ, Ψ⟩_B = tr(Φ† ∘ (B(·)B) ∘ Ψ).
pub fn b_inner(phi: &Superoperator, psi: &Superoperator, b: &WeightMatrix, tol: f64) -> Result<C64> {
    phi.same_dim(psi)?;
    require_map_dim(phi, b)?;
    b.require_positive_definite(tol)?;
    Ok(b_inner_unchecked(phi, psi, b))
}

pub(crate) fn b_inner_unchecked(phi: &Superoperator, psi: &Superoperator, b: &WeightMatrix) -> C64 {
    let weight = linalg::kron(&b.matrix().transpose(), b.matrix());
    // tr(M† W N) = Σ conj(M)_{ij} (W N)_{ij}
    let wn = weight * psi.matrix();
    phi.matrix().iter().zip(wn.iter()).map(|(m, x)| m.conj() * x).sum()
}

/// Closed forms of the B-inner products between i[H,·], {Z,·} and a CP map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForms {
    /// ⟨i[H,·], {Z,·}⟩_B = i·tr(B)·tr(Z[B,H]).
    pub hamiltonian_anticommutator: C64,
    /// ⟨i[H,·], Φ⟩_B = Σ_j 2 Im(tr(HBV_j)·conj(tr(BV_j))).
    pub hamiltonian_map: C64,
    /// ⟨{Z,·}, Φ⟩_B = Σ_j 2 Re(tr(ZBV_j)·conj(tr(BV_j))).
    pub anticommutator_map: C64,
}

pub fn b_inner_closed_forms(
    h: &ComplexMatrix,
    z: &ComplexMatrix,
    ks: &KrausSet,
    b: &WeightMatrix,
    tol: f64,
) -> Result<ClosedForms> {
    let n = b.dim();
    require_dim(h, n, "H")?;
    require_dim(z, n, "Z")?;
    if ks.dim() != n {
        return Err(Error::Dimension("Kraus set dimension differs from B".into()));
    }
    for m in [h, z] {
        if !is_hermitian(m, tol) {
            return Err(Error::NotHermitian {
                residual: linalg::hermiticity_residual(m),
                bound: tol * frobenius(m).max(1.0),
            });
        }
    }
    b.require_positive_definite(tol)?;
    let bm = b.matrix();
    let c1 = linalg::I * b.trace() * linalg::trace(&(z * linalg::commutator(bm, h)?));
    let (mut c2, mut c3) = (0.0, 0.0);
    for v in ks.ops() {
        let bv = linalg::trace(&(bm * v)).conj();
        c2 += 2.0 * (linalg::trace(&(h * bm * v)) * bv).im;
        c3 += 2.0 * (linalg::trace(&(z * bm * v)) * bv).re;
    }
    Ok(ClosedForms {
        hamiltonian_anticommutator: c1,
        hamiltonian_map: C64::new(c2, 0.0),
        anticommutator_map: C64::new(c3, 0.0),
    })
}
