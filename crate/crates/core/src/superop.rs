//! Superoperators as `n² × n²` matrices acting on column-stacked vectors,
//! together with Choi matrices and Kraus sets.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{
    self, frobenius, herm_eig, hermiticity_residual, require_dim, symmetrize, unvec_mat, vec_mat,
    ComplexMatrix, HermEig, C64, ONE, ZERO,
};

/// A linear map on `n × n` matrices with `vec(Φ(X)) = mat · vec(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    n: usize,
    mat: ComplexMatrix,
}

/// Ordered Kraus operators {V_j} of Φ = Σ_j V_j(·)V_j*. May be empty.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    n: usize,
    ops: Vec<ComplexMatrix>,
}

/// C(Φ) = Σ_{jk} |j⟩⟨k| ⊗ Φ(|j⟩⟨k|).
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    n: usize,
    mat: ComplexMatrix,
}

/// Outcome of a complete-positivity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpCheck {
    pub is_cp: bool,
    /// Smallest eigenvalue of the symmetrized Choi matrix.
    pub min_eig: f64,
    pub max_eig: f64,
    /// ‖C − C*‖_F.
    pub hermiticity_residual: f64,
}

fn superop_dim(mat: &ComplexMatrix) -> Result<usize> {
    let n = (mat.nrows() as f64).sqrt().round() as usize;
    if n == 0 || n * n != mat.nrows() || !mat.is_square() {
        return Err(Error::Dimension(format!(
            "superoperator matrix must be n²×n², got {}x{}",
            mat.nrows(),
            mat.ncols()
        )));
    }
    Ok(n)
}

impl KrausSet {
    pub fn new(n: usize, ops: Vec<ComplexMatrix>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("Kraus dimension must be ≥ 1".into()));
        }
        for (j, v) in ops.iter().enumerate() {
            require_dim(v, n, &format!("Kraus operator {j}"))?;
        }
        Ok(Self { n, ops })
    }

    /// Infers `n` from the first operator; an empty list needs [`KrausSet::new`].
    pub fn from_ops(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let n = ops
            .first()
            .map(|v| v.nrows())
            .ok_or_else(|| Error::Dimension("cannot infer dimension of empty Kraus list".into()))?;
        Self::new(n, ops)
    }

    pub fn empty(n: usize) -> Self {
        Self { n, ops: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn into_ops(self) -> Vec<ComplexMatrix> {
        self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Σ_j V_j* V_j, i.e. Φ*(1).
    pub fn dual_of_identity(&self) -> ComplexMatrix {
        self.ops
            .iter()
            .fold(linalg::zeros(self.n, self.n), |acc, v| acc + v.adjoint() * v)
    }
}

impl Superoperator {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let n = superop_dim(&mat)?;
        Ok(Self { n, mat })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            mat: linalg::identity(n * n),
        }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            mat: linalg::zeros(n * n, n * n),
        }
    }

    /// X ↦ Xᵀ.
    pub fn transpose_map(n: usize) -> Self {
        let mut mat = linalg::zeros(n * n, n * n);
        for j in 0..n {
            for k in 0..n {
                mat[(j * n + k, k * n + j)] = ONE;
            }
        }
        Self { n, mat }
    }

    /// Σ_j V_j(·)V_j*, realized as Σ_j conj(V_j) ⊗ V_j.
    pub fn from_kraus(ks: &KrausSet) -> Self {
        let n = ks.dim();
        let mat = ks
            .ops()
            .iter()
            .fold(linalg::zeros(n * n, n * n), |acc, v| {
                acc + linalg::kron(&linalg::conj(v), v)
            });
        Self { n, mat }
    }

    /// X ↦ AXB, realized as Bᵀ ⊗ A.
    pub fn from_sandwich(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        let n = a.nrows();
        require_dim(a, n, "left factor")?;
        require_dim(b, n, "right factor")?;
        Ok(Self {
            n,
            mat: linalg::kron(&b.transpose(), a),
        })
    }

    /// −i[H,·].
    pub fn hamiltonian(h: &ComplexMatrix) -> Result<Self> {
        let id = linalg::identity(h.nrows());
        let left = Self::from_sandwich(h, &id)?;
        let right = Self::from_sandwich(&id, h)?;
        Ok((left - right).scale(-linalg::I))
    }

    /// {Z,·}.
    pub fn anticommutator(z: &ComplexMatrix) -> Result<Self> {
        let id = linalg::identity(z.nrows());
        Ok(Self::from_sandwich(z, &id)? + Self::from_sandwich(&id, z)?)
    }

    /// K(·) + (·)K*.
    pub fn derivation(k: &ComplexMatrix) -> Result<Self> {
        let id = linalg::identity(k.nrows());
        Ok(Self::from_sandwich(k, &id)? + Self::from_sandwich(&id, &k.adjoint())?)
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        require_dim(x, self.n, "argument")?;
        unvec_mat(&(&self.mat * vec_mat(x)?), self.n)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self {
            n: self.n,
            mat: &self.mat * &other.mat,
        })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            n: self.n,
            mat: self.mat.map(|z| z * s),
        }
    }

    pub fn choi(&self) -> ChoiMatrix {
        let n = self.n;
        let mut mat = linalg::zeros(n * n, n * n);
        for j in 0..n {
            for k in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        mat[(j * n + a, k * n + b)] = self.mat[(b * n + a, k * n + j)];
                    }
                }
            }
        }
        ChoiMatrix { n, mat }
    }

    /// Trace of the map; basis independent, equals the trace of `mat`.
    pub fn trace(&self) -> C64 {
        linalg::trace(&self.mat)
    }

    /// Hilbert-Schmidt adjoint: ⟨Φ†(X), Y⟩ = ⟨X, Φ(Y)⟩.
    pub fn hs_adjoint(&self) -> Self {
        Self {
            n: self.n,
            mat: self.mat.adjoint(),
        }
    }

    /// Dual map: tr(B Φ(A)) = tr(Φ*(B) A).
    pub fn dual(&self) -> Self {
        let t = Self::transpose_map(self.n).mat;
        Self {
            n: self.n,
            mat: &t * self.mat.transpose() * &t,
        }
    }

    /// ‖C(Φ) − C(Φ)*‖_F; zero iff Φ is Hermitian-preserving.
    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(&self.choi().mat)
    }

    pub fn is_hermitian_preserving(&self, tol: f64) -> bool {
        let choi = self.choi();
        hermiticity_residual(&choi.mat) <= tol * frobenius(&choi.mat).max(1.0)
    }

    /// ‖vec(1)† · mat‖; zero iff tr(Φ(X)) = 0 for every X.
    pub fn trace_annihilation_residual(&self) -> f64 {
        let row = vec_mat(&linalg::identity(self.n))
            .expect("identity is square")
            .adjoint()
            * &self.mat;
        row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_trace_annihilating(&self, tol: f64) -> bool {
        self.trace_annihilation_residual() <= tol * frobenius(&self.mat).max(1.0)
    }

    /// Choi-based complete positivity test. Never fails; reports the spectrum edge.
    pub fn is_cp(&self, tol: f64) -> CpCheck {
        self.choi().cp_check(tol)
    }

    pub(crate) fn same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "superoperators act on {}x{} and {}x{} matrices",
                self.n, self.n, other.n, other.n
            )));
        }
        Ok(())
    }
}

macro_rules! superop_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr for Superoperator {
            type Output = Superoperator;
            fn $method(self, rhs: Superoperator) -> Superoperator {
                &self $op &rhs
            }
        }

        impl<'a> $tr<&'a Superoperator> for &'a Superoperator {
            type Output = Superoperator;
            fn $method(self, rhs: &'a Superoperator) -> Superoperator {
                assert_eq!(self.n, rhs.n, "superoperator dimension mismatch");
                Superoperator {
                    n: self.n,
                    mat: &self.mat $op &rhs.mat,
                }
            }
        }
    };
}

superop_binop!(Add, add, +);
superop_binop!(Sub, sub, -);

impl Neg for Superoperator {
    type Output = Superoperator;
    fn neg(self) -> Superoperator {
        Superoperator {
            n: self.n,
            mat: -self.mat,
        }
    }
}

impl Mul<f64> for Superoperator {
    type Output = Superoperator;
    fn mul(self, rhs: f64) -> Superoperator {
        Superoperator {
            n: self.n,
            mat: self.mat.scale(rhs),
        }
    }
}

impl ChoiMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let n = superop_dim(&mat)?;
        Ok(Self { n, mat })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn to_superop(&self) -> Superoperator {
        let n = self.n;
        let mut mat = DMatrix::from_element(n * n, n * n, ZERO);
        for j in 0..n {
            for k in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        mat[(b * n + a, k * n + j)] = self.mat[(j * n + a, k * n + b)];
                    }
                }
            }
        }
        Superoperator { n, mat }
    }

    /// Spectrum of the Choi matrix; fails when it is not Hermitian within `tol`.
    pub fn eig(&self, tol: f64) -> Result<HermEig> {
        herm_eig(&self.mat, tol)
    }

    pub fn cp_check(&self, tol: f64) -> CpCheck {
        let residual = hermiticity_residual(&self.mat);
        let hermitian = residual <= tol * frobenius(&self.mat).max(1.0);
        let eig = herm_eig(&symmetrize(&self.mat), tol).expect("symmetrized matrix is Hermitian");
        let (min_eig, max_eig) = (eig.min(), eig.max());
        CpCheck {
            is_cp: hermitian && min_eig >= -tol * max_eig.max(1.0),
            min_eig,
            max_eig,
            hermiticity_residual: residual,
        }
    }

    /// Kraus operators √λᵢ·unvec(vᵢ) for every eigenvalue above `tol·max(1, λ_max)`.
    ///
    /// The number of operators returned is the numerical Choi rank.
    pub fn kraus(&self, tol: f64) -> Result<KrausSet> {
        let eig = self.eig(tol)?;
        let scale = eig.max().max(1.0);
        if eig.min() < -tol * scale {
            return Err(Error::NotCp {
                min_eig: eig.min(),
                bound: -tol * scale,
            });
        }
        let ops = eig
            .values
            .iter()
            .zip(&eig.vectors)
            .filter(|(lambda, _)| **lambda > tol * scale)
            .map(|(lambda, v)| {
                unvec_mat(v, self.n)
                    .expect("eigenvector has length n²")
                    .scale(lambda.sqrt())
            })
            .collect();
        Ok(KrausSet { n: self.n, ops })
    }

    /// Number of eigenvalues above `tol·max(1, λ_max)`.
    pub fn rank(&self, tol: f64) -> Result<usize> {
        let eig = self.eig(tol)?;
        let scale = eig.max().max(1.0);
        Ok(eig.values.iter().filter(|l| **l > tol * scale).count())
    }
}
