//! Dense complex matrix primitives.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Storage is column-major, so the
//! raw slice of a square matrix is exactly its column-stacked vectorization:
//! `vec(B)[j*n + k] = B[(k, j)]`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Default absolute/relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Builds a matrix from row-major nested rows.
pub fn from_rows(rows: &[Vec<C64>]) -> ComplexMatrix {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(nrows, ncols, |r, c| rows[r][c])
}

/// Builds a matrix from real row-major nested rows.
pub fn from_real_rows(rows: &[&[f64]]) -> ComplexMatrix {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    DMatrix::from_fn(nrows, ncols, |r, c| C64::new(rows[r][c], 0.0))
}

pub fn identity(n: usize) -> ComplexMatrix {
    DMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
    DMatrix::zeros(rows, cols)
}

/// Matrix unit |j⟩⟨k|.
pub fn matrix_unit(n: usize, j: usize, k: usize) -> ComplexMatrix {
    let mut m = zeros(n, n);
    m[(j, k)] = ONE;
    m
}

pub fn diag(values: &[C64]) -> ComplexMatrix {
    DMatrix::from_diagonal(&DVector::from_column_slice(values))
}

pub fn pauli_x() -> ComplexMatrix {
    from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    from_rows(&[vec![ZERO, -I], vec![I, ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
}

fn require_square(a: &ComplexMatrix, what: &str) -> Result<usize> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(Error::Dimension(format!(
            "{what} must be square and non-empty, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(a.nrows())
}

fn require_same_shape(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension(format!(
            "shapes differ: {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(())
}

pub(crate) fn require_dim(a: &ComplexMatrix, n: usize, what: &str) -> Result<()> {
    if a.shape() != (n, n) {
        return Err(Error::Dimension(format!(
            "{what} must be {n}x{n}, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}

/// Column-stacking vectorization.
pub fn vec_mat(b: &ComplexMatrix) -> Result<ComplexVector> {
    require_square(b, "vec operand")?;
    Ok(DVector::from_column_slice(b.as_slice()))
}

/// Inverse of [`vec_mat`].
pub fn unvec_mat(v: &ComplexVector, n: usize) -> Result<ComplexMatrix> {
    if n == 0 || v.len() != n * n {
        return Err(Error::Dimension(format!(
            "cannot unvec a vector of length {} into {n}x{n}",
            v.len()
        )));
    }
    Ok(DMatrix::from_column_slice(n, n, v.as_slice()))
}

/// Hilbert-Schmidt inner product tr(A* B), conjugate-linear in `a`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    require_same_shape(a, b)?;
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_square(a, "commutator operand")?;
    require_same_shape(a, b)?;
    Ok(a * b - b * a)
}

pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_square(a, "anticommutator operand")?;
    require_same_shape(a, b)?;
    Ok(a * b + b * a)
}

pub fn trace(a: &ComplexMatrix) -> C64 {
    a.diagonal().iter().sum()
}

/// Entrywise complex conjugate (B̄).
pub fn conj(a: &ComplexMatrix) -> ComplexMatrix {
    a.map(|z| z.conj())
}

pub fn frobenius(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Tolerance-based equality: ‖A−B‖_F ≤ atol + rtol·max(‖A‖_F, ‖B‖_F).
pub fn approx_eq(a: &ComplexMatrix, b: &ComplexMatrix, atol: f64, rtol: f64) -> bool {
    a.shape() == b.shape()
        && frobenius(&(a - b)) <= atol + rtol * frobenius(a).max(frobenius(b))
}

/// ‖H − H*‖_F.
pub fn hermiticity_residual(h: &ComplexMatrix) -> f64 {
    frobenius(&(h - h.adjoint()))
}

pub fn is_hermitian(h: &ComplexMatrix, tol: f64) -> bool {
    h.is_square() && hermiticity_residual(h) <= tol * frobenius(h).max(1.0)
}

/// (H + H*)/2.
pub fn symmetrize(h: &ComplexMatrix) -> ComplexMatrix {
    (h + h.adjoint()).unscale(2.0)
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Sorted in descending order.
    pub values: Vec<f64>,
    /// `vectors[i]` belongs to `values[i]`.
    pub vectors: Vec<ComplexVector>,
}

impl HermEig {
    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Σ λᵢ vᵢvᵢ*.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.first().map_or(0, |v| v.len());
        let mut out = zeros(n, n);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            out += (v * v.adjoint()).scale(*lambda);
        }
        out
    }
}

/// Hermitian eigendecomposition with deterministic ordering and phases.
///
/// The input is symmetrized before solving. Eigenvalues come out descending;
/// each eigenvector is rotated so that its largest-magnitude component (lowest
/// index on ties) is real and positive.
pub fn herm_eig(h: &ComplexMatrix, tol: f64) -> Result<HermEig> {
    require_square(h, "eigen operand")?;
    let residual = hermiticity_residual(h);
    let bound = tol * frobenius(h).max(1.0);
    if residual > bound {
        return Err(Error::NotHermitian { residual, bound });
    }
    let eig = symmetrize(h).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut values = Vec::with_capacity(order.len());
    let mut vectors = Vec::with_capacity(order.len());
    for idx in order {
        values.push(eig.eigenvalues[idx]);
        vectors.push(fix_phase(eig.eigenvectors.column(idx).into_owned()));
    }
    Ok(HermEig { values, vectors })
}

fn fix_phase(mut v: ComplexVector) -> ComplexVector {
    let mut pivot = 0;
    let mut best = -1.0;
    // Relative slack so that ties survive roundoff.
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best + 1e-12 * scale {
            best = m;
            pivot = i;
        }
    }
    let p = v[pivot];
    if p.norm() > 0.0 {
        let phase = p.conj() / p.norm();
        v.iter_mut().for_each(|z| *z *= phase);
        v[pivot] = C64::new(v[pivot].re, 0.0);
    }
    v
}
