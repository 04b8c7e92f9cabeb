//! Worked examples and counterexamples with closed-form answers: the Bloch
//! generator, decompositions of the transposition map, the completely
//! depolarizing channel, and a non-orthogonal Hamiltonian/dissipator pair.

use crate::decompose::{dissipator, GeneratorSpec};
use crate::error::{Error, Result};
use crate::linalg::{
    self, c, frobenius, from_rows, herm_eig, is_hermitian, matrix_unit, require_dim, ComplexMatrix,
    C64, ZERO,
};
use crate::sampling::Sampler;
use crate::superop::{KrausSet, Superoperator};
use crate::weighted::{self, WeightMatrix};

/// Parameters of the qubit Bloch equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochParams {
    pub omega: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
}

impl BlochParams {
    pub fn new(omega: f64, gamma1: f64, gamma2: f64, gamma3: f64) -> Result<Self> {
        for (name, g) in [("gamma1", gamma1), ("gamma2", gamma2), ("gamma3", gamma3)] {
            if g.is_nan() || g < 0.0 {
                return Err(Error::InvalidParameter(format!("{name} = {g} must be ≥ 0")));
            }
        }
        Ok(Self {
            omega,
            gamma1,
            gamma2,
            gamma3,
        })
    }

    /// H = ω/2·σ_z and V₁ = √γ₁|0⟩⟨1|, V₂ = √γ₂|1⟩⟨0|, V₃ = √γ₃·σ_z.
    pub fn operators(&self) -> (ComplexMatrix, KrausSet) {
        let h = linalg::pauli_z().scale(self.omega / 2.0);
        let ops = vec![
            matrix_unit(2, 0, 1).scale(self.gamma1.sqrt()),
            matrix_unit(2, 1, 0).scale(self.gamma2.sqrt()),
            linalg::pauli_z().scale(self.gamma3.sqrt()),
        ];
        (h, KrausSet::new(2, ops).expect("2x2 operators"))
    }

    pub fn spec(&self) -> GeneratorSpec {
        let (hamiltonian, lindblads) = self.operators();
        GeneratorSpec::Gksl {
            hamiltonian,
            lindblads,
        }
    }
}

/// The Bloch generator's superoperator matrix, entered directly.
pub fn bloch_generator(p: &BlochParams) -> Superoperator {
    let BlochParams {
        omega,
        gamma1: g1,
        gamma2: g2,
        gamma3: g3,
    } = *p;
    let off = -(g1 + g2) / 2.0 - 2.0 * g3;
    let mat = from_rows(&[
        vec![c(-g2, 0.0), ZERO, ZERO, c(g1, 0.0)],
        vec![ZERO, c(off, omega), ZERO, ZERO],
        vec![ZERO, ZERO, c(off, -omega), ZERO],
        vec![c(g2, 0.0), ZERO, ZERO, c(-g1, 0.0)],
    ]);
    Superoperator::new(mat).expect("4x4")
}

/// Closed forms of −i[H_B,·] and Γ_B for the Bloch generator.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochParts {
    pub hamiltonian: Superoperator,
    pub dissipator: Superoperator,
}

fn require_qubit_weight(b: &ComplexMatrix, tol: f64) -> Result<WeightMatrix> {
    require_dim(b, 2, "B")?;
    let w = WeightMatrix::new(b.clone())?;
    w.require_decomposable(tol)?;
    Ok(w)
}

/// Builds the B-dependent Hamiltonian and dissipative parts from
/// β_jk = b_jk / tr B and β = (γ₁β₁₂ − γ₂·conj(β₂₁))/2, and checks that
/// they add up to the Bloch generator.
pub fn bloch_reference_parts(p: &BlochParams, b: &ComplexMatrix, tol: f64) -> Result<BlochParts> {
    let w = require_qubit_weight(b, tol)?;
    let beta_jk = |j: usize, k: usize| b[(j, k)] / w.trace();
    let (b11, b12, b21, b22) = (beta_jk(0, 0), beta_jk(0, 1), beta_jk(1, 0), beta_jk(1, 1));
    let beta = (b12 * p.gamma1 - b21.conj() * p.gamma2) / 2.0;
    let bc = beta.conj();
    let iw = c(0.0, p.omega);
    let g3 = 2.0 * p.gamma3;

    let ham = from_rows(&[
        vec![ZERO, beta, bc, ZERO],
        vec![-bc, iw + (b11.conj() - b11) * g3, ZERO, bc],
        vec![-beta, ZERO, -iw + (b22.conj() - b22) * g3, beta],
        vec![ZERO, -beta, -bc, ZERO],
    ]);
    let mid = (p.gamma1 + p.gamma2) / 2.0;
    let gamma = from_rows(&[
        vec![c(p.gamma2, 0.0), beta, bc, c(-p.gamma1, 0.0)],
        vec![-bc, (b11.conj() + b22) * g3 + mid, ZERO, bc],
        vec![-beta, ZERO, (b11 + b22.conj()) * g3 + mid, beta],
        vec![c(-p.gamma2, 0.0), -beta, -bc, c(p.gamma1, 0.0)],
    ]);
    let parts = BlochParts {
        hamiltonian: Superoperator::new(ham)?,
        dissipator: Superoperator::new(gamma)?,
    };
    let l = bloch_generator(p);
    let residual = frobenius(&(parts.hamiltonian.matrix() - parts.dissipator.matrix() - l.matrix()));
    let bound = tol * frobenius(l.matrix()).max(1.0);
    if residual > bound {
        return Err(Error::Postcondition {
            what: "L = ham - dissipator",
            value: residual,
            bound,
        });
    }
    Ok(parts)
}

/// Γ_B for Hermitian B, where β = β₁₂(γ₁−γ₂)/2 and the diagonal loses its
/// B-dependence. Here β₁₂ = b₁₂ / tr B, so for tr B = 1 the entries read
/// b₁₂(γ₁−γ₂)/2.
pub fn bloch_hermitian_dissipator(p: &BlochParams, b: &ComplexMatrix, tol: f64) -> Result<Superoperator> {
    let w = require_qubit_weight(b, tol)?;
    if !is_hermitian(b, tol) {
        return Err(Error::NotHermitian {
            residual: linalg::hermiticity_residual(b),
            bound: tol * frobenius(b).max(1.0),
        });
    }
    let s = b[(0, 1)] / w.trace() * ((p.gamma1 - p.gamma2) / 2.0);
    let sc = s.conj();
    let diag = c((p.gamma1 + p.gamma2) / 2.0 + 2.0 * p.gamma3, 0.0);
    Superoperator::new(from_rows(&[
        vec![c(p.gamma2, 0.0), s, sc, c(-p.gamma1, 0.0)],
        vec![-sc, diag, ZERO, sc],
        vec![-s, ZERO, diag, s],
        vec![c(-p.gamma2, 0.0), -s, -sc, c(p.gamma1, 0.0)],
    ]))
}

/// tr(B·B̄), with B̄ the entrywise conjugate. Always real.
pub fn transpose_criterion(b: &ComplexMatrix) -> f64 {
    linalg::trace(&(b * linalg::conj(b))).re
}

/// A decomposition (·)ᵀ = K(·) + (·)K* + Φ with Φ positive.
#[derive(Debug, Clone, PartialEq)]
pub struct TransposeDecomposition {
    pub k: ComplexMatrix,
    pub phi: Superoperator,
    /// Coefficient c in Φ = (·)ᵀ − c·id; c ≤ 0 certifies positivity.
    pub identity_weight: f64,
    pub weighted_trace: C64,
    pub recomposition_residual: f64,
    /// Smallest eigenvalue of Φ(X) over the sampled PSD inputs X.
    pub sampled_min_eig: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransposeOutcome {
    pub criterion: f64,
    pub decomposition: Option<TransposeDecomposition>,
}

pub const TRANSPOSE_SAMPLES: usize = 50;

/// Decides whether the transposition map splits as K(·)+(·)K*+Φ with Φ
/// positive and tr(Φ(B*(·)B)) = 0. It does iff tr(BB̄) ≤ 0 (ties within
/// `tol` count as decomposable).
pub fn transpose_decomposition(b: &ComplexMatrix, tol: f64, seed: u64) -> Result<TransposeOutcome> {
    let w = WeightMatrix::new(b.clone())?;
    w.require_decomposable(tol)?;
    let n = w.dim();
    let criterion = transpose_criterion(b);
    if criterion > tol {
        return Ok(TransposeOutcome {
            criterion,
            decomposition: None,
        });
    }

    let tr = w.trace();
    let abs2 = tr.norm_sqr();
    let k = linalg::identity(n) * (tr * (criterion / (2.0 * tr.re * abs2)));
    let identity_weight = criterion / abs2;
    let transpose = Superoperator::transpose_map(n);
    let phi = &transpose - &(Superoperator::identity(n) * identity_weight);

    let weighted_trace = weighted::weighted_trace(&phi, &w)?;
    let rebuilt = Superoperator::derivation(&k)? + phi.clone();
    let recomposition_residual = frobenius(&(rebuilt.matrix() - transpose.matrix()));

    let mut sampler = Sampler::new(seed);
    let mut sampled_min_eig = f64::INFINITY;
    for _ in 0..TRANSPOSE_SAMPLES {
        let rank = 1 + sampler.index(n);
        let x = sampler.psd(n, rank);
        let y = phi.apply(&x)?;
        let m = herm_eig(&y, tol)?.min() / frobenius(&x).max(1.0);
        sampled_min_eig = sampled_min_eig.min(m);
    }

    let checks = [
        ("tr(Phi(B*(.)B)) = 0", weighted_trace.norm(), tol * frobenius(b).powi(2).max(1.0)),
        ("recomposition", recomposition_residual, tol),
        ("Phi positive on samples", -sampled_min_eig, tol),
    ];
    for (what, value, bound) in checks {
        if value > bound {
            return Err(Error::Postcondition { what, value, bound });
        }
    }

    Ok(TransposeOutcome {
        criterion,
        decomposition: Some(TransposeDecomposition {
            k,
            phi,
            identity_weight,
            weighted_trace,
            recomposition_residual,
            sampled_min_eig,
            samples: TRANSPOSE_SAMPLES,
        }),
    })
}

/// Kraus operators n^{-1/2}|j⟩⟨k| of D(X) = tr(X)·1/n.
pub fn depolarizing_kraus(n: usize) -> KrausSet {
    let s = 1.0 / (n as f64).sqrt();
    let ops = (0..n * n)
        .map(|i| matrix_unit(n, i / n, i % n).scale(s))
        .collect();
    KrausSet::new(n, ops).expect("n×n units")
}

pub fn depolarizing(n: usize) -> Superoperator {
    Superoperator::from_kraus(&depolarizing_kraus(n))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepolarizingReport {
    /// ‖C(D) − 1/n‖_F.
    pub choi_identity_residual: f64,
    /// ‖C(D)·vec B‖; C(D) = 1/n, so this is ‖B‖_F / n.
    pub kernel_residual: f64,
    /// ‖√C(D)·vec B‖ = √⟨vec B|C(D)|vec B⟩ = ‖B‖_F / √n.
    pub sqrt_kernel_residual: f64,
    pub weighted_trace: C64,
    /// Σ_{jk} |tr(B*·n^{-1/2}|j⟩⟨k|)|².
    pub kraus_overlap_sum: f64,
    pub choi_rank: usize,
    /// D ∉ CP_B(n).
    pub excluded: bool,
}

/// Shows the completely depolarizing channel lies outside CP_B(n) for B ≠ 0.
pub fn depolarizing_exclusion(b: &ComplexMatrix, n: usize, tol: f64) -> Result<DepolarizingReport> {
    require_dim(b, n, "B")?;
    let w = WeightMatrix::new(b.clone())?;
    if w.is_zero() {
        return Err(Error::ZeroWeight);
    }
    let d = depolarizing(n);
    let choi = d.choi();
    let choi_identity_residual =
        frobenius(&(choi.matrix() - linalg::identity(n * n).unscale(n as f64)));
    let membership = weighted::in_cp_b(&d, &w, tol)?;
    let kraus_overlap_sum = depolarizing_kraus(n)
        .ops()
        .iter()
        .map(|v| linalg::hs_inner(b, v).expect("same shape").norm_sqr())
        .sum();
    Ok(DepolarizingReport {
        choi_identity_residual,
        kernel_residual: membership.kernel_residual,
        sqrt_kernel_residual: membership.weighted_trace.re.max(0.0).sqrt(),
        weighted_trace: membership.weighted_trace,
        kraus_overlap_sum,
        choi_rank: choi.rank(tol)?,
        excluded: !membership.member,
    })
}

/// H and Φ ∈ CP_B with tr(BH) = 0 whose parts are not B-orthogonal.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalityCounterexample {
    pub h: ComplexMatrix,
    pub v: ComplexMatrix,
    /// ⟨i[H,·], Φ − {Φ*(1)/2,·}⟩_B.
    pub value: C64,
    /// (b_j − b_k)(tr B − b_j).
    pub expected: f64,
    pub tr_bh: C64,
    pub tr_bv: C64,
}

pub fn orthogonality_counterexample(
    b: &ComplexMatrix,
    j: usize,
    k: usize,
    tol: f64,
) -> Result<OrthogonalityCounterexample> {
    let n = b.nrows();
    if !b.is_square() || n < 2 {
        return Err(Error::InvalidWeight("B must be square with n ≥ 2".into()));
    }
    if j >= n || k >= n || j == k {
        return Err(Error::InvalidWeight(format!(
            "indices ({j}, {k}) must be distinct and below {n}"
        )));
    }
    let scale = frobenius(b).max(1.0);
    for r in 0..n {
        for s in 0..n {
            if r != s && b[(r, s)].norm() > tol * scale {
                return Err(Error::InvalidWeight("B must be diagonal".into()));
            }
        }
        if b[(r, r)].im.abs() > tol * scale || b[(r, r)].re <= tol {
            return Err(Error::InvalidWeight(
                "B must be Hermitian positive definite".into(),
            ));
        }
    }
    let (bj, bk) = (b[(j, j)].re, b[(k, k)].re);
    if (bj - bk).abs() <= tol * scale {
        return Err(Error::InvalidWeight(format!(
            "b_j = b_k = {bj}; orthogonality holds for multiples of the identity"
        )));
    }
    let w = WeightMatrix::new(b.clone())?;
    let e = |r, s| matrix_unit(n, r, s);

    let h = e(j, j).scale(bk) + e(j, k) + e(k, j) - e(k, k).scale(bj);
    let v0 = e(j, j).map(|z| z * linalg::I) + e(j, k) - e(k, k);
    let shift = linalg::trace(&(b * &v0)) / w.trace();
    let v = &v0 - linalg::identity(n).map(|z| z * shift);
    let phi = Superoperator::from_kraus(&KrausSet::new(n, vec![v.clone()])?);
    let ih = -Superoperator::hamiltonian(&h)?;
    let value = weighted::b_inner(&ih, &dissipator(&phi), &w, tol)?;
    let expected = (bj - bk) * (w.trace().re - bj);

    let tr_bh = linalg::trace(&(b * &h));
    let tr_bv = linalg::trace(&(b * &v));
    let checks = [
        ("value = (b_j-b_k)(tr B-b_j)", (value - c(expected, 0.0)).norm(), tol * expected.abs().max(1.0)),
        ("tr(BH) = 0", tr_bh.norm(), tol * scale),
        ("tr(BV) = 0", tr_bv.norm(), tol * scale),
    ];
    for (what, value, bound) in checks {
        if value > bound {
            return Err(Error::Postcondition { what, value, bound });
        }
    }
    Ok(OrthogonalityCounterexample {
        h,
        v,
        value,
        expected,
        tr_bh,
        tr_bv,
    })
}
