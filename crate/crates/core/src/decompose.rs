//! Generators of completely positive semigroups and their unique
//! B-weighted decomposition `L = K(·) + (·)K* + Φ`.
//!
//! [`decompose`] solves for `K` directly from the Choi matrix of `L`: once
//! `C(Φ)·vec B = 0`, the identity
//! `C(L)·vec B = tr(B)·vec K + conj(tr(B*K))·vec 1` pins `K` up to the real
//! number `t = tr(B*K)`, and pairing with `vec B` gives
//! `t = ⟨vec B, C(L) vec B⟩ / (2 Re tr B)`.
//!
//! [`decompose_constructive`] starts from a known representation
//! `K₀(·) + (·)K₀* + Σ V_j(·)V_j*` and shifts every Kraus operator by a
//! multiple of the identity until it is HS-orthogonal to `B`. The two routes
//! share no code beyond the final bookkeeping and are used to check each
//! other.

use crate::error::{Error, Result};
use crate::linalg::{
    self, frobenius, hermiticity_residual, is_hermitian, require_dim, unvec_mat, vec_mat,
    ComplexMatrix, C64,
};
use crate::superop::{ChoiMatrix, KrausSet, Superoperator};
use crate::weighted::WeightMatrix;

/// Structured description of a generator.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    RawSuperop(Superoperator),
    /// K₀(·) + (·)K₀* + Σ_j V_j(·)V_j*.
    KWedge { k0: ComplexMatrix, kraus: KrausSet },
    /// −i[H,·] + Σ_j V_j(·)V_j* − ½{Σ_j V_j*V_j, ·}.
    Gksl {
        hamiltonian: ComplexMatrix,
        lindblads: KrausSet,
    },
}

impl GeneratorSpec {
    pub fn dim(&self) -> usize {
        match self {
            Self::RawSuperop(l) => l.dim(),
            Self::KWedge { kraus, .. } => kraus.dim(),
            Self::Gksl { lindblads, .. } => lindblads.dim(),
        }
    }
}

/// Φ − {Φ*(1)/2, ·}.
pub fn dissipator(phi: &Superoperator) -> Superoperator {
    let n = phi.dim();
    let one = phi
        .dual()
        .apply(&linalg::identity(n))
        .expect("identity has the map's dimension");
    phi - &Superoperator::anticommutator(&one.scale(0.5)).expect("square")
}

pub fn build_generator(spec: &GeneratorSpec, tol: f64) -> Result<Superoperator> {
    match spec {
        GeneratorSpec::RawSuperop(l) => Ok(l.clone()),
        GeneratorSpec::KWedge { k0, kraus } => {
            require_dim(k0, kraus.dim(), "K0")?;
            Ok(Superoperator::derivation(k0)? + Superoperator::from_kraus(kraus))
        }
        GeneratorSpec::Gksl {
            hamiltonian,
            lindblads,
        } => {
            require_dim(hamiltonian, lindblads.dim(), "H")?;
            if !is_hermitian(hamiltonian, tol) {
                return Err(Error::NotHermitian {
                    residual: hermiticity_residual(hamiltonian),
                    bound: tol * frobenius(hamiltonian).max(1.0),
                });
            }
            let phi = Superoperator::from_kraus(lindblads);
            let one = lindblads.dual_of_identity().scale(0.5);
            Ok(Superoperator::hamiltonian(hamiltonian)? + phi
                - Superoperator::anticommutator(&one)?)
        }
    }
}

/// Numeric evidence attached to every decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// ‖K(·)+(·)K*+Φ − L‖_F.
    pub reconstruction_residual: f64,
    pub choi_min_eig: f64,
    pub choi_max_eig: f64,
    /// |tr(Φ(B*(·)B))|.
    pub weighted_trace_abs: f64,
    /// |Im tr(B*K)|.
    pub im_trbk_abs: f64,
    /// ‖C(Φ)·vec B‖.
    pub kernel_residual: f64,
    /// Numerical rank of C(Φ).
    pub choi_rank: usize,
    pub tol: f64,
}

/// The unique pair (K, Φ) for a weight B.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub b: WeightMatrix,
    pub k: ComplexMatrix,
    pub phi: Superoperator,
    pub phi_choi: ChoiMatrix,
    pub phi_kraus: KrausSet,
    pub diagnostics: Diagnostics,
}

impl Decomposition {
    /// Hermitian part of K: K = Z − iH.
    pub fn z(&self) -> ComplexMatrix {
        (&self.k + self.k.adjoint()).unscale(2.0)
    }

    /// H = i(K − K*)/2.
    pub fn h(&self) -> ComplexMatrix {
        (&self.k - self.k.adjoint()).map(|z| z * linalg::I * 0.5)
    }
}

/// K(·) + (·)K* + Φ.
pub fn recompose(d: &Decomposition) -> Superoperator {
    Superoperator::derivation(&d.k).expect("K is square") + d.phi.clone()
}

fn check_weight(l: &Superoperator, b: &WeightMatrix, tol: f64) -> Result<()> {
    if l.dim() != b.dim() {
        return Err(Error::Dimension(format!(
            "generator acts on {0}x{0} matrices, weight is {1}x{1}",
            l.dim(),
            b.dim()
        )));
    }
    b.require_decomposable(tol)
}

/// Closed-form Choi-kernel solve.
pub fn decompose(l: &Superoperator, b: &WeightMatrix, tol: f64) -> Result<Decomposition> {
    check_weight(l, b, tol)?;
    let n = l.dim();
    let choi = l.choi();
    let scale = frobenius(choi.matrix()).max(1.0);
    let residual = hermiticity_residual(choi.matrix());
    if residual > tol * scale {
        return Err(Error::NotHermitianPreserving {
            residual,
            bound: tol * scale,
        });
    }

    let image = choi.matrix() * b.vec();
    let pairing = b.vec().dotc(&image);
    let b_norm2 = b.vec().norm_squared().max(1.0);
    if pairing.im.abs() > tol * scale * b_norm2 {
        return Err(Error::NotHermitianPreserving {
            residual: pairing.im.abs(),
            bound: tol * scale * b_norm2,
        });
    }
    let t = pairing.re / (2.0 * b.re_trace());
    let gamma = vec_mat(&linalg::identity(n))?;
    let k_vec = (image - gamma.scale(t)).map(|z| z / b.trace());
    let k = unvec_mat(&k_vec, n)?;

    let phi = l - &Superoperator::derivation(&k)?;
    assemble(l, b, k, phi, None, tol)
}

/// Kraus-shift construction from a known wedge representation.
pub fn decompose_constructive(
    k0: &ComplexMatrix,
    ks: &KrausSet,
    b: &WeightMatrix,
    tol: f64,
) -> Result<Decomposition> {
    let n = ks.dim();
    require_dim(k0, n, "K0")?;
    let target = build_generator(
        &GeneratorSpec::KWedge {
            k0: k0.clone(),
            kraus: ks.clone(),
        },
        tol,
    )?;
    check_weight(&target, b, tol)?;

    let tr_b_star = b.trace().conj();
    let id = linalg::identity(n);
    let mut k_tilde = k0.clone();
    let mut overlap_sum = 0.0;
    let mut shifted = Vec::with_capacity(ks.len());
    for v in ks.ops() {
        // tr(B* V) / tr(B*)
        let c = linalg::hs_inner(b.matrix(), v)? / tr_b_star;
        shifted.push(v - id.map(|z| z * c));
        k_tilde += v.map(|z| z * c.conj());
        overlap_sum += (c * tr_b_star).norm_sqr();
    }
    k_tilde -= id.scale(overlap_sum / (2.0 * b.trace().norm_sqr()));
    let drift = linalg::hs_inner(b.matrix(), &k_tilde)?.im / b.re_trace();
    let k = k_tilde - id.map(|z| z * C64::new(0.0, drift));

    let kraus = KrausSet::new(n, shifted)?;
    let phi = Superoperator::from_kraus(&kraus);
    assemble(&target, b, k, phi, Some(kraus), tol)
}

fn assemble(
    target: &Superoperator,
    b: &WeightMatrix,
    k: ComplexMatrix,
    phi: Superoperator,
    kraus: Option<KrausSet>,
    tol: f64,
) -> Result<Decomposition> {
    let phi_choi = phi.choi();
    let eig = phi_choi.eig(tol).map_err(|e| match e {
        Error::NotHermitian { residual, bound } => Error::NotHermitianPreserving { residual, bound },
        other => other,
    })?;
    let eig_scale = eig.max().max(1.0);
    if eig.min() < -tol * eig_scale {
        return Err(Error::NotInWedge {
            min_eig: eig.min(),
            bound: -tol * eig_scale,
        });
    }
    let phi_kraus = match kraus {
        Some(ks) => ks,
        None => phi_choi.kraus(tol)?,
    };
    let choi_rank = eig.values.iter().filter(|l| **l > tol * eig_scale).count();

    let scale = frobenius(target.choi().matrix())
        .max(frobenius(phi_choi.matrix()))
        .max(1.0);
    let b_norm = frobenius(b.matrix()).max(1.0);
    let kernel = phi_choi.matrix() * b.vec();
    let weighted = b.vec().dotc(&kernel);
    let im_trbk = linalg::hs_inner(b.matrix(), &k)?.im.abs();
    let rebuilt = Superoperator::derivation(&k)? + phi.clone();
    let reconstruction = frobenius(&(rebuilt.matrix() - target.matrix()));

    let checks = [
        ("Im tr(B*K) = 0", im_trbk, tol * b_norm * frobenius(&k).max(1.0)),
        ("C(Phi) vec B = 0", kernel.norm(), tol * scale * b_norm),
        ("tr(Phi(B*(.)B)) = 0", weighted.norm(), tol * scale * b_norm * b_norm),
        ("recomposition", reconstruction, tol * scale),
    ];
    for (what, value, bound) in checks {
        if value > bound {
            return Err(Error::Postcondition { what, value, bound });
        }
    }

    Ok(Decomposition {
        b: b.clone(),
        k,
        phi,
        phi_choi,
        phi_kraus,
        diagnostics: Diagnostics {
            reconstruction_residual: reconstruction,
            choi_min_eig: eig.min(),
            choi_max_eig: eig.max(),
            weighted_trace_abs: weighted.norm(),
            im_trbk_abs: im_trbk,
            kernel_residual: kernel.norm(),
            choi_rank,
            tol,
        },
    })
}

/// Decomposition of a trace-preserving generator as
/// `L = −i[H,·] + Φ − {Φ*(1)/2, ·}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CptpDecomposition {
    pub h: ComplexMatrix,
    pub decomposition: Decomposition,
    /// ‖Z + Φ*(1)/2‖_F.
    pub anticommutator_residual: f64,
    /// |Re tr(B*H) − ½ Im tr(Φ(B))|.
    pub coro_condition_residual: f64,
    /// tr(BH) when B is Hermitian.
    pub hermitian_weight_trace: Option<C64>,
}

impl CptpDecomposition {
    pub fn phi(&self) -> &Superoperator {
        &self.decomposition.phi
    }

    /// −i[H,·].
    pub fn hamiltonian_part(&self) -> Superoperator {
        Superoperator::hamiltonian(&self.h).expect("H is square")
    }

    /// {Φ*(1)/2, ·} − Φ, so that L = −i[H,·] − Γ.
    pub fn dissipative_part(&self) -> Superoperator {
        -dissipator(&self.decomposition.phi)
    }
}

pub fn decompose_cptp(l: &Superoperator, b: &WeightMatrix, tol: f64) -> Result<CptpDecomposition> {
    check_weight(l, b, tol)?;
    let scale = frobenius(l.matrix()).max(1.0);
    let residual = l.trace_annihilation_residual();
    if residual > tol * scale {
        return Err(Error::NotTracePreserving {
            residual,
            bound: tol * scale,
        });
    }
    let d = decompose(l, b, tol)?;
    let n = l.dim();
    let h = d.h();
    let dual_one = d.phi.dual().apply(&linalg::identity(n))?;
    let anticommutator_residual = frobenius(&(d.z() + dual_one.scale(0.5)));
    let bound = tol * scale.max(frobenius(d.phi_choi.matrix()));
    if anticommutator_residual > bound {
        return Err(Error::NotTracePreserving {
            residual: anticommutator_residual,
            bound,
        });
    }

    let b_norm = frobenius(b.matrix()).max(1.0);
    let re_bh = linalg::hs_inner(b.matrix(), &h)?.re;
    let im_phi_b = linalg::trace(&d.phi.apply(b.matrix())?).im;
    let coro_condition_residual = (re_bh - 0.5 * im_phi_b).abs();
    if coro_condition_residual > bound * b_norm {
        return Err(Error::Postcondition {
            what: "Re tr(B*H) = Im tr(Phi(B))/2",
            value: coro_condition_residual,
            bound: bound * b_norm,
        });
    }
    let hermitian_weight_trace = if is_hermitian(b.matrix(), tol) {
        let tr_bh = linalg::trace(&(b.matrix() * &h));
        if tr_bh.norm() > bound * b_norm {
            return Err(Error::Postcondition {
                what: "tr(BH) = 0",
                value: tr_bh.norm(),
                bound: bound * b_norm,
            });
        }
        Some(tr_bh)
    } else {
        None
    };

    Ok(CptpDecomposition {
        h,
        decomposition: d,
        anticommutator_residual,
        coro_condition_residual,
        hermitian_weight_trace,
    })
}

/// Membership evidence for the Lie wedge of the completely positive maps.
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeReport {
    pub hermiticity_residual: f64,
    pub hermitian_preserving: bool,
    /// Smallest eigenvalue of P·C(L)·P, P = 1 − |Γ⟩⟨Γ|/n.
    pub conditional_min_eig: f64,
    /// Fast pre-filter verdict (conditional complete positivity).
    pub conditionally_cp: bool,
    /// Smallest Choi eigenvalue of Φ from decomposing with B = 1, when it could be computed.
    pub decomposition_min_eig: Option<f64>,
    pub member: bool,
    pub tol: f64,
}

pub fn validate_cp_wedge(l: &Superoperator, tol: f64) -> WedgeReport {
    let n = l.dim();
    let choi = l.choi();
    let scale = frobenius(choi.matrix()).max(1.0);
    let hermiticity_residual = hermiticity_residual(choi.matrix());
    let hermitian_preserving = hermiticity_residual <= tol * scale;

    let gamma = vec_mat(&linalg::identity(n)).expect("square");
    let p = linalg::identity(n * n) - (&gamma * gamma.adjoint()).unscale(n as f64);
    let projected = linalg::symmetrize(&(&p * linalg::symmetrize(choi.matrix()) * &p));
    let conditional_min_eig = linalg::herm_eig(&projected, tol)
        .expect("symmetrized matrix is Hermitian")
        .min();
    let conditionally_cp = hermitian_preserving && conditional_min_eig >= -tol * scale;

    let decomposed = decompose(l, &WeightMatrix::identity(n), tol);
    let decomposition_min_eig = match &decomposed {
        Ok(d) => Some(d.diagnostics.choi_min_eig),
        Err(Error::NotInWedge { min_eig, .. }) => Some(*min_eig),
        Err(_) => None,
    };
    WedgeReport {
        hermiticity_residual,
        hermitian_preserving,
        conditional_min_eig,
        conditionally_cp,
        decomposition_min_eig,
        member: conditionally_cp && decomposed.is_ok(),
        tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::casework::{bloch_generator, BlochParams};
    use crate::linalg::{approx_eq, c, diag, identity, matrix_unit, pauli_z, DEFAULT_TOL, ONE, ZERO};
    use crate::sampling::Sampler;

    #[test]
    fn build_generator_examples() {
        let spec = GeneratorSpec::Gksl {
            hamiltonian: pauli_z().scale(0.5),
            lindblads: KrausSet::empty(2),
        };
        let l = build_generator(&spec, DEFAULT_TOL).unwrap();
        let expect = diag(&[ZERO, c(0.0, 1.0), c(0.0, -1.0), ZERO]);
        assert!(approx_eq(l.matrix(), &expect, 1e-15, 0.0));

        let p = BlochParams::new(1.0, 1.0, 2.0, 0.5).unwrap();
        let l = build_generator(&p.spec(), DEFAULT_TOL).unwrap();
        let m = l.matrix();
        assert!((m[(0, 0)] - c(-2.0, 0.0)).norm() < 1e-14);
        assert!((m[(0, 3)] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((m[(1, 1)] - c(-2.5, 1.0)).norm() < 1e-14);
        assert!((m[(2, 2)] - c(-2.5, -1.0)).norm() < 1e-14);
        assert!((m[(3, 0)] - c(2.0, 0.0)).norm() < 1e-14);
        assert!((m[(3, 3)] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!(approx_eq(m, bloch_generator(&p).matrix(), 1e-12, 0.0));

        let zero = GeneratorSpec::KWedge {
            k0: linalg::zeros(3, 3),
            kraus: KrausSet::empty(3),
        };
        assert_eq!(build_generator(&zero, DEFAULT_TOL).unwrap(), Superoperator::zero(3));
    }

    #[test]
    fn build_generator_rejects_bad_specs() {
        let spec = GeneratorSpec::Gksl {
            hamiltonian: matrix_unit(2, 0, 1),
            lindblads: KrausSet::empty(2),
        };
        assert!(matches!(
            build_generator(&spec, DEFAULT_TOL),
            Err(Error::NotHermitian { .. })
        ));
        let spec = GeneratorSpec::KWedge {
            k0: identity(3),
            kraus: KrausSet::empty(2),
        };
        assert!(matches!(build_generator(&spec, DEFAULT_TOL), Err(Error::Dimension(_))));
    }

    #[test]
    fn trivial_decompositions() {
        let d = decompose(&Superoperator::zero(2), &WeightMatrix::identity(2), DEFAULT_TOL).unwrap();
        assert_eq!(frobenius(&d.k), 0.0);
        assert_eq!(d.phi, Superoperator::zero(2));
        assert!(d.phi_kraus.is_empty());
        assert_eq!(recompose(&d), Superoperator::zero(2));

        let mut s = Sampler::new(21);
        let mut h = s.hermitian(3);
        let shift = linalg::trace(&h) / 3.0;
        h -= identity(3) * shift;
        let l = Superoperator::hamiltonian(&h).unwrap();
        let d = decompose(&l, &WeightMatrix::identity(3), DEFAULT_TOL).unwrap();
        assert!(approx_eq(&d.k, &(&h * c(0.0, -1.0)), 1e-12, 0.0));
        assert!(frobenius(d.phi.matrix()) < 1e-12);
        assert!(approx_eq(recompose(&d).matrix(), l.matrix(), 1e-12, 0.0));
    }

    #[test]
    fn bloch_with_identity_weight() {
        let p = BlochParams::new(1.0, 1.0, 2.0, 0.5).unwrap();
        let (h, lindblads) = p.operators();
        let l = build_generator(&p.spec(), DEFAULT_TOL).unwrap();
        let d = decompose(&l, &WeightMatrix::identity(2), DEFAULT_TOL).unwrap();
        let expect_phi = Superoperator::from_kraus(&lindblads);
        assert!(frobenius(&(d.phi_choi.matrix() - expect_phi.choi().matrix())) < 1e-10);
        let expect_k = &h * c(0.0, -1.0) - lindblads.dual_of_identity().scale(0.5);
        assert!(approx_eq(&d.k, &expect_k, 1e-12, 0.0));
        assert_eq!(d.phi_kraus.len(), 3);
        for v in d.phi_kraus.ops() {
            assert!(linalg::trace(v).norm() < 1e-12);
        }

        let cptp = decompose_cptp(&l, &WeightMatrix::identity(2), DEFAULT_TOL).unwrap();
        assert!(approx_eq(&cptp.h, &h, 1e-12, 0.0));
        assert!(cptp.hermitian_weight_trace.unwrap().norm() < 1e-12);
    }

    #[test]
    fn constructive_hand_example() {
        let ks = KrausSet::new(2, vec![identity(2)]).unwrap();
        let d = decompose_constructive(&linalg::zeros(2, 2), &ks, &WeightMatrix::identity(2), DEFAULT_TOL)
            .unwrap();
        assert_eq!(frobenius(&d.phi_kraus.ops()[0]), 0.0);
        assert!(approx_eq(&d.k, &identity(2).scale(0.5), 1e-15, 0.0));
        assert_eq!(frobenius(d.phi.matrix()), 0.0);
        let target = Superoperator::from_kraus(&ks);
        assert!(frobenius(&(recompose(&d).matrix() - target.matrix())) <= 1e-12);
    }

    #[test]
    fn constructive_fixed_point() {
        let b = WeightMatrix::new(diag(&[c(2.0, 0.0), c(1.0, 0.0)])).unwrap();
        // tr(B* V) = 0 for both
        let ks = KrausSet::new(2, vec![matrix_unit(2, 1, 0), diag(&[ONE, c(-2.0, 0.0)])]).unwrap();
        let k0 = linalg::from_rows(&[vec![c(0.5, 0.0), c(1.0, 2.0)], vec![c(0.0, 1.0), c(-1.0, 0.0)]]);
        assert!(linalg::hs_inner(b.matrix(), &k0).unwrap().im.abs() < 1e-15);
        let d = decompose_constructive(&k0, &ks, &b, DEFAULT_TOL).unwrap();
        assert!(approx_eq(&d.k, &k0, 1e-15, 0.0));
        assert_eq!(d.phi_kraus, ks);
    }

    #[test]
    fn routes_agree_on_random_generators() {
        let mut s = Sampler::new(22);
        for n in [2, 3, 4] {
            for _ in 0..5 {
                let k0 = s.matrix(n);
                let m = 1 + s.index(4);
                let ks = s.kraus(n, m);
                let b = WeightMatrix::new(s.weight(n, 0.1)).unwrap();
                let l = build_generator(
                    &GeneratorSpec::KWedge { k0: k0.clone(), kraus: ks.clone() },
                    DEFAULT_TOL,
                )
                .unwrap();
                let closed = decompose(&l, &b, DEFAULT_TOL).unwrap();
                let built = decompose_constructive(&k0, &ks, &b, DEFAULT_TOL).unwrap();
                assert!(frobenius(&(&closed.k - &built.k)) <= 1e-9);
                assert!(frobenius(&(closed.phi_choi.matrix() - built.phi_choi.matrix())) <= 1e-9);
                for v in built.phi_kraus.ops() {
                    assert!(linalg::hs_inner(b.matrix(), v).unwrap().norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn decompose_errors() {
        let l = Superoperator::identity(2);
        let traceless = WeightMatrix::new(pauli_z()).unwrap();
        assert!(matches!(decompose(&l, &traceless, DEFAULT_TOL), Err(Error::Weight(_))));
        let imaginary = WeightMatrix::new(identity(2) * c(0.0, 1.0)).unwrap();
        assert!(matches!(decompose(&l, &imaginary, DEFAULT_TOL), Err(Error::Weight(_))));

        let t = Superoperator::transpose_map(2);
        assert!(matches!(
            decompose(&t, &WeightMatrix::identity(2), DEFAULT_TOL),
            Err(Error::NotInWedge { .. })
        ));

        let left = Superoperator::from_sandwich(&matrix_unit(2, 0, 1), &identity(2)).unwrap();
        assert!(matches!(
            decompose(&left, &WeightMatrix::identity(2), DEFAULT_TOL),
            Err(Error::NotHermitianPreserving { .. })
        ));

        assert!(matches!(
            decompose_cptp(&l, &WeightMatrix::identity(2), DEFAULT_TOL),
            Err(Error::NotTracePreserving { .. })
        ));
        assert!(matches!(
            decompose(&l, &WeightMatrix::identity(3), DEFAULT_TOL),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn cptp_returns_hamiltonian_unchanged() {
        let b = WeightMatrix::new(diag(&[c(2.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)])).unwrap();
        let mut s = Sampler::new(23);
        let mut h = s.hermitian(3);
        // project out tr(BH)
        let ratio = linalg::trace(&(b.matrix() * &h)) / linalg::trace(&(b.matrix() * b.matrix()));
        h -= b.matrix() * ratio;
        let l = Superoperator::hamiltonian(&h).unwrap();
        let d = decompose_cptp(&l, &b, DEFAULT_TOL).unwrap();
        assert!(approx_eq(&d.h, &h, 1e-12, 0.0));
        assert!(frobenius(d.phi().matrix()) < 1e-12);
    }

    #[test]
    fn wedge_validation() {
        let mut s = Sampler::new(24);
        let cp = Superoperator::from_kraus(&s.kraus(3, 2));
        let r = validate_cp_wedge(&cp, DEFAULT_TOL);
        assert!(r.member && r.conditionally_cp);

        let t = validate_cp_wedge(&Superoperator::transpose_map(2), DEFAULT_TOL);
        assert!(!t.member && !t.conditionally_cp);
        assert!((t.conditional_min_eig + 1.0).abs() < 1e-12);
        assert!((t.decomposition_min_eig.unwrap() + 1.0).abs() < 1e-12);

        let p = BlochParams::new(1.0, 1.0, 2.0, 0.5).unwrap();
        assert!(validate_cp_wedge(&bloch_generator(&p), DEFAULT_TOL).member);
    }

    #[test]
    fn recompose_examples() {
        let mut s = Sampler::new(25);
        let h = s.hermitian(2);
        let mut d = decompose(&Superoperator::zero(2), &WeightMatrix::identity(2), DEFAULT_TOL).unwrap();
        assert_eq!(recompose(&d), Superoperator::zero(2));
        d.k = &h * c(0.0, -1.0);
        let expect = Superoperator::hamiltonian(&h).unwrap();
        assert!(approx_eq(recompose(&d).matrix(), expect.matrix(), 1e-14, 0.0));
    }
}
