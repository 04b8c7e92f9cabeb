//! Seeded random matrices for self-tests and sampled certificates.

use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use crate::linalg::{self, ComplexMatrix, C64};
use crate::superop::KrausSet;

/// Deterministic source of random test matrices (complex Ginibre entries).
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: StdRng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: StdRng::seed_from_u64(seed),
        }
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn index(&mut self, upper: usize) -> usize {
        self.rng.random_range(0..upper)
    }

    pub fn complex(&mut self) -> C64 {
        C64::new(self.normal(), self.normal()) / std::f64::consts::SQRT_2
    }

    pub fn rect(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        DMatrix::from_fn(rows, cols, |_, _| self.complex())
    }

    pub fn matrix(&mut self, n: usize) -> ComplexMatrix {
        self.rect(n, n)
    }

    pub fn hermitian(&mut self, n: usize) -> ComplexMatrix {
        let a = self.matrix(n);
        (&a + a.adjoint()).unscale(2.0)
    }

    /// Positive semidefinite matrix A·A* with `rank` ≤ n.
    pub fn psd(&mut self, n: usize, rank: usize) -> ComplexMatrix {
        let a = self.rect(n, rank);
        &a * a.adjoint()
    }

    /// Hermitian positive definite matrix with smallest eigenvalue ≥ `floor`.
    pub fn positive_definite(&mut self, n: usize, floor: f64) -> ComplexMatrix {
        self.psd(n, n) + linalg::identity(n).scale(floor)
    }

    /// Full-rank density matrix.
    pub fn state(&mut self, n: usize) -> ComplexMatrix {
        let p = self.psd(n, n);
        let tr = linalg::trace(&p).re;
        p.unscale(tr)
    }

    pub fn kraus(&mut self, n: usize, m: usize) -> KrausSet {
        let ops = (0..m).map(|_| self.matrix(n)).collect();
        KrausSet::new(n, ops).expect("operators are n×n")
    }

    /// `rows × cols` matrix with orthonormal columns (rows ≥ cols).
    pub fn isometry(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        assert!(rows >= cols, "isometry needs rows ≥ cols");
        let q = self.rect(rows, cols).qr().q();
        q.columns(0, cols).into_owned()
    }

    /// Weight matrix with |Re tr B| ≥ `min_re_trace`.
    pub fn weight(&mut self, n: usize, min_re_trace: f64) -> ComplexMatrix {
        loop {
            let b = self.matrix(n);
            if linalg::trace(&b).re.abs() >= min_re_trace {
                return b;
            }
        }
    }

    /// Hermitian weight matrix with |tr B| ≥ `min_re_trace`.
    pub fn hermitian_weight(&mut self, n: usize, min_re_trace: f64) -> ComplexMatrix {
        loop {
            let b = self.hermitian(n);
            if linalg::trace(&b).re.abs() >= min_re_trace {
                return b;
            }
        }
    }
}

/// Re-mixes a Kraus list through an isometry `w` (`m' × m`, w*w = 1):
/// W_i = Σ_j w_ij V_j. The resulting set represents the same map.
pub fn mix_kraus(ks: &KrausSet, w: &ComplexMatrix) -> KrausSet {
    assert_eq!(w.ncols(), ks.len(), "isometry must have one column per operator");
    let n = ks.dim();
    let ops = (0..w.nrows())
        .map(|i| {
            ks.ops()
                .iter()
                .enumerate()
                .fold(linalg::zeros(n, n), |acc, (j, v)| acc + v.map(|z| z * w[(i, j)]))
        })
        .collect();
    KrausSet::new(n, ops).expect("mixing preserves dimension")
}
