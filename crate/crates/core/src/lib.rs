//! Unique B-weighted decompositions `L = K(·) + (·)K* + Φ` of generators of
//! completely positive dynamical semigroups.
//!
//! Given a generator `L` and a weight matrix `B` with `Re tr B ≠ 0`, there is
//! exactly one pair `(K, Φ)` with `Φ` completely positive,
//! `tr(Φ(B*(·)B)) = 0` and `tr(B*K)` real. This crate computes that pair two
//! independent ways (a closed-form Choi-kernel solve and a Kraus-shift
//! construction), specializes it to trace-preserving generators
//! (`L = −i[H,·] + Φ − {Φ*(1)/2, ·}`), and provides the weighted traces,
//! Choi/Kraus conversions and inner products it is built on.
//!
//! Conventions: vectorization stacks columns, `vec(B)[j·n + k] = B[k][j]`, so
//! the superoperator of `X ↦ AXB` is `Bᵀ ⊗ A`.

pub mod casework;
pub mod decompose;
pub mod error;
pub mod linalg;
pub mod sampling;
pub mod superop;
pub mod weighted;

pub use decompose::{
    build_generator, decompose, decompose_constructive, decompose_cptp, recompose,
    validate_cp_wedge, CptpDecomposition, Decomposition, Diagnostics, GeneratorSpec, WedgeReport,
};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, C64, DEFAULT_TOL};
pub use superop::{ChoiMatrix, CpCheck, KrausSet, Superoperator};
pub use weighted::WeightMatrix;
