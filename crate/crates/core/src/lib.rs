//! Symplectic spectral analysis of real symmetric positive definite
//! matrices.
//!
//! The crate computes symplectic eigenvalues and Williamson normal forms,
//! evaluates the diagonal-versus-spectrum weak supermajorizations
//! `Δc, Δs, Δw, Δh ≺^w d_s(A)` and the s-pinching relation
//! `d_s(𝒞ˢ(A)) ≺^w d_s(A)`, and decides when each one is a full
//! majorization. Every saturation check returns both sides of the
//! equivalence so the two can be compared.

pub mod error;
pub mod gen;
pub mod io;
pub mod jacobi;
pub mod linalg;
pub mod majorization;
pub mod pinching;
pub mod schur_horn;
pub mod williamson;

pub use error::{Error, Result};
pub use linalg::{
    is_orthosymplectic, is_symplectic, spd_inv_sqrt, spd_sqrt, symplectic_form, RealMatrix,
    SpdMatrix, SymplecticMatrix,
};
pub use majorization::{
    check_majorization, check_weak_supermajorization, doubly_stochastic_witness,
    DoublyStochasticWitness, MajorizationReport,
};
pub use pinching::{
    check_corollary_4, check_theorem_3, s_direct_sum, s_pinching, symplectic_diagonal,
    williamson_2x2, BlockPartition, PinchingCheck, TwoByTwoSpd,
};
pub use schur_horn::{
    block_split, check_theorem_1, check_theorem_2, diagnostic_vectors, scaling_matrix,
    DiagnosticVectors, Relation, SaturationVerdict,
};
pub use williamson::{
    is_orthosymplectically_diagonalizable, orthosymplectic_from_unitary, symplectic_eigenvalues,
    williamson_decompose, OrthoDiagCertificate, SymplecticSpectrum, Verdict,
    WilliamsonDecomposition,
};
