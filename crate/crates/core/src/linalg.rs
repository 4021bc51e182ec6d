//! Dense-matrix foundation: validated SPD and symplectic matrices, the
//! standard symplectic form and principal square roots.
//!
//! Everything here works on `nalgebra::DMatrix<f64>`. The symplectic form
//! uses the block convention `J = [[0, I], [-I, 0]]`; the interleaved
//! `(q1, p1, q2, p2, ...)` ordering is not supported.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::jacobi;

use crate::error::{Error, Result};

pub type RealMatrix = DMatrix<f64>;

/// Relative symmetry tolerance used by [`SpdMatrix::new`].
pub const DEFAULT_SYM_TOL: f64 = 1e-10;
/// Absolute tolerance on `‖MᵀJM − J‖_F` used by [`is_symplectic`] callers.
pub const DEFAULT_SYMP_TOL: f64 = 1e-8;

pub(crate) fn check_finite(m: &RealMatrix) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if !m[(i, j)].is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Returns `n` for a `2n x 2n` matrix.
pub(crate) fn half_dim(m: &RealMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::Empty);
    }
    if !m.nrows().is_multiple_of(2) {
        return Err(Error::OddDimension(m.nrows()));
    }
    Ok(m.nrows() / 2)
}

/// The `2n x 2n` matrix `[[0, I_n], [-I_n, 0]]`.
pub fn symplectic_form(n: usize) -> RealMatrix {
    let mut j = RealMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

/// `D ⊕ D` for a vector `d` of length `n`.
pub fn doubled_diagonal(d: &[f64]) -> RealMatrix {
    let n = d.len();
    let mut m = RealMatrix::zeros(2 * n, 2 * n);
    for (i, &v) in d.iter().enumerate() {
        m[(i, i)] = v;
        m[(n + i, n + i)] = v;
    }
    m
}

pub(crate) fn max_abs(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// A validated real symmetric positive definite matrix of even order `2n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix {
    mat: RealMatrix,
}

impl SpdMatrix {
    pub fn new(mat: RealMatrix) -> Result<Self> {
        Self::with_tolerance(mat, DEFAULT_SYM_TOL)
    }

    /// Validates `mat`. Asymmetry within `sym_tol` (relative to the largest
    /// entry) is removed by replacing `mat` with `(mat + matᵀ) / 2`.
    pub fn with_tolerance(mat: RealMatrix, sym_tol: f64) -> Result<Self> {
        half_dim(&mat)?;
        check_finite(&mat)?;
        let scale = max_abs(&mat);
        let asym = max_abs(&(&mat - mat.transpose()));
        let rel = if scale > 0.0 { asym / scale } else { 0.0 };
        if rel > sym_tol {
            return Err(Error::NotSymmetric {
                asymmetry: rel,
                tol: sym_tol,
            });
        }
        let mat = if asym > 0.0 {
            (&mat + mat.transpose()) * 0.5
        } else {
            mat
        };
        let min_eigenvalue = jacobi::symmetric_eigen(&mat).0[0];
        if min_eigenvalue.is_nan() || min_eigenvalue <= 0.0 || Cholesky::new(mat.clone()).is_none()
        {
            return Err(Error::NotPositiveDefinite { min_eigenvalue });
        }
        Ok(Self { mat })
    }

    /// Skips validation; callers guarantee symmetry and positive definiteness
    /// by construction.
    pub(crate) fn from_trusted(mat: RealMatrix) -> Self {
        let mat = (&mat + mat.transpose()) * 0.5;
        Self { mat }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: RealMatrix::identity(2 * n, 2 * n),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(RealMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    /// Order of the matrix, `2n`.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Number of symplectic eigenvalues, `n`.
    pub fn n(&self) -> usize {
        self.mat.nrows() / 2
    }

    pub fn as_matrix(&self) -> &RealMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace()
    }

    /// `Mᵀ A M`, which is SPD whenever `M` is invertible.
    pub fn congruence(&self, m: &RealMatrix) -> Result<SpdMatrix> {
        if m.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.nrows(),
            });
        }
        SpdMatrix::new(m.transpose() * &self.mat * m)
    }
}

fn spd_power(a: &SpdMatrix, power: f64) -> Result<SpdMatrix> {
    let (values, v) = jacobi::symmetric_eigen(&a.mat);
    let min_eigenvalue = values[0];
    if min_eigenvalue.is_nan() || min_eigenvalue <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eigenvalue });
    }
    let scaled: Vec<f64> = values.iter().map(|l| l.powf(power)).collect();
    let mut vs = v.clone();
    for (j, s) in scaled.iter().enumerate() {
        vs.column_mut(j).scale_mut(*s);
    }
    Ok(SpdMatrix::from_trusted(vs * v.transpose()))
}

/// Principal square root `V diag(√λ) Vᵀ`.
pub fn spd_sqrt(a: &SpdMatrix) -> Result<SpdMatrix> {
    spd_power(a, 0.5)
}

/// Inverse principal square root `V diag(1/√λ) Vᵀ`.
pub fn spd_inv_sqrt(a: &SpdMatrix) -> Result<SpdMatrix> {
    spd_power(a, -0.5)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticCheck {
    pub holds: bool,
    /// `‖MᵀJM − J‖_F`
    pub residual: f64,
}

pub fn symplectic_residual(m: &RealMatrix) -> Result<f64> {
    let n = half_dim(m)?;
    let j = symplectic_form(n);
    Ok((m.transpose() * &j * m - j).norm())
}

pub fn is_symplectic(m: &RealMatrix, tol: f64) -> Result<SymplecticCheck> {
    let residual = symplectic_residual(m)?;
    Ok(SymplecticCheck {
        holds: residual <= tol,
        residual,
    })
}

pub fn orthogonality_residual(m: &RealMatrix) -> f64 {
    (m.transpose() * m - RealMatrix::identity(m.nrows(), m.ncols())).norm()
}

pub fn is_orthosymplectic(m: &RealMatrix, tol: f64) -> Result<bool> {
    let symp = is_symplectic(m, tol)?;
    Ok(symp.holds && orthogonality_residual(m) <= tol)
}

/// A member of `Sp(2n)` together with its membership residual.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    mat: RealMatrix,
    residual: f64,
}

impl SymplecticMatrix {
    /// Accepts `mat` when `‖MᵀJM − J‖_F ≤ DEFAULT_SYMP_TOL · (1 + ‖M‖_F²)`.
    pub fn new(mat: RealMatrix) -> Result<Self> {
        check_finite(&mat)?;
        let residual = symplectic_residual(&mat)?;
        let tol = DEFAULT_SYMP_TOL * (1.0 + mat.norm_squared());
        if residual > tol {
            return Err(Error::NotSymplectic { residual, tol });
        }
        Ok(Self { mat, residual })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: RealMatrix::identity(2 * n, 2 * n),
            residual: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.mat.nrows() / 2
    }

    pub fn as_matrix(&self) -> &RealMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> RealMatrix {
        self.mat
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn transpose(&self) -> Result<Self> {
        Self::new(self.mat.transpose())
    }

    pub fn compose(&self, other: &SymplecticMatrix) -> Result<Self> {
        if self.mat.nrows() != other.mat.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.mat.nrows(),
                found: other.mat.nrows(),
            });
        }
        Self::new(&self.mat * &other.mat)
    }

    /// `M⁻¹ = -J Mᵀ J`.
    pub fn inverse(&self) -> Self {
        let j = symplectic_form(self.n());
        let mat = -(&j * self.mat.transpose() * &j);
        Self {
            residual: symplectic_residual(&mat).unwrap_or(f64::NAN),
            mat,
        }
    }
}
