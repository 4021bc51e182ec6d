//! Symplectic eigenvalues and Williamson normal form.
//!
//! For SPD `A` of order `2n` there is a symplectic `M` with
//! `MᵀAM = D ⊕ D`, `D = diag(d_1, …, d_n)`. The `d_i` are computed from the
//! singular values of the skew-symmetric matrix `A^{1/2} J A^{1/2}`, which
//! come in equal pairs. The diagonalizing matrix is built from the
//! canonical 2x2-block form of `W = A^{-1/2} J A^{-1/2}` obtained from its
//! real Schur decomposition.

use std::fmt;

use nalgebra::Schur;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi;
use crate::linalg::{
    doubled_diagonal, half_dim, spd_inv_sqrt, spd_sqrt, symplectic_form, RealMatrix, SpdMatrix,
    SymplecticMatrix,
};

/// Default relative tolerance of the orthosymplectic diagonalizability test.
pub const DEFAULT_ORTHO_TOL: f64 = 1e-8;

/// Symplectic eigenvalues `d_1 ≤ … ≤ d_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymplecticSpectrum(Vec<f64>);

impl SymplecticSpectrum {
    /// Sorts `values` ascending; every entry must be positive and finite.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidConfig(format!(
                "symplectic eigenvalues must be positive, found {bad}"
            )));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self(values))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// The 2n singular values of `A^{1/2} J A^{1/2}`, ascending.
pub fn skew_singular_values(a: &SpdMatrix) -> Result<Vec<f64>> {
    let s = spd_sqrt(a)?;
    let j = symplectic_form(a.n());
    let k = s.as_matrix() * j * s.as_matrix();
    Ok(jacobi::singular_values(&k))
}

pub fn symplectic_eigenvalues(a: &SpdMatrix) -> Result<SymplecticSpectrum> {
    let sv = skew_singular_values(a)?;
    // Singular values arrive as (d_1, d_1, d_2, d_2, ...); average each pair.
    let d = sv.chunks_exact(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    SymplecticSpectrum::new(d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WilliamsonDecomposition {
    pub m: SymplecticMatrix,
    pub d: SymplecticSpectrum,
    /// `‖MᵀAM − D ⊕ D‖_F`
    pub diag_residual: f64,
}

/// Orthogonal `Q` with `QᵀWQ = [[0, C], [-C, 0]]`, `C = diag(c)`, `c`
/// positive and sorted descending. `w` must be skew-symmetric and
/// nonsingular.
pub fn canonical_skew_form(w: &RealMatrix) -> Result<(RealMatrix, Vec<f64>)> {
    let n = half_dim(w)?;
    let dim = 2 * n;
    let scale = w.norm();
    // The deflation test compares subdiagonal entries against the diagonal,
    // which is zero for a skew matrix; factor W + σI instead (same Schur
    // vectors, blocks [[σ, c], [-c, σ]]).
    let shift = scale.max(f64::MIN_POSITIVE);
    let shifted = w + RealMatrix::identity(dim, dim) * shift;
    let schur = Schur::try_new(shifted, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::CanonicalForm("real Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let t = t - RealMatrix::identity(dim, dim) * shift;

    // (first column, second column, c) for each 2x2 block
    let mut blocks: Vec<(usize, usize, f64)> = Vec::with_capacity(n);
    let mut i = 0;
    while i < dim {
        if i + 1 >= dim {
            return Err(Error::CanonicalForm(format!(
                "unpaired 1x1 block at index {i} (value {:.3e})",
                t[(i, i)]
            )));
        }
        let upper = t[(i, i + 1)];
        let lower = t[(i + 1, i)];
        let c = 0.5 * (upper - lower);
        if c.abs() <= 1e-13 * scale || (upper + lower).abs() > 1e-6 * c.abs() {
            return Err(Error::CanonicalForm(format!(
                "block at index {i} is not of the form [[0, c], [-c, 0]] \
                 (upper {upper:.3e}, lower {lower:.3e})"
            )));
        }
        if c > 0.0 {
            blocks.push((i, i + 1, c));
        } else {
            blocks.push((i + 1, i, -c));
        }
        i += 2;
    }
    blocks.sort_by(|a, b| b.2.total_cmp(&a.2));

    let mut canon = RealMatrix::zeros(dim, dim);
    let mut c = Vec::with_capacity(n);
    for (k, &(x, y, ck)) in blocks.iter().enumerate() {
        canon.set_column(k, &q.column(x));
        canon.set_column(n + k, &q.column(y));
        c.push(ck);
    }
    Ok((canon, c))
}

pub fn williamson_decompose(a: &SpdMatrix) -> Result<WilliamsonDecomposition> {
    let n = a.n();
    let inv_sqrt = spd_inv_sqrt(a)?;
    let j = symplectic_form(n);
    let w = inv_sqrt.as_matrix() * &j * inv_sqrt.as_matrix();
    let w = (&w - w.transpose()) * 0.5;
    let (q, c) = canonical_skew_form(&w)?;

    let d: Vec<f64> = c.iter().map(|ck| 1.0 / ck).collect();
    let mut m = inv_sqrt.as_matrix() * q;
    for (k, dk) in d.iter().enumerate() {
        let s = dk.sqrt();
        m.column_mut(k).scale_mut(s);
        m.column_mut(n + k).scale_mut(s);
    }
    let diag_residual = (m.transpose() * a.as_matrix() * &m - doubled_diagonal(&d)).norm();
    let m = SymplecticMatrix::new(m)?;
    Ok(WilliamsonDecomposition {
        m,
        d: SymplecticSpectrum::new(d)?,
        diag_residual,
    })
}

/// Outcome of a test that may land inside its own tolerance band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Borderline,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Verdict::True => Some(true),
            Verdict::False => Some(false),
            Verdict::Borderline => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Borderline => "borderline",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "true" => Ok(Verdict::True),
            "false" => Ok(Verdict::False),
            "borderline" => Ok(Verdict::Borderline),
            other => Err(serde::de::Error::unknown_variant(
                other,
                &["true", "false", "borderline"],
            )),
        }
    }
}

/// Evidence for (or against) `A = N (D ⊕ D) Nᵀ` with `N` orthosymplectic.
///
/// Two characterizations are evaluated: the trace equality
/// `Tr(A) = 2 Σ d_i(A)` and commutation with the symplectic form,
/// `AJ = JA`. They agree in exact arithmetic; when they disagree at the
/// given tolerance the verdict is [`Verdict::Borderline`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthoDiagCertificate {
    /// `Tr(A) − 2 Σ d_i(A)`, never meaningfully negative.
    pub trace_gap: f64,
    pub trace: f64,
    /// `‖AJ − JA‖_F`
    pub commutator_norm: f64,
    pub frobenius_norm: f64,
    pub tol: f64,
    pub trace_test: bool,
    pub commutation_test: bool,
    pub verdict: Verdict,
}

impl OrthoDiagCertificate {
    pub fn relative_trace_gap(&self) -> f64 {
        self.trace_gap / self.trace
    }

    pub fn relative_commutator(&self) -> f64 {
        self.commutator_norm / self.frobenius_norm
    }
}

pub fn is_orthosymplectically_diagonalizable(
    a: &SpdMatrix,
    tol: f64,
) -> Result<OrthoDiagCertificate> {
    let d = symplectic_eigenvalues(a)?;
    let trace = a.trace();
    let trace_gap = trace - 2.0 * d.sum();
    let j = symplectic_form(a.n());
    let am = a.as_matrix();
    let commutator_norm = (am * &j - &j * am).norm();
    let frobenius_norm = am.norm();
    let trace_test = trace_gap.abs() <= tol * trace;
    let commutation_test = commutator_norm <= tol * frobenius_norm;
    let verdict = if trace_test == commutation_test {
        Verdict::from_bool(trace_test)
    } else {
        Verdict::Borderline
    };
    Ok(OrthoDiagCertificate {
        trace_gap,
        trace,
        commutator_norm,
        frobenius_norm,
        tol,
        trace_test,
        commutation_test,
        verdict,
    })
}

/// `‖U*U − I‖_F` for `U = P + iQ`.
pub fn unitarity_residual(p: &RealMatrix, q: &RealMatrix) -> f64 {
    let n = p.nrows();
    let re = p.transpose() * p + q.transpose() * q - RealMatrix::identity(n, n);
    let im = p.transpose() * q - q.transpose() * p;
    (re.norm_squared() + im.norm_squared()).sqrt()
}

/// The orthosymplectic matrix `[[P, Q], [-Q, P]]` for unitary `P + iQ`.
pub fn orthosymplectic_from_unitary(p: &RealMatrix, q: &RealMatrix) -> Result<SymplecticMatrix> {
    if p.nrows() != p.ncols() {
        return Err(Error::NotSquare {
            rows: p.nrows(),
            cols: p.ncols(),
        });
    }
    if q.shape() != p.shape() {
        return Err(Error::DimensionMismatch {
            expected: p.nrows(),
            found: q.nrows(),
        });
    }
    let residual = unitarity_residual(p, q);
    if residual.is_nan() || residual > 1e-10 {
        return Err(Error::NotUnitary { residual });
    }
    let n = p.nrows();
    let mut m = RealMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(p);
    m.view_mut((0, n), (n, n)).copy_from(q);
    m.view_mut((n, 0), (n, n)).copy_from(&(-q));
    m.view_mut((n, n), (n, n)).copy_from(p);
    SymplecticMatrix::new(m)
}
