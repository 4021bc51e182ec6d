//! Diagonal-versus-spectrum relations for SPD matrices.
//!
//! With `A = [[A11, A12], [A12ᵀ, A22]]` and `Δ11, Δ12, Δ22` the diagonals of
//! the blocks, the four vectors
//!
//! ```text
//! Δc = (Δ11 + Δ22) / 2
//! Δs = √(Δ11 Δ22)
//! Δw = √((Δ11² + Δ22²) / 2)
//! Δh = √((Δ11² + Δ22² + 2 Δ12²) / 2)
//! ```
//!
//! are all weakly supermajorized by the symplectic spectrum `d_s(A)`. The
//! checks here decide when each relation is a full majorization:
//!
//! * `Δc`, `Δw`, `Δh`: iff `A` is orthosymplectically diagonalizable;
//! * `Δs`: iff `MAM` is, where `M` is the diagonal symplectic matrix of
//!   [`scaling_matrix`].

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{RealMatrix, SpdMatrix, SymplecticMatrix};
use crate::majorization::{check_majorization, MajorizationReport};
use crate::williamson::{
    is_orthosymplectically_diagonalizable, symplectic_eigenvalues, OrthoDiagCertificate,
    SymplecticSpectrum, Verdict,
};

/// Default relative tolerance of the saturation checks.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct BlockSplit {
    pub a11: RealMatrix,
    pub a12: RealMatrix,
    pub a22: RealMatrix,
}

impl BlockSplit {
    pub fn reassemble(&self) -> RealMatrix {
        let n = self.a11.nrows();
        let mut m = RealMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&self.a11);
        m.view_mut((0, n), (n, n)).copy_from(&self.a12);
        m.view_mut((n, 0), (n, n)).copy_from(&self.a12.transpose());
        m.view_mut((n, n), (n, n)).copy_from(&self.a22);
        m
    }
}

pub fn block_split(a: &SpdMatrix) -> BlockSplit {
    let n = a.n();
    let m = a.as_matrix();
    BlockSplit {
        a11: m.view((0, 0), (n, n)).into_owned(),
        a12: m.view((0, n), (n, n)).into_owned(),
        a22: m.view((n, n), (n, n)).into_owned(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticVectors {
    pub delta11: Vec<f64>,
    pub delta12: Vec<f64>,
    pub delta22: Vec<f64>,
    pub delta_c: Vec<f64>,
    pub delta_s: Vec<f64>,
    pub delta_w: Vec<f64>,
    pub delta_h: Vec<f64>,
}

impl DiagnosticVectors {
    /// The vector compared against `d_s` for a Schur-Horn relation.
    ///
    /// # Panics
    /// For [`Relation::Pinching`], which has no diagonal vector.
    pub fn get(&self, relation: Relation) -> &[f64] {
        match relation {
            Relation::C => &self.delta_c,
            Relation::S => &self.delta_s,
            Relation::W => &self.delta_w,
            Relation::H => &self.delta_h,
            Relation::Pinching => panic!("the pinching relation has no diagonal vector"),
        }
    }
}

pub fn diagnostic_vectors(a: &SpdMatrix) -> DiagnosticVectors {
    let n = a.n();
    let m = a.as_matrix();
    let delta11: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    let delta12: Vec<f64> = (0..n).map(|i| m[(i, n + i)]).collect();
    let delta22: Vec<f64> = (0..n).map(|i| m[(n + i, n + i)]).collect();
    let mut dv = DiagnosticVectors {
        delta_c: Vec::with_capacity(n),
        delta_s: Vec::with_capacity(n),
        delta_w: Vec::with_capacity(n),
        delta_h: Vec::with_capacity(n),
        delta11,
        delta12,
        delta22,
    };
    for i in 0..n {
        let (p, r, q) = (dv.delta11[i], dv.delta12[i], dv.delta22[i]);
        dv.delta_c.push(0.5 * (p + q));
        dv.delta_s.push((p * q).sqrt());
        dv.delta_w.push((0.5 * (p * p + q * q)).sqrt());
        dv.delta_h
            .push((0.5 * (p * p + q * q + 2.0 * r * r)).sqrt());
    }
    dv
}

/// `diag((Δ22/Δ11)^{1/4}) ⊕ diag((Δ11/Δ22)^{1/4})`.
///
/// The two blocks are entrywise reciprocal, so the result is symplectic,
/// and it is symmetric, so `MᵀAM = MAM`.
pub fn scaling_matrix(a: &SpdMatrix) -> SymplecticMatrix {
    let n = a.n();
    let m = a.as_matrix();
    let mut s = RealMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        let ratio = (m[(n + i, n + i)] / m[(i, i)]).sqrt().sqrt();
        s[(i, i)] = ratio;
        s[(n + i, n + i)] = 1.0 / ratio;
    }
    SymplecticMatrix::new(s).expect("reciprocal diagonal blocks are symplectic")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "c")]
    C,
    #[serde(rename = "s")]
    S,
    #[serde(rename = "w")]
    W,
    #[serde(rename = "h")]
    H,
    /// s-pinching: `d_s(𝒞ˢ(A)) ≺ d_s(A)`
    #[serde(rename = "pinching")]
    Pinching,
}

impl Relation {
    pub const SCHUR_HORN: [Relation; 4] = [Relation::C, Relation::S, Relation::W, Relation::H];

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::C => "c",
            Relation::S => "s",
            Relation::W => "w",
            Relation::H => "h",
            Relation::Pinching => "pinching",
        }
    }
}

/// One side of an "if and only if": the majorization and the
/// orthosymplectic criterion it is claimed to be equivalent to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaturationVerdict {
    pub relation_id: Relation,
    pub weak_holds: bool,
    pub majorization_holds: bool,
    pub criterion: Verdict,
    /// True when the total-sum slack or the criterion sits inside the
    /// tolerance band, where a disagreement is not evidence of anything.
    pub borderline: bool,
    pub consistent: bool,
    pub report: MajorizationReport,
    pub certificate: OrthoDiagCertificate,
}

impl SaturationVerdict {
    pub(crate) fn assemble(
        relation_id: Relation,
        report: MajorizationReport,
        certificate: OrthoDiagCertificate,
    ) -> Self {
        let criterion = certificate.verdict;
        let slack = report.total_slack().abs();
        let slack_near_edge = slack > 0.1 * report.tol && slack < 10.0 * report.tol;
        let borderline = criterion == Verdict::Borderline || slack_near_edge;
        let agrees = criterion.as_bool() == Some(report.majorized);
        SaturationVerdict {
            relation_id,
            weak_holds: report.weakly_supermajorized,
            majorization_holds: report.majorized,
            criterion,
            borderline,
            consistent: agrees || borderline,
            report,
            certificate,
        }
    }
}

/// Majorization tolerance for checks against `d_s`: `tol · Σ d_s`.
pub fn spectrum_tolerance(d: &SymplecticSpectrum, tol: f64) -> f64 {
    tol * d.sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingIdentities {
    /// `max_i |Δs(A)_i − Δc(MAM)_i| / max_i Δs(A)_i`
    pub delta_residual: f64,
    /// `max_i |d_i(A) − d_i(MAM)| / max_i d_i(A)`
    pub spectrum_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Check {
    pub verdict: SaturationVerdict,
    pub identities: ScalingIdentities,
}

fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let diff = a
        .iter()
        .zip(b)
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    diff / scale
}

/// `Δs(A) ≺ d_s(A)` versus orthosymplectic diagonalizability of `MAM`.
pub fn check_theorem_1(a: &SpdMatrix, tol: f64) -> Result<Theorem1Check> {
    let d = symplectic_eigenvalues(a)?;
    let dv = diagnostic_vectors(a);
    let report = check_majorization(&dv.delta_s, d.values(), spectrum_tolerance(&d, tol))?;

    let m = scaling_matrix(a);
    let mam = a.congruence(m.as_matrix())?;
    let certificate = is_orthosymplectically_diagonalizable(&mam, tol)?;

    let d_mam = symplectic_eigenvalues(&mam)?;
    let dv_mam = diagnostic_vectors(&mam);
    let identities = ScalingIdentities {
        delta_residual: max_rel_diff(&dv.delta_s, &dv_mam.delta_c),
        spectrum_residual: max_rel_diff(d.values(), d_mam.values()),
    };
    Ok(Theorem1Check {
        verdict: SaturationVerdict::assemble(Relation::S, report, certificate),
        identities,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Check {
    pub w: SaturationVerdict,
    pub h: SaturationVerdict,
    /// The arithmetic-mean relation shares the same criterion.
    pub c: SaturationVerdict,
}

impl Theorem2Check {
    pub fn verdicts(&self) -> [&SaturationVerdict; 3] {
        [&self.c, &self.w, &self.h]
    }

    /// All three majorizations and the criterion agree (outside the band).
    pub fn all_consistent(&self) -> bool {
        self.verdicts().iter().all(|v| v.consistent)
    }
}

/// `Δw ≺ d_s`, `Δh ≺ d_s` and `Δc ≺ d_s` versus orthosymplectic
/// diagonalizability of `A`.
pub fn check_theorem_2(a: &SpdMatrix, tol: f64) -> Result<Theorem2Check> {
    let d = symplectic_eigenvalues(a)?;
    let dv = diagnostic_vectors(a);
    let certificate = is_orthosymplectically_diagonalizable(a, tol)?;
    let mtol = spectrum_tolerance(&d, tol);
    let verdict = |rel: Relation| -> Result<SaturationVerdict> {
        let report = check_majorization(dv.get(rel), d.values(), mtol)?;
        Ok(SaturationVerdict::assemble(rel, report, certificate))
    };
    Ok(Theorem2Check {
        w: verdict(Relation::W)?,
        h: verdict(Relation::H)?,
        c: verdict(Relation::C)?,
    })
}

/// Weak supermajorization report of `Δ_rel(A)` against `d_s(A)`.
pub fn weak_relation(a: &SpdMatrix, rel: Relation, tol: f64) -> Result<MajorizationReport> {
    let d = symplectic_eigenvalues(a)?;
    let dv = diagnostic_vectors(a);
    check_majorization(dv.get(rel), d.values(), spectrum_tolerance(&d, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn split_identity_and_reassemble() {
        let a = SpdMatrix::identity(2);
        let s = block_split(&a);
        assert_eq!(s.a11, RealMatrix::identity(2, 2));
        assert_eq!(s.a22, RealMatrix::identity(2, 2));
        assert_eq!(s.a12, RealMatrix::zeros(2, 2));
        assert_eq!(&s.reassemble(), a.as_matrix());

        let b = SpdMatrix::new(dmatrix![
            4.0, 1.0, 0.5, 0.2;
            1.0, 3.0, 0.1, 0.3;
            0.5, 0.1, 2.0, 0.4;
            0.2, 0.3, 0.4, 5.0
        ])
        .unwrap();
        let s = block_split(&b);
        assert_eq!(s.a12, dmatrix![0.5, 0.2; 0.1, 0.3]);
        assert_eq!(&s.reassemble(), b.as_matrix());
    }

    #[test]
    fn vectors_of_identity_are_ones() {
        let dv = diagnostic_vectors(&SpdMatrix::identity(3));
        for rel in Relation::SCHUR_HORN {
            assert_eq!(dv.get(rel), &[1.0, 1.0, 1.0]);
        }
    }

    #[test]
    fn vectors_of_diag_one_four() {
        let dv = diagnostic_vectors(&SpdMatrix::from_diagonal(&[1.0, 4.0]).unwrap());
        assert_eq!(dv.delta11, vec![1.0]);
        assert_eq!(dv.delta22, vec![4.0]);
        assert_eq!(dv.delta12, vec![0.0]);
        assert_eq!(dv.delta_c, vec![2.5]);
        assert_eq!(dv.delta_s, vec![2.0]);
        assert!((dv.delta_w[0] - 8.5f64.sqrt()).abs() < 1e-15);
        assert!((dv.delta_h[0] - 8.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn scaling_matrix_examples() {
        let a = SpdMatrix::from_diagonal(&[4.0, 1.0]).unwrap();
        let m = scaling_matrix(&a);
        let expected = dmatrix![0.5f64.sqrt(), 0.0; 0.0, 2f64.sqrt()];
        assert!((m.as_matrix() - expected).norm() < 1e-15);

        let b = SpdMatrix::from_diagonal(&[2.0, 3.0, 2.0, 3.0]).unwrap();
        assert_eq!(scaling_matrix(&b).as_matrix(), &RealMatrix::identity(4, 4));
    }

    #[test]
    fn theorem_1_on_diag_one_four() {
        let a = SpdMatrix::from_diagonal(&[1.0, 4.0]).unwrap();
        let t = check_theorem_1(&a, DEFAULT_TOL).unwrap();
        assert!(t.verdict.majorization_holds);
        assert_eq!(t.verdict.criterion, Verdict::True);
        assert!(t.verdict.consistent && !t.verdict.borderline);
        assert!(t.identities.delta_residual < 1e-15);
        assert!(t.identities.spectrum_residual < 1e-14);
    }

    #[test]
    fn theorem_2_on_diag_one_four() {
        let a = SpdMatrix::from_diagonal(&[1.0, 4.0]).unwrap();
        let t = check_theorem_2(&a, DEFAULT_TOL).unwrap();
        for v in t.verdicts() {
            assert!(v.weak_holds);
            assert!(!v.majorization_holds);
            assert_eq!(v.criterion, Verdict::False);
            assert!(v.consistent);
        }
        assert!((t.w.report.total_slack() - (8.5f64.sqrt() - 2.0)).abs() < 1e-14);
    }

    #[test]
    fn identity_saturates_everything() {
        let a = SpdMatrix::identity(3);
        let t1 = check_theorem_1(&a, DEFAULT_TOL).unwrap();
        assert!(t1.verdict.majorization_holds && t1.verdict.consistent);
        let t2 = check_theorem_2(&a, DEFAULT_TOL).unwrap();
        for v in t2.verdicts() {
            assert!(v.majorization_holds);
            assert_eq!(v.criterion, Verdict::True);
        }
    }

    #[test]
    fn relation_serializes_as_letter() {
        assert_eq!(serde_json::to_string(&Relation::W).unwrap(), "\"w\"");
    }
}
