//! The full analysis bundle emitted by `sympmaj report`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use sympmaj::linalg::DEFAULT_SYMP_TOL;
use sympmaj::schur_horn::spectrum_tolerance;
use sympmaj::{
    check_theorem_1, check_theorem_2, check_theorem_3, diagnostic_vectors, williamson_decompose,
    BlockPartition, DiagnosticVectors, OrthoDiagCertificate, SaturationVerdict, SpdMatrix,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    /// SHA-256 of the raw input bytes, hex encoded.
    pub input_digest: String,
    pub n: usize,
    pub d_s: Vec<f64>,
    pub deltas: DiagnosticVectors,
    /// Relations `s`, `c`, `w`, `h`, then the pinching relation.
    pub verdicts: Vec<SaturationVerdict>,
    pub partition: Vec<usize>,
    /// Pinched spectrum, ascending.
    pub ds_pinched: Vec<f64>,
    pub certificate: OrthoDiagCertificate,
    pub residuals: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
}

impl AnalysisReport {
    pub fn verdict(&self, relation: sympmaj::Relation) -> Option<&SaturationVerdict> {
        self.verdicts.iter().find(|v| v.relation_id == relation)
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn analyze(
    input: &[u8],
    a: &SpdMatrix,
    partition: &BlockPartition,
    tol: f64,
) -> sympmaj::Result<AnalysisReport> {
    let w = williamson_decompose(a)?;
    let t1 = check_theorem_1(a, tol)?;
    let t2 = check_theorem_2(a, tol)?;
    let t3 = check_theorem_3(a, partition, tol)?;
    let certificate = t2.c.certificate;

    let mut ds_pinched = t3.ds_pinched.clone();
    ds_pinched.sort_by(f64::total_cmp);

    let residuals = BTreeMap::from([
        ("williamson_diagonalization".to_string(), w.diag_residual),
        ("williamson_symplectic".to_string(), w.m.residual()),
        (
            "scaling_delta_identity".to_string(),
            t1.identities.delta_residual,
        ),
        (
            "scaling_spectrum_identity".to_string(),
            t1.identities.spectrum_residual,
        ),
        (
            "relative_trace_gap".to_string(),
            certificate.relative_trace_gap(),
        ),
        (
            "relative_commutator".to_string(),
            certificate.relative_commutator(),
        ),
        (
            "pinching_trace_ledger".to_string(),
            t3.trace_ledger.residual,
        ),
        (
            "pinching_diagonalization".to_string(),
            t3.pinched_diag_residual,
        ),
        ("pinching_symplectic".to_string(), t3.symplectic_residual),
    ]);
    let tolerances = BTreeMap::from([
        ("tol".to_string(), tol),
        ("majorization".to_string(), spectrum_tolerance(&w.d, tol)),
        ("symplectic".to_string(), DEFAULT_SYMP_TOL),
    ]);

    Ok(AnalysisReport {
        input_digest: digest(input),
        n: a.n(),
        d_s: w.d.into_vec(),
        deltas: diagnostic_vectors(a),
        verdicts: vec![t1.verdict, t2.c, t2.w, t2.h, t3.verdict],
        partition: t3.partition,
        ds_pinched,
        certificate,
        residuals,
        tolerances,
    })
}
