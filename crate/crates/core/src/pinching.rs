//! s-direct sums and s-pinchings.
//!
//! A `2n x 2n` matrix is viewed as four `n x n` quadrants `[[E, F], [G, H]]`.
//! The s-direct sum of `A_i = [[E_i, F_i], [G_i, H_i]]` takes the ordinary
//! direct sum quadrant by quadrant; the s-pinching keeps only the diagonal
//! blocks of each quadrant. Both go through the same index table so that
//! `𝒞ˢ(A) = ⊕ˢ A_i` holds bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{doubled_diagonal, half_dim, RealMatrix, SpdMatrix, SymplecticMatrix};
use crate::majorization::check_majorization;
use crate::schur_horn::{spectrum_tolerance, Relation, SaturationVerdict};
use crate::williamson::{
    is_orthosymplectically_diagonalizable, symplectic_eigenvalues, williamson_decompose,
    SymplecticSpectrum,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPartition {
    parts: Vec<usize>,
}

impl BlockPartition {
    pub fn new(parts: Vec<usize>, n: usize) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) || parts.iter().sum::<usize>() != n {
            return Err(Error::InvalidPartition { parts, n });
        }
        Ok(Self { parts })
    }

    /// `(1, …, 1)`
    pub fn unit(n: usize) -> Self {
        Self { parts: vec![1; n] }
    }

    /// `(n)`
    pub fn whole(n: usize) -> Self {
        Self { parts: vec![n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    fn layout(&self) -> SLayout {
        SLayout::new(&self.parts)
    }
}

/// Maps block-local `(q, p)` coordinates to global ones.
struct SLayout {
    n: usize,
    offsets: Vec<usize>,
    sizes: Vec<usize>,
}

impl SLayout {
    fn new(sizes: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &m in sizes {
            offsets.push(acc);
            acc += m;
        }
        Self {
            n: acc,
            offsets,
            sizes: sizes.to_vec(),
        }
    }

    /// Global index of row/column `local` (in `0..2m_i`) of block `i`.
    fn global(&self, block: usize, local: usize) -> usize {
        let m = self.sizes[block];
        if local < m {
            self.offsets[block] + local
        } else {
            self.n + self.offsets[block] + (local - m)
        }
    }
}

/// `⊕ˢ A_i` for square blocks of even order.
pub fn s_direct_sum(blocks: &[RealMatrix]) -> Result<RealMatrix> {
    if blocks.is_empty() {
        return Err(Error::Empty);
    }
    let sizes = blocks.iter().map(half_dim).collect::<Result<Vec<_>>>()?;
    let layout = SLayout::new(&sizes);
    let mut out = RealMatrix::zeros(2 * layout.n, 2 * layout.n);
    for (b, block) in blocks.iter().enumerate() {
        for c in 0..block.ncols() {
            let gc = layout.global(b, c);
            for r in 0..block.nrows() {
                out[(layout.global(b, r), gc)] = block[(r, c)];
            }
        }
    }
    Ok(out)
}

/// The blocks `A_i = [[E_ii, F_ii], [G_ii, H_ii]]` of `A`.
pub fn s_blocks(a: &RealMatrix, partition: &BlockPartition) -> Result<Vec<RealMatrix>> {
    let n = half_dim(a)?;
    if partition.n() != n {
        return Err(Error::InvalidPartition {
            parts: partition.parts.clone(),
            n,
        });
    }
    let layout = partition.layout();
    Ok(partition
        .parts
        .iter()
        .enumerate()
        .map(|(b, &m)| {
            RealMatrix::from_fn(2 * m, 2 * m, |r, c| {
                a[(layout.global(b, r), layout.global(b, c))]
            })
        })
        .collect())
}

/// `𝒞ˢ(A)`
pub fn s_pinching(a: &SpdMatrix, partition: &BlockPartition) -> Result<SpdMatrix> {
    let blocks = s_blocks(a.as_matrix(), partition)?;
    Ok(SpdMatrix::from_trusted(s_direct_sum(&blocks)?))
}

/// `𝔇ˢ(A) = [[diag(Δ11), diag(Δ12)], [diag(Δ12), diag(Δ22)]]`
pub fn symplectic_diagonal(a: &SpdMatrix) -> SpdMatrix {
    let n = a.n();
    let m = a.as_matrix();
    let mut out = RealMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        out[(i, i)] = m[(i, i)];
        out[(i, n + i)] = m[(i, n + i)];
        out[(n + i, i)] = m[(n + i, i)];
        out[(n + i, n + i)] = m[(n + i, n + i)];
    }
    SpdMatrix::from_trusted(out)
}

/// `[[alpha, beta], [beta, gamma]]` with `alpha, gamma > 0` and
/// `alpha·gamma − beta² > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoByTwoSpd {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl TwoByTwoSpd {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let ok = alpha.is_finite()
            && beta.is_finite()
            && gamma.is_finite()
            && alpha > 0.0
            && gamma > 0.0
            && alpha * gamma - beta * beta > 0.0;
        if !ok {
            return Err(Error::InvalidTwoByTwo { alpha, beta, gamma });
        }
        Ok(Self { alpha, beta, gamma })
    }

    pub fn from_matrix(m: &RealMatrix) -> Result<Self> {
        if m.shape() != (2, 2) {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: m.nrows(),
            });
        }
        Self::new(m[(0, 0)], 0.5 * (m[(0, 1)] + m[(1, 0)]), m[(1, 1)])
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn matrix(&self) -> RealMatrix {
        RealMatrix::from_row_slice(2, 2, &[self.alpha, self.beta, self.beta, self.gamma])
    }

    pub fn determinant(&self) -> f64 {
        self.alpha * self.gamma - self.beta * self.beta
    }
}

/// Closed-form Williamson diagonalizer of a 2x2 SPD matrix.
///
/// With `δ = αγ − β²`, returns `d = √δ` and
///
/// ```text
/// M = (αγδ)^{-1/4} · diag((γ/α)^{1/4}, (α/γ)^{1/4}) · [[√δ, −β], [0, √(αγ)]]
/// ```
///
/// so that `MᵀAM = d·I` and `det M = 1`.
pub fn williamson_2x2(p: &TwoByTwoSpd) -> (SymplecticMatrix, f64) {
    let (a, b, g) = (p.alpha, p.beta, p.gamma);
    let det = p.determinant();
    let ag = a * g;
    let prefactor = 1.0 / (ag * det).sqrt().sqrt();
    let l0 = (g / a).sqrt().sqrt();
    let l1 = (a / g).sqrt().sqrt();
    let m = RealMatrix::from_row_slice(
        2,
        2,
        &[
            prefactor * l0 * det.sqrt(),
            -prefactor * l0 * b,
            0.0,
            prefactor * l1 * ag.sqrt(),
        ],
    );
    let m = SymplecticMatrix::new(m).expect("closed-form 2x2 diagonalizer has unit determinant");
    (m, det.sqrt())
}

/// Per-block Williamson data for an s-pinching.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDiagonalizer {
    pub m: SymplecticMatrix,
    pub d: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceLedger {
    /// `Tr(MᵀAM)`
    pub trace_mtam: f64,
    /// `Tr(Mᵀ 𝒞ˢ(A) M)`
    pub trace_mtcm: f64,
    /// `2 Σ d_i(𝒞ˢ(A))`
    pub twice_pinched_sum: f64,
    /// largest of the pairwise relative differences of the three traces
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinchingCheck {
    pub partition: Vec<usize>,
    pub ds_pinched: Vec<f64>,
    pub ds: Vec<f64>,
    pub verdict: SaturationVerdict,
    pub trace_ledger: TraceLedger,
    /// `‖Mᵀ 𝒞ˢ(A) M − D ⊕ D‖_F / ‖𝒞ˢ(A)‖_F`
    pub pinched_diag_residual: f64,
    /// `‖MᵀJM − J‖_F`
    pub symplectic_residual: f64,
}

/// General-purpose per-block diagonalizers.
pub fn general_diagonalizers(
    a: &SpdMatrix,
    partition: &BlockPartition,
) -> Result<Vec<BlockDiagonalizer>> {
    s_blocks(a.as_matrix(), partition)?
        .into_iter()
        .map(|b| {
            let w = williamson_decompose(&SpdMatrix::new(b)?)?;
            Ok(BlockDiagonalizer {
                m: w.m,
                d: w.d.into_vec(),
            })
        })
        .collect()
}

/// Closed-form diagonalizers for the unit partition.
pub fn closed_form_diagonalizers(a: &SpdMatrix) -> Result<Vec<BlockDiagonalizer>> {
    s_blocks(a.as_matrix(), &BlockPartition::unit(a.n()))?
        .iter()
        .map(|b| {
            let (m, d) = williamson_2x2(&TwoByTwoSpd::from_matrix(b)?);
            Ok(BlockDiagonalizer { m, d: vec![d] })
        })
        .collect()
}

/// Saturation check for `d_s(𝒞ˢ(A)) ≺^w d_s(A)` with caller-chosen
/// diagonalizers `M_i ∈ Sp(2m_i; A_i)`.
pub fn check_pinching_with(
    a: &SpdMatrix,
    partition: &BlockPartition,
    diagonalizers: &[BlockDiagonalizer],
    tol: f64,
) -> Result<PinchingCheck> {
    if diagonalizers.len() != partition.parts.len() {
        return Err(Error::DimensionMismatch {
            expected: partition.parts.len(),
            found: diagonalizers.len(),
        });
    }
    let pinched = s_pinching(a, partition)?;
    let ds = symplectic_eigenvalues(a)?;

    // block order, not sorted: matches the layout of Mᵀ 𝒞ˢ(A) M
    let concat: Vec<f64> = diagonalizers
        .iter()
        .flat_map(|b| b.d.iter().copied())
        .collect();
    let ds_pinched = SymplecticSpectrum::new(concat.clone())?;

    let m = s_direct_sum(
        &diagonalizers
            .iter()
            .map(|b| b.m.as_matrix().clone())
            .collect::<Vec<_>>(),
    )?;
    let m = SymplecticMatrix::new(m)?;
    let mm = m.as_matrix();

    let mtcm = mm.transpose() * pinched.as_matrix() * mm;
    let pinched_diag_residual =
        (&mtcm - doubled_diagonal(&concat)).norm() / pinched.as_matrix().norm();
    let mtam = a.congruence(mm)?;

    let trace_mtam = mtam.trace();
    let trace_mtcm = mtcm.trace();
    let twice_pinched_sum = 2.0 * ds_pinched.sum();
    let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs());
    let trace_ledger = TraceLedger {
        trace_mtam,
        trace_mtcm,
        twice_pinched_sum,
        residual: rel(trace_mtam, trace_mtcm)
            .max(rel(trace_mtcm, twice_pinched_sum))
            .max(rel(trace_mtam, twice_pinched_sum)),
    };

    let report = check_majorization(
        ds_pinched.values(),
        ds.values(),
        spectrum_tolerance(&ds, tol),
    )?;
    let certificate = is_orthosymplectically_diagonalizable(&mtam, tol)?;
    Ok(PinchingCheck {
        partition: partition.parts.clone(),
        ds_pinched: ds_pinched.into_vec(),
        ds: ds.into_vec(),
        verdict: SaturationVerdict::assemble(Relation::Pinching, report, certificate),
        trace_ledger,
        pinched_diag_residual,
        symplectic_residual: m.residual(),
    })
}

/// `d_s(𝒞ˢ(A)) ≺ d_s(A)` versus orthosymplectic diagonalizability of
/// `MᵀAM`, `M = ⊕ˢ M_i` from the general Williamson routine.
pub fn check_theorem_3(
    a: &SpdMatrix,
    partition: &BlockPartition,
    tol: f64,
) -> Result<PinchingCheck> {
    let diagonalizers = general_diagonalizers(a, partition)?;
    check_pinching_with(a, partition, &diagonalizers, tol)
}

/// Unit-partition case with the closed-form 2x2 diagonalizers.
pub fn check_corollary_4(a: &SpdMatrix, tol: f64) -> Result<PinchingCheck> {
    let diagonalizers = closed_form_diagonalizers(a)?;
    check_pinching_with(a, &BlockPartition::unit(a.n()), &diagonalizers, tol)
}
