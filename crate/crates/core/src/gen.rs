//! Seeded generators for the test ensembles.
//!
//! Every generator is a pure function of its [`GeneratorConfig`]: the same
//! config yields bitwise identical matrices within one build of the crate.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{doubled_diagonal, symplectic_form, RealMatrix, SpdMatrix, SymplecticMatrix};
use crate::pinching::{s_direct_sum, BlockPartition};
use crate::williamson::orthosymplectic_from_unitary;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n: usize,
    pub seed: u64,
    pub spectrum_range: (f64, f64),
    pub conditioning_cap: f64,
}

impl GeneratorConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            spectrum_range: (0.5, 5.0),
            conditioning_cap: 100.0,
        }
    }

    pub fn with_spectrum_range(mut self, lo: f64, hi: f64) -> Self {
        self.spectrum_range = (lo, hi);
        self
    }

    pub fn with_conditioning_cap(mut self, cap: f64) -> Self {
        self.conditioning_cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.spectrum_range;
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be positive".into()));
        }
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "spectrum range ({lo}, {hi}) must satisfy 0 < lo <= hi"
            )));
        }
        if !(self.conditioning_cap >= 1.0 && self.conditioning_cap.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "conditioning cap {} must be at least 1",
                self.conditioning_cap
            )));
        }
        Ok(())
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// splitmix64 mix of `(seed, stream, index)`, for per-sample seeds.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut z = seed
        ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const STREAM_SPD: u64 = 1;
const STREAM_SYMPLECTIC: u64 = 2;
const STREAM_UNITARY: u64 = 3;
const STREAM_SPECTRUM: u64 = 4;
const STREAM_SCALING: u64 = 5;
const STREAM_BLOCKS: u64 = 6;

fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> RealMatrix {
    RealMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Orthogonal factor of a Gaussian matrix, signs fixed by `R`'s diagonal.
pub fn random_orthogonal(rng: &mut impl Rng, dim: usize) -> RealMatrix {
    let qr = gaussian_matrix(rng, dim, dim).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

pub fn random_spd(cfg: &GeneratorConfig) -> Result<SpdMatrix> {
    cfg.validate()?;
    let (lo, hi) = cfg.spectrum_range;
    let dim = 2 * cfg.n;
    if lo == hi {
        return Ok(SpdMatrix::from_trusted(RealMatrix::identity(dim, dim) * lo));
    }
    let mut rng = cfg.rng(STREAM_SPD);
    let eigenvalues: Vec<f64> = (0..dim).map(|_| rng.gen_range(lo..=hi)).collect();
    let q = random_orthogonal(&mut rng, dim);
    let mut qd = q.clone();
    for (j, l) in eigenvalues.iter().enumerate() {
        qd.column_mut(j).scale_mut(*l);
    }
    SpdMatrix::new(SpdMatrix::from_trusted(qd * q.transpose()).into_matrix())
}

/// `exp(J S)` for symmetric `S`; `J S` is Hamiltonian, so the exponential
/// is symplectic.
pub fn symplectic_exp(s: &RealMatrix) -> Result<SymplecticMatrix> {
    let n = crate::linalg::half_dim(s)?;
    let h = symplectic_form(n) * s;
    SymplecticMatrix::new(h.exp())
}

/// `exp(J S)` with `S` random symmetric, scaled so that
/// `‖M‖₂ ‖M⁻¹‖₂ ≤ e^{2‖S‖₂} ≤ conditioning_cap`.
pub fn random_symplectic(cfg: &GeneratorConfig) -> Result<SymplecticMatrix> {
    cfg.validate()?;
    let mut rng = cfg.rng(STREAM_SYMPLECTIC);
    random_symplectic_with(&mut rng, cfg.n, cfg.conditioning_cap)
}

fn random_symplectic_with(rng: &mut impl Rng, n: usize, cap: f64) -> Result<SymplecticMatrix> {
    let dim = 2 * n;
    let g = gaussian_matrix(rng, dim, dim);
    let s = (&g + g.transpose()) * 0.5;
    let spectral = s.symmetric_eigenvalues().amax();
    let budget = 0.5 * cap.ln() * rng.gen_range(0.25..=1.0);
    let s = if spectral > 0.0 {
        s * (budget / spectral)
    } else {
        s
    };
    symplectic_exp(&s)
}

/// Haar-like unitary `P + iQ` from the QR factorization of a complex
/// Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> (RealMatrix, RealMatrix) {
    let z = DMatrix::<Complex64>::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = z.qr();
    let r = qr.r();
    let mut u = qr.q();
    for j in 0..n {
        let rjj = r[(j, j)];
        let norm = rjj.norm();
        if norm > 0.0 {
            let phase = rjj / norm;
            for c in u.column_mut(j).iter_mut() {
                *c *= phase;
            }
        }
    }
    (u.map(|c| c.re), u.map(|c| c.im))
}

pub fn random_orthosymplectic(cfg: &GeneratorConfig) -> Result<SymplecticMatrix> {
    cfg.validate()?;
    let mut rng = cfg.rng(STREAM_UNITARY);
    let (p, q) = random_unitary(&mut rng, cfg.n);
    orthosymplectic_from_unitary(&p, &q)
}

/// `n` values drawn uniformly from the configured range, ascending.
pub fn random_spectrum(cfg: &GeneratorConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let (lo, hi) = cfg.spectrum_range;
    let mut rng = cfg.rng(STREAM_SPECTRUM);
    let mut d: Vec<f64> = (0..cfg.n).map(|_| rng.gen_range(lo..=hi)).collect();
    d.sort_by(f64::total_cmp);
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumMode {
    Generic,
    Orthosymplectic,
}

/// `N (D ⊕ D) Nᵀ` with `N` random symplectic or orthosymplectic.
pub fn spd_with_spectrum(
    d: &[f64],
    mode: SpectrumMode,
    cfg: &GeneratorConfig,
) -> Result<SpdMatrix> {
    if d.len() != cfg.n {
        return Err(Error::DimensionMismatch {
            expected: cfg.n,
            found: d.len(),
        });
    }
    if d.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::InvalidConfig("spectrum must be positive".into()));
    }
    let n = match mode {
        SpectrumMode::Generic => random_symplectic(cfg)?,
        SpectrumMode::Orthosymplectic => random_orthosymplectic(cfg)?,
    };
    Ok(congruent_to_diagonal(n.as_matrix(), d))
}

/// `N (D ⊕ D) Nᵀ`
pub fn congruent_to_diagonal(n: &RealMatrix, d: &[f64]) -> SpdMatrix {
    SpdMatrix::from_trusted(n * doubled_diagonal(d) * n.transpose())
}

/// `K B K` with `B` orthosymplectically diagonalizable and `K` a diagonal
/// symplectic matrix `diag(k) ⊕ diag(1/k)`, `k_i ∈ [1/2, 2]`.
///
/// Undoing the scaling with the diagonal-ratio matrix of the input recovers
/// `B`, so these inputs saturate the geometric-mean relation.
pub fn spd_scaled_orthosymplectic(cfg: &GeneratorConfig) -> Result<SpdMatrix> {
    let d = random_spectrum(cfg)?;
    let b = spd_with_spectrum(&d, SpectrumMode::Orthosymplectic, cfg)?;
    let mut rng = cfg.rng(STREAM_SCALING);
    let n = cfg.n;
    let mut k = RealMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        let ki: f64 = 2f64.powf(rng.gen_range(-1.0..=1.0));
        k[(i, i)] = ki;
        k[(n + i, n + i)] = 1.0 / ki;
    }
    Ok(SpdMatrix::from_trusted(&k * b.as_matrix() * &k))
}

/// `K⁻ᵀ B K⁻¹` with `B` orthosymplectically diagonalizable and
/// `K = ⊕ˢ K_i` block symplectic for `partition`; such inputs saturate the
/// s-pinching relation.
pub fn spd_pinching_saturated(
    partition: &BlockPartition,
    cfg: &GeneratorConfig,
) -> Result<SpdMatrix> {
    if partition.n() != cfg.n {
        return Err(Error::InvalidPartition {
            parts: partition.parts().to_vec(),
            n: cfg.n,
        });
    }
    let d = random_spectrum(cfg)?;
    let b = spd_with_spectrum(&d, SpectrumMode::Orthosymplectic, cfg)?;
    let mut rng = cfg.rng(STREAM_BLOCKS);
    // per-block budget keeps the assembled matrix within the cap
    let cap = cfg.conditioning_cap.sqrt();
    let blocks = partition
        .parts()
        .iter()
        .map(|&m| random_symplectic_with(&mut rng, m, cap).map(|k| k.inverse().into_matrix()))
        .collect::<Result<Vec<_>>>()?;
    let kinv = s_direct_sum(&blocks)?;
    Ok(SpdMatrix::from_trusted(
        kinv.transpose() * b.as_matrix() * kinv,
    ))
}

/// A random partition of `n` into positive parts.
pub fn random_partition(rng: &mut impl Rng, n: usize) -> BlockPartition {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let m = rng.gen_range(1..=left);
        parts.push(m);
        left -= m;
    }
    BlockPartition::new(parts, n).expect("parts sum to n")
}

/// `(alpha, beta, gamma)` with `alpha, gamma ∈ [0.1, 10]` and
/// `|beta| < 0.95 √(alpha gamma)`.
pub fn random_two_by_two(rng: &mut impl Rng) -> crate::pinching::TwoByTwoSpd {
    let alpha = 10f64.powf(rng.gen_range(-1.0..=1.0));
    let gamma = 10f64.powf(rng.gen_range(-1.0..=1.0));
    let beta = rng.gen_range(-0.95..=0.95) * (alpha * gamma).sqrt();
    crate::pinching::TwoByTwoSpd::new(alpha, beta, gamma).expect("sampled inside the SPD cone")
}
