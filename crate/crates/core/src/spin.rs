//! The four spin configurations of a two-electron state and their Ω matrices.
//!
//! Single-particle modes are (r, ↑) for index i < M and (r, ↓) for M + i. The
//! spatial content enters through the antisymmetric and symmetric parts A, S
//! of the unsymmetrized two-particle amplitude:
//!
//! | config | Ω (blocks ↑↑, ↑↓ / ↓↑, ↓↓) |
//! |---|---|
//! | same spin Ψ | [[A, 0], [0, 0]] |
//! | triplet Ξ | [[A, 0], [0, −A]] / √2 |
//! | singlet Φ | [[0, −S], [S, 0]] / √2 |
//! | non-factorizable Υ | [[A, −S], [S, −A]] / 2 |
//!
//! The block structure makes ρ block diagonal (Ψ, Ξ, Φ) or block diagonal after
//! a Hadamard rotation of the spin index (Υ, blocks (A ± S)(A ± S)†), so every
//! measure is computed on M×M blocks without forming the 2M×2M matrix.

use std::fmt;
use std::str::FromStr;

use faer::{Mat, MatRef};
use num_complex::Complex64 as C64;

use crate::entanglement::{OmegaMatrix, Storage};
use crate::error::{Error, Result};
use crate::linalg;
use crate::wavefunction::WaveFn2P;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpinConfig {
    SameSpin,
    OppositeNonFactorizable,
    Singlet,
    Triplet,
}

impl SpinConfig {
    pub const ALL: [SpinConfig; 4] = [
        SpinConfig::SameSpin,
        SpinConfig::OppositeNonFactorizable,
        SpinConfig::Singlet,
        SpinConfig::Triplet,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SpinConfig::SameSpin => "same_spin",
            SpinConfig::OppositeNonFactorizable => "opposite_nonfactorizable",
            SpinConfig::Singlet => "singlet",
            SpinConfig::Triplet => "triplet",
        }
    }

    /// Initial ε_L of a collision between two orthogonal orbitals: 1/2, or 3/4
    /// for the factorizable opposite-spin states. Strict for the triplet
    /// (ε_Ξ = (1 + ε_Ψ)/2); the singlet can drop below 3/4 when its symmetric
    /// part approaches a single product ψψ.
    pub fn le_floor(self) -> f64 {
        match self {
            SpinConfig::SameSpin | SpinConfig::OppositeNonFactorizable => 0.5,
            SpinConfig::Singlet | SpinConfig::Triplet => 0.75,
        }
    }
}

impl fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SpinConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "same_spin" => Ok(SpinConfig::SameSpin),
            "opposite_nonfactorizable" => Ok(SpinConfig::OppositeNonFactorizable),
            "singlet" => Ok(SpinConfig::Singlet),
            "triplet" => Ok(SpinConfig::Triplet),
            _ => Err(Error::InvalidConfig(format!(
                "unknown spin configuration {s:?} (same_spin, opposite_nonfactorizable, singlet, triplet)"
            ))),
        }
    }
}

/// Unit-norm antisymmetric and symmetric parts of a two-particle amplitude,
/// as dimensionless mode coefficients.
#[derive(Clone, Debug)]
pub struct SpatialBlocks {
    a: Mat<C64>,
    s: Option<Mat<C64>>,
    /// ‖P − Pᵀ‖² and ‖P + Pᵀ‖² before normalization (P = Ψ·dx·dy).
    pub raw_norms_sqr: (f64, f64),
}

/// Parts with squared norm below this fraction of ‖P‖² count as vanishing.
pub const VANISHING_BLOCK: f64 = 1e-24;

impl SpatialBlocks {
    pub fn modes(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> MatRef<'_, C64> {
        self.a.as_ref()
    }

    /// Errors when the amplitude had no symmetric part.
    pub fn s(&self) -> Result<MatRef<'_, C64>> {
        self.s.as_ref().map(|s| s.as_ref()).ok_or(Error::VanishingBlock("symmetric"))
    }
}

fn scaled(m: Mat<C64>, norm_sqr: f64) -> Mat<C64> {
    let k = 1.0 / norm_sqr.sqrt();
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * k)
}

/// Splits the (evolved, unsymmetrized) two-particle amplitude into A and S.
pub fn spatial_blocks(psi: &WaveFn2P) -> Result<SpatialBlocks> {
    let m = psi.modes();
    let w = psi.grid.cell();
    let amp = &psi.amplitudes;
    let total: f64 = amp.iter().map(|z| z.norm_sqr()).sum::<f64>() * w * w;
    if !(total > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let a = Mat::from_fn(m, m, |i, j| (amp[i * m + j] - amp[j * m + i]) * w);
    let s = Mat::from_fn(m, m, |i, j| (amp[i * m + j] + amp[j * m + i]) * w);
    let na = linalg::frobenius_sqr(a.as_ref());
    let ns = linalg::frobenius_sqr(s.as_ref());
    if na <= VANISHING_BLOCK * total {
        return Err(Error::VanishingBlock("antisymmetric"));
    }
    let s = (ns > VANISHING_BLOCK * total).then(|| scaled(s, ns));
    Ok(SpatialBlocks { a: scaled(a, na), s, raw_norms_sqr: (na, ns) })
}

/// Dense 2M×2M Ω of the configuration.
pub fn build_spin_omega(blocks: &SpatialBlocks, spin: SpinConfig) -> Result<OmegaMatrix> {
    let m = blocks.modes();
    let a = blocks.a();
    let zero = C64::new(0.0, 0.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let entries = match spin {
        SpinConfig::SameSpin => Mat::from_fn(2 * m, 2 * m, |i, j| {
            if i < m && j < m {
                a[(i, j)]
            } else {
                zero
            }
        }),
        SpinConfig::Triplet => Mat::from_fn(2 * m, 2 * m, |i, j| match (i < m, j < m) {
            (true, true) => a[(i, j)] * h,
            (false, false) => -a[(i - m, j - m)] * h,
            _ => zero,
        }),
        SpinConfig::Singlet => {
            let s = blocks.s()?;
            Mat::from_fn(2 * m, 2 * m, |i, j| match (i < m, j < m) {
                (true, false) => -s[(i, j - m)] * h,
                (false, true) => s[(i - m, j)] * h,
                _ => zero,
            })
        }
        SpinConfig::OppositeNonFactorizable => {
            let s = blocks.s()?;
            Mat::from_fn(2 * m, 2 * m, |i, j| {
                0.5 * match (i < m, j < m) {
                    (true, true) => a[(i, j)],
                    (true, false) => -s[(i, j - m)],
                    (false, true) => s[(i - m, j)],
                    (false, false) => -a[(i - m, j - m)],
                }
            })
        }
    };
    OmegaMatrix::with_storage(entries, Storage::SpinBlock)
}

/// (1 + ε_Ψ)/2, the linear entropy of the triplet built from the same spatial
/// part as a same-spin state with entropy ε_Ψ.
pub fn triplet_from_same_spin(le_same_spin: f64) -> Result<f64> {
    if !(0.5 - 1e-12..=1.0).contains(&le_same_spin) {
        return Err(Error::OutOfRange { what: "same-spin linear entropy", value: le_same_spin, lo: 0.5, hi: 1.0 });
    }
    Ok(0.5 * (1.0 + le_same_spin))
}

/// The M×M Gram blocks B·B† that make up ρ (up to normalization) for a
/// configuration, with the multiplicity of each block in ρ.
pub struct BlockGrams {
    pub blocks: Vec<(Mat<C64>, usize)>,
}

impl BlockGrams {
    pub fn new(blocks: &SpatialBlocks, spin: SpinConfig) -> Result<Self> {
        let a = blocks.a();
        let blocks = match spin {
            SpinConfig::SameSpin => vec![(linalg::outer_gram(a), 1)],
            SpinConfig::Triplet => vec![(linalg::outer_gram(a), 2)],
            SpinConfig::Singlet => vec![(linalg::outer_gram(blocks.s()?), 2)],
            SpinConfig::OppositeNonFactorizable => {
                let s = blocks.s()?;
                let m = blocks.modes();
                let plus = Mat::from_fn(m, m, |i, j| a[(i, j)] + s[(i, j)]);
                let minus = Mat::from_fn(m, m, |i, j| a[(i, j)] - s[(i, j)]);
                vec![(linalg::outer_gram(plus.as_ref()), 1), (linalg::outer_gram(minus.as_ref()), 1)]
            }
        };
        Ok(Self { blocks })
    }

    fn trace(&self) -> f64 {
        self.blocks.iter().map(|(g, k)| *k as f64 * linalg::trace_re(g.as_ref())).sum()
    }

    /// 1 − Tr ρ² from Frobenius norms; no eigensolve.
    pub fn linear_entropy(&self) -> f64 {
        let tr = self.trace();
        let sq: f64 = self.blocks.iter().map(|(g, k)| *k as f64 * linalg::frobenius_sqr(g.as_ref())).sum();
        1.0 - sq / (tr * tr)
    }

    /// Nonzero-block eigenvalues of ρ, ascending, with multiplicities expanded.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let tr = self.trace();
        let mut ev = Vec::new();
        for (g, k) in &self.blocks {
            let vals = linalg::hermitian_eigenvalues(g.as_ref())?;
            for _ in 0..*k {
                ev.extend(vals.iter().map(|v| (v / tr).max(0.0)));
            }
        }
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }

    pub fn von_neumann_entropy(&self) -> Result<f64> {
        Ok(crate::entanglement::von_neumann_from_spectrum(&self.spectrum()?))
    }
}

/// ε_L of the configuration from its blocks, equal to
/// `linear_entropy(&build_spin_omega(blocks, spin)?)`.
pub fn spin_entropies(blocks: &SpatialBlocks, spin: SpinConfig) -> Result<f64> {
    Ok(BlockGrams::new(blocks, spin)?.linear_entropy())
}

/// ε_vN of the configuration from the block spectra.
pub fn spin_von_neumann(blocks: &SpatialBlocks, spin: SpinConfig) -> Result<f64> {
    BlockGrams::new(blocks, spin)?.von_neumann_entropy()
}
