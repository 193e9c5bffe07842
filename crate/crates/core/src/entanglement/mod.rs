//! Pure two-fermion states in the Ω-matrix representation and the entropies
//! of their one-particle reduced density matrix.
//!
//! A state Σᵢⱼ ωᵢⱼ a†ᵢ a†ⱼ|0⟩ is stored as its antisymmetric coefficient
//! matrix. The reduced density matrix is ρ_μν = (Ω†Ω)_νμ / Tr(Ω†Ω), i.e. ρ =
//! ΩΩ† / Tr(ΩΩ†); the quotient makes every measure independent of the overall
//! scale of Ω.

mod dump;
mod measures;

pub use dump::{read_matrix_dump, write_matrix_dump, MATRIX_MAGIC};
pub use measures::{
    eigen_pairs, linear_entropy_from_spectrum, normalized_le, normalized_vne,
    slater_rank_estimate, tsallis_entropy, von_neumann_entropy, von_neumann_from_spectrum,
    SchmidtSpectrum, PAIRING_TOLERANCE,
};

use faer::{Mat, MatRef};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg;

/// Antisymmetry defect above which a matrix is rejected as an Ω.
pub const ANTISYMMETRY_TOLERANCE: f64 = 1e-8;

/// How an Ω was assembled; informational only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Storage {
    Dense,
    SpinBlock,
}

/// Complex antisymmetric coefficient matrix of a pure two-fermion state.
#[derive(Clone, Debug)]
pub struct OmegaMatrix {
    entries: Mat<C64>,
    storage: Storage,
}

impl OmegaMatrix {
    pub fn new(entries: Mat<C64>) -> Result<Self> {
        Self::with_storage(entries, Storage::Dense)
    }

    pub fn with_storage(entries: Mat<C64>, storage: Storage) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidDensity("Ω must be square".into()));
        }
        if linalg::frobenius_sqr(entries.as_ref()) == 0.0 {
            return Err(Error::ZeroMatrix);
        }
        let defect = linalg::antisymmetry_defect(entries.as_ref());
        if !(defect <= ANTISYMMETRY_TOLERANCE) {
            return Err(Error::NotAntisymmetric(defect));
        }
        Ok(Self { entries, storage })
    }

    /// Builds Ω from its strictly upper triangle, ωⱼᵢ = −ωᵢⱼ.
    pub fn from_upper(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let mut m = Mat::<C64>::zeros(dim, dim);
        for i in 0..dim {
            for j in i + 1..dim {
                let w = f(i, j);
                m[(i, j)] = w;
                m[(j, i)] = -w;
            }
        }
        Self::new(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> MatRef<'_, C64> {
        self.entries.as_ref()
    }

    pub fn storage(&self) -> Storage {
        self.storage
    }

    pub fn frobenius_sqr(&self) -> f64 {
        linalg::frobenius_sqr(self.entries.as_ref())
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        linalg::antisymmetry_defect(self.entries.as_ref())
    }

    /// Uᵀ Ω U, the coefficient matrix after the single-particle basis change
    /// a†ᵢ → Σⱼ Uᵢⱼ a†ⱼ.
    pub fn transformed(&self, u: MatRef<'_, C64>) -> Result<Self> {
        let tmp = &self.entries * u;
        Self::with_storage(u.transpose() * &tmp, self.storage)
    }
}

/// Hermitian, unit-trace one-particle reduced density matrix.
#[derive(Clone, Debug)]
pub struct DensityMatrix1P {
    entries: Mat<C64>,
}

impl DensityMatrix1P {
    /// Checks Hermiticity (1e-12) and unit trace (1e-12). Positivity is only
    /// checked by the spectral operations, which see the eigenvalues anyway.
    pub fn new(entries: Mat<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidDensity("ρ must be square".into()));
        }
        let h = linalg::hermiticity_defect(entries.as_ref());
        if !(h <= 1e-12) {
            return Err(Error::InvalidDensity(format!("not Hermitian (defect {h:.3e})")));
        }
        let tr = linalg::trace_re(entries.as_ref());
        if !((tr - 1.0).abs() <= 1e-12) {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        Ok(Self { entries })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> MatRef<'_, C64> {
        self.entries.as_ref()
    }

    /// Tr ρ² as the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        linalg::frobenius_sqr(self.entries.as_ref())
    }

    /// Eigenvalues in nondecreasing order; rejects ρ with eigenvalues below
    /// −1e-10.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let ev = linalg::hermitian_eigenvalues(self.entries.as_ref())?;
        if let Some(&lo) = ev.first() {
            if lo < -1e-10 {
                return Err(Error::InvalidDensity(format!("negative eigenvalue {lo:.3e}")));
            }
        }
        Ok(ev)
    }
}

/// ρ = ΩΩ†/Tr(ΩΩ†), entrywise equal to (Ω†Ω)_νμ / Tr(Ω†Ω).
pub fn reduced_density(omega: &OmegaMatrix) -> Result<DensityMatrix1P> {
    let mut rho = linalg::outer_gram(omega.entries());
    let tr = linalg::trace_re(rho.as_ref());
    if !(tr > 0.0) {
        return Err(Error::ZeroMatrix);
    }
    let s = 1.0 / tr;
    let n = rho.nrows();
    for j in 0..n {
        for i in 0..n {
            rho[(i, j)] *= s;
        }
        // the product is Hermitian up to rounding; make it exact
        rho[(j, j)].im = 0.0;
    }
    for j in 0..n {
        for i in j + 1..n {
            let z = (rho[(i, j)] + rho[(j, i)].conj()) * 0.5;
            rho[(i, j)] = z;
            rho[(j, i)] = z.conj();
        }
    }
    DensityMatrix1P::new(rho)
}

/// ε_L = 1 − Tr ρ², straight from Ω: one Gram product and a Frobenius norm,
/// no spectrum.
pub fn linear_entropy(omega: &OmegaMatrix) -> f64 {
    let g = linalg::outer_gram(omega.entries());
    let tr = linalg::trace_re(g.as_ref());
    1.0 - linalg::frobenius_sqr(g.as_ref()) / (tr * tr)
}
