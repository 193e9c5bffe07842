//! Entanglement of two identical fermions: the Ω-matrix representation,
//! entropies of the one-particle reduced density matrix, an analytic toy
//! state, a split-operator solver for a two-electron collision in a 2D trap,
//! spin-sector assembly and time-series analysis.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod entanglement;
pub mod error;
pub mod grid;
pub mod io;
pub mod linalg;
pub mod scattering;
pub mod spin;
pub mod toy;
pub mod units;
pub mod wavefunction;

pub use analysis::{EntanglementSeries, ProjectionMap};
pub use entanglement::{
    linear_entropy, reduced_density, von_neumann_entropy, DensityMatrix1P, OmegaMatrix,
    SchmidtSpectrum,
};
pub use error::{Error, Result};
pub use grid::Grid2D;
pub use scattering::{Absorber, PotentialField, ScatteringConfig};
pub use spin::{SpatialBlocks, SpinConfig};
pub use faer;
pub use num_complex::Complex64 as C64;
pub use toy::ToyModelParams;
pub use units::UnitSystem;
pub use wavefunction::{Symmetry, WaveFn1P, WaveFn2P};
