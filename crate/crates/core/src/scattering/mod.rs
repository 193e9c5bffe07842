//! Two electrons in a 2D parabolic trap: one bound in the trap ground state,
//! one launched at it as a Gaussian packet, interacting through a softened
//! Coulomb repulsion. Evolution uses a second-order split-operator scheme on
//! the full four-dimensional two-particle grid with periodic boundaries.

mod config;
mod dump;
pub mod fft;
mod potential;
mod propagator;
mod states;

pub use config::{Absorber, ScatteringConfig, MAX_KINETIC_PHASE, MAX_POTENTIAL_PHASE};
pub use dump::{read_wavefunction_dump, write_wavefunction_dump, WavefunctionDump, WAVEFUNCTION_MAGIC};
pub use potential::{build_potential, build_potential_with, trap_potential, PotentialField, PotentialTerms};
pub use propagator::{propagate, propagate_1p, propagate_from, SplitOperator};
pub use states::{gaussian_packet, ho_eigenstate, ho_ground_state, product_initial};
