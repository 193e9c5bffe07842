//! Physical units. Everything internal is expressed in meV, nm and fs.

use crate::error::{Error, Result};

/// e²/(4πε₀) in meV·nm (CODATA 2018).
pub const COULOMB_VACUUM: f64 = 1_439.964_548;
/// Electron rest energy m_e c² in meV (CODATA 2018).
pub const ELECTRON_REST_ENERGY: f64 = 510_998_950.0;
/// Speed of light in nm/fs.
pub const SPEED_OF_LIGHT: f64 = 299.792_458;
/// Free-electron mass in meV·fs²/nm².
pub const ELECTRON_MASS: f64 = ELECTRON_REST_ENERGY / (SPEED_OF_LIGHT * SPEED_OF_LIGHT);
/// ℏ in meV·fs.
pub const HBAR: f64 = 658.2119;

/// Material constants of the two-electron Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitSystem {
    /// meV·fs
    pub hbar: f64,
    /// in units of the free-electron mass
    pub effective_mass: f64,
    pub dielectric_const: f64,
    /// e²/ε in meV·nm
    pub coulomb_scale: f64,
}

impl UnitSystem {
    pub fn new(hbar: f64, effective_mass: f64, dielectric_const: f64) -> Result<Self> {
        for (name, v) in [
            ("hbar", hbar),
            ("effective_mass", effective_mass),
            ("dielectric_const", dielectric_const),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            hbar,
            effective_mass,
            dielectric_const,
            coulomb_scale: COULOMB_VACUUM / dielectric_const,
        })
    }

    /// Carrier mass in meV·fs²/nm².
    pub fn mass(&self) -> f64 {
        self.effective_mass * ELECTRON_MASS
    }

    /// ℏ²/(2m) in meV·nm².
    pub fn kinetic_prefactor(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass())
    }

    /// Wavenumber (nm⁻¹) of a carrier with kinetic energy `energy` (meV).
    pub fn wavenumber(&self, energy: f64) -> f64 {
        (energy / self.kinetic_prefactor()).sqrt()
    }

    /// Oscillator length √(ℏ/(mω)) for level spacing `hbar_omega` (meV).
    pub fn oscillator_length(&self, hbar_omega: f64) -> f64 {
        (2.0 * self.kinetic_prefactor() / hbar_omega).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let fresh = Self::new(self.hbar, self.effective_mass, self.dielectric_const)?;
        if ((self.coulomb_scale - fresh.coulomb_scale) / fresh.coulomb_scale).abs() > 1e-12 {
            return Err(Error::InvalidConfig(
                "coulomb_scale inconsistent with dielectric_const".into(),
            ));
        }
        Ok(())
    }
}

/// GaAs: m* = 0.067 m_e and ε_r = 12.9 (static dielectric constant), the
/// textbook values listed e.g. in the Ioffe semiconductor database.
pub fn make_gaas_units() -> UnitSystem {
    UnitSystem::new(HBAR, 0.067, 12.9).expect("GaAs constants are positive")
}

impl Default for UnitSystem {
    fn default() -> Self {
        make_gaas_units()
    }
}
