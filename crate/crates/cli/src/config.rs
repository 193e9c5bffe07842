//! Run configuration: one TOML file with the sections `[units]`, `[grid]`,
//! `[packet]`, `[trap]`, `[numerics]` and `[run]`. Every key is optional and
//! unknown keys are rejected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use twofermion::scattering::{Absorber, ScatteringConfig};
use twofermion::spin::SpinConfig;
use twofermion::units::{UnitSystem, HBAR};
use twofermion::{Error, Grid2D, Result};

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct UnitsSection {
    pub hbar_mev_fs: f64,
    pub effective_mass: f64,
    pub dielectric_const: f64,
}

impl Default for UnitsSection {
    fn default() -> Self {
        Self { hbar_mev_fs: HBAR, effective_mass: 0.067, dielectric_const: 12.9 }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub nx: usize,
    pub ny: usize,
    pub dx_nm: f64,
    pub dy_nm: f64,
    /// Point (nx/2, ny/2) of the grid; defaults to the trap center.
    pub center_nm: Option<[f64; 2]>,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { nx: 64, ny: 18, dx_nm: 6.5, dy_nm: 8.0, center_nm: None }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct PacketSection {
    /// Defaults to l_ho/√2, the width of a coherent state of the trap.
    pub sigma_nm: Option<f64>,
    pub kinetic_energies_mev: Vec<f64>,
    pub direction: [f64; 2],
    /// Launch point; defaults to `separation_nm` behind the trap center.
    pub center_nm: Option<[f64; 2]>,
    /// Defaults to 4σ + 4·l_ho + 1 nm.
    pub separation_nm: Option<f64>,
}

impl Default for PacketSection {
    fn default() -> Self {
        Self {
            sigma_nm: None,
            kinetic_energies_mev: vec![10.0, 20.0],
            direction: [1.0, 0.0],
            center_nm: None,
            separation_nm: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct TrapSection {
    pub energy_mev: f64,
    pub center_nm: [f64; 2],
}

impl Default for TrapSection {
    fn default() -> Self {
        Self { energy_mev: 2.0, center_nm: [0.0, 0.0] }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsSection {
    pub dt_fs: f64,
    pub n_steps: usize,
    pub snapshot_stride: usize,
    /// Defaults to max(dx, dy).
    pub coulomb_softening_nm: Option<f64>,
    /// Width of the cos⁸ absorbing margin; absent means no absorber.
    pub absorber_margin_nm: Option<f64>,
    pub threads: usize,
}

impl Default for NumericsSection {
    fn default() -> Self {
        Self {
            dt_fs: 0.35,
            n_steps: 2200,
            snapshot_stride: 40,
            coulomb_softening_nm: None,
            absorber_margin_nm: None,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub spins: Vec<String>,
    /// Also compute the von Neumann entropy in `scatter` runs.
    pub vne: bool,
    pub tail_fraction: f64,
    pub formation_delta: f64,
    /// Trap eigenstates (n_x, n_y) projected on at the start and the end.
    pub projections: Vec<[usize; 2]>,
    /// Write a resumable checkpoint every this many snapshots (0 = never).
    pub checkpoint_every: usize,
    pub toy_n_pairs: usize,
    pub toy_points: usize,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            spins: SpinConfig::ALL.iter().map(|s| s.label().to_string()).collect(),
            vne: false,
            tail_fraction: twofermion::analysis::DEFAULT_TAIL_FRACTION,
            formation_delta: twofermion::analysis::DEFAULT_FORMATION_DELTA,
            projections: vec![[0, 0], [1, 0], [2, 0]],
            checkpoint_every: 0,
            toy_n_pairs: 2601,
            toy_points: 101,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub units: UnitsSection,
    pub grid: GridSection,
    pub packet: PacketSection,
    pub trap: TrapSection,
    pub numerics: NumericsSection,
    pub run: RunSection,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.message().to_string()))
    }

    pub fn spins(&self) -> Result<Vec<SpinConfig>> {
        self.run.spins.iter().map(|s| s.parse()).collect()
    }

    pub fn units(&self) -> Result<UnitSystem> {
        UnitSystem::new(self.units.hbar_mev_fs, self.units.effective_mass, self.units.dielectric_const)
    }

    /// Scattering parameters for one incident energy; checks physics and
    /// geometry but not the step-size bounds (see
    /// [`ScatteringConfig::check_stability`]).
    pub fn scattering(&self, kinetic_energy: f64) -> Result<ScatteringConfig> {
        let units = self.units()?;
        let trap_center = self.trap.center_nm;
        let l = units.oscillator_length(self.trap.energy_mev);
        let sigma = self.packet.sigma_nm.unwrap_or(l / std::f64::consts::SQRT_2);
        let g = &self.grid;
        let grid = Grid2D::centered(g.nx, g.ny, g.dx_nm, g.dy_nm, g.center_nm.unwrap_or(trap_center))?;
        let dir = self.packet.direction;
        let packet_center = match (self.packet.center_nm, self.packet.separation_nm) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidConfig("give packet.center_nm or packet.separation_nm, not both".into()))
            }
            (Some(c), None) => c,
            (None, sep) => {
                let d = sep.unwrap_or(4.0 * sigma + 4.0 * l + 1.0);
                [trap_center[0] - d * dir[0], trap_center[1] - d * dir[1]]
            }
        };
        let n = &self.numerics;
        let cfg = ScatteringConfig {
            units,
            grid,
            trap_center,
            trap_energy: self.trap.energy_mev,
            packet_center,
            packet_sigma: sigma,
            kinetic_energy,
            direction: dir,
            coulomb_softening: n.coulomb_softening_nm.unwrap_or(g.dx_nm.max(g.dy_nm)),
            dt: n.dt_fs,
            n_steps: n.n_steps,
            snapshot_stride: n.snapshot_stride,
            absorber: n.absorber_margin_nm.map_or(Absorber::None, |margin| Absorber::CosRamp { margin }),
        };
        cfg.validate_physics()?;
        Ok(cfg)
    }

    /// Schema checks; `scattering` also validates every collision setup.
    pub fn validate(&self, scattering: bool) -> Result<()> {
        self.units()?;
        self.spins()?;
        if !scattering {
            return Ok(());
        }
        if self.packet.kinetic_energies_mev.is_empty() {
            return Err(Error::InvalidConfig("packet.kinetic_energies_mev is empty".into()));
        }
        if self.numerics.threads == 0 {
            return Err(Error::InvalidConfig("numerics.threads must be at least 1".into()));
        }
        for &ek in &self.packet.kinetic_energies_mev {
            self.scattering(ek)?;
        }
        Ok(())
    }
}

/// SHA-256 of the raw configuration text, hex encoded.
pub fn config_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}
