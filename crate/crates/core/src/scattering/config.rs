use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::units::UnitSystem;

/// Bound on dt·max|V|/ℏ.
pub const MAX_POTENTIAL_PHASE: f64 = 0.1;
/// Bound on dt·max T/ℏ.
pub const MAX_KINETIC_PHASE: f64 = std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Absorber {
    None,
    /// cos^(1/8) ramp to zero over `margin` nm at every edge of the box.
    CosRamp { margin: f64 },
}

/// Physical and numerical parameters of a collision run. Lengths in nm,
/// energies in meV, times in fs.
#[derive(Clone, Debug, PartialEq)]
pub struct ScatteringConfig {
    pub units: UnitSystem,
    pub grid: Grid2D,
    /// Center of the harmonic trap that holds the bound electron.
    pub trap_center: [f64; 2],
    /// ℏω of the trap.
    pub trap_energy: f64,
    /// Launch point of the free electron.
    pub packet_center: [f64; 2],
    pub packet_sigma: f64,
    pub kinetic_energy: f64,
    pub direction: [f64; 2],
    pub coulomb_softening: f64,
    pub dt: f64,
    pub n_steps: usize,
    pub snapshot_stride: usize,
    pub absorber: Absorber,
}

impl ScatteringConfig {
    /// Desk-scale run: a 64×18 box around the trap, a coherent-state packet
    /// (σ = l_ho/√2) launched along +x from just outside the separation bound.
    pub fn desk_default(units: UnitSystem, trap_energy: f64, kinetic_energy: f64) -> Result<Self> {
        let (dx, dy) = (6.5, 8.0);
        let trap_center = [0.0, 0.0];
        let l = units.oscillator_length(trap_energy);
        let sigma = l / std::f64::consts::SQRT_2;
        let separation = 4.0 * sigma + 4.0 * l + 1.0;
        let cfg = Self {
            units,
            grid: Grid2D::centered(64, 18, dx, dy, trap_center)?,
            trap_center,
            trap_energy,
            packet_center: [trap_center[0] - separation, trap_center[1]],
            packet_sigma: sigma,
            kinetic_energy,
            direction: [1.0, 0.0],
            coulomb_softening: dx.max(dy),
            dt: 0.35,
            n_steps: 2200,
            snapshot_stride: 40,
            absorber: Absorber::None,
        };
        Ok(cfg)
    }

    pub fn oscillator_length(&self) -> f64 {
        self.units.oscillator_length(self.trap_energy)
    }

    pub fn wavevector(&self) -> [f64; 2] {
        let k = self.units.wavenumber(self.kinetic_energy);
        [k * self.direction[0], k * self.direction[1]]
    }

    pub fn duration(&self) -> f64 {
        self.n_steps as f64 * self.dt
    }

    /// Minimum launch distance 4σ + 4·l_ho.
    pub fn min_separation(&self) -> f64 {
        4.0 * self.packet_sigma + 4.0 * self.oscillator_length()
    }

    pub fn separation(&self) -> f64 {
        let d = [
            self.packet_center[0] - self.trap_center[0],
            self.packet_center[1] - self.trap_center[1],
        ];
        d[0].hypot(d[1])
    }

    /// Largest ½mω²|r − r₀|² over the grid points.
    pub fn max_trap_potential(&self) -> f64 {
        let g = &self.grid;
        let far = |lo: f64, n: usize, d: f64, c: f64| {
            let hi = lo + (n - 1) as f64 * d;
            (lo - c).abs().max((hi - c).abs())
        };
        let rx = far(g.origin[0], g.nx, g.dx, self.trap_center[0]);
        let ry = far(g.origin[1], g.ny, g.dy, self.trap_center[1]);
        let l = self.oscillator_length();
        0.5 * self.trap_energy * (rx * rx + ry * ry) / (l * l)
    }

    /// max over the two-particle grid of V(r_a, r_b): both particles on the
    /// point farthest from the trap.
    pub fn max_pair_potential(&self) -> f64 {
        2.0 * self.max_trap_potential() + self.units.coulomb_scale / self.coulomb_softening
    }

    /// Largest single-particle kinetic energy representable on the grid.
    pub fn max_kinetic_energy(&self) -> f64 {
        let [kx, ky] = self.grid.k_max();
        self.units.kinetic_prefactor() * (kx * kx + ky * ky)
    }

    /// Parameter and geometry checks (everything except the step-size bounds).
    pub fn validate_physics(&self) -> Result<()> {
        self.units.validate()?;
        self.grid.validate()?;
        let positive = [
            ("trap_energy", self.trap_energy),
            ("packet_sigma", self.packet_sigma),
            ("coulomb_softening", self.coulomb_softening),
            ("dt", self.dt),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.kinetic_energy.is_finite() && self.kinetic_energy >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "kinetic_energy must be non-negative, got {}",
                self.kinetic_energy
            )));
        }
        if ((self.direction[0].hypot(self.direction[1])) - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig("direction must be a unit vector".into()));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::InvalidConfig("snapshot_stride must be at least 1".into()));
        }
        if self.separation() < self.min_separation() {
            return Err(Error::InvalidConfig(format!(
                "packet launched {:.2} nm from the trap, needs at least 4σ + 4·l_ho = {:.2} nm",
                self.separation(),
                self.min_separation()
            )));
        }
        for (name, p) in [("trap_center", self.trap_center), ("packet_center", self.packet_center)] {
            let m = self.grid.margin_from(p);
            if m[0] < 0.0 || m[1] < 0.0 {
                return Err(Error::InvalidConfig(format!("{name} lies outside the grid")));
            }
        }
        if let Absorber::CosRamp { margin } = self.absorber {
            let [lx, ly] = self.grid.extent();
            if !(margin > 0.0 && 2.0 * margin < lx.min(ly)) {
                return Err(Error::InvalidConfig(format!(
                    "absorber margin {margin} nm must be positive and below half the box"
                )));
            }
        }
        Ok(())
    }

    /// dt·max|V|/ℏ < 0.1 and dt·max T/ℏ < π.
    pub fn check_stability(&self) -> Result<()> {
        let pot = self.dt * self.max_pair_potential() / self.units.hbar;
        if !(pot < MAX_POTENTIAL_PHASE) {
            return Err(Error::Unstable(format!(
                "dt·max|V|/ℏ = {pot:.4} must stay below {MAX_POTENTIAL_PHASE} \
                 (max|V| = {:.2} meV, use dt < {:.4} fs)",
                self.max_pair_potential(),
                MAX_POTENTIAL_PHASE * self.units.hbar / self.max_pair_potential()
            )));
        }
        let kin = self.dt * self.max_kinetic_energy() / self.units.hbar;
        if !(kin < MAX_KINETIC_PHASE) {
            return Err(Error::Unstable(format!(
                "dt·max T/ℏ = {kin:.4} must stay below π"
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_physics()?;
        self.check_stability()
    }

    /// Per-axis absorber mask on one particle's grid (all ones without absorber).
    pub fn absorber_mask(&self) -> Option<Vec<f64>> {
        let Absorber::CosRamp { margin } = self.absorber else {
            return None;
        };
        let g = &self.grid;
        let ramp = |i: usize, n: usize, d: f64| {
            let u = (i.min(n - 1 - i)) as f64 * d;
            if u >= margin {
                1.0
            } else {
                (std::f64::consts::FRAC_PI_2 * (1.0 - u / margin)).cos().powf(0.125)
            }
        };
        Some(
            (0..g.len())
                .map(|i| ramp(i / g.ny, g.nx, g.dx) * ramp(i % g.ny, g.ny, g.dy))
                .collect(),
        )
    }
}
