use num_complex::Complex64 as C64;

use super::fft::FftNd;
use super::potential::PotentialField;
use super::ScatteringConfig;
use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::units::UnitSystem;
use crate::wavefunction::{WaveFn1P, WaveFn2P};

/// Strang-split spectral propagator
/// e^{−iV dt/2ℏ} F⁻¹ e^{−iT dt/ℏ} F e^{−iV dt/2ℏ} on a one- or two-particle
/// array. The FFT normalization is folded into the kinetic phase.
pub struct SplitOperator {
    fft: FftNd,
    potential: Vec<f64>,
    kinetic: Vec<f64>,
    half_potential_phase: Vec<C64>,
    kinetic_phase: Vec<C64>,
    mask: Option<Vec<f64>>,
    work: Vec<C64>,
    dt: f64,
    hbar: f64,
}

fn kinetic_table(grid: &Grid2D, units: &UnitSystem) -> Vec<f64> {
    let kx = Grid2D::wavenumbers(grid.nx, grid.dx);
    let ky = Grid2D::wavenumbers(grid.ny, grid.dy);
    let c = units.kinetic_prefactor();
    kx.iter().flat_map(|a| ky.iter().map(move |b| c * (a * a + b * b))).collect()
}

fn outer_sum(v: &[f64]) -> Vec<f64> {
    v.iter().flat_map(|a| v.iter().map(move |b| a + b)).collect()
}

fn outer_product(v: &[f64]) -> Vec<f64> {
    v.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect()
}

impl SplitOperator {
    fn build(
        dims: &[usize],
        potential: Vec<f64>,
        kinetic: Vec<f64>,
        mask: Option<Vec<f64>>,
        dt: f64,
        hbar: f64,
    ) -> Self {
        let fft = FftNd::new(dims);
        let scale = 1.0 / fft.len() as f64;
        let half_potential_phase =
            potential.iter().map(|v| C64::from_polar(1.0, -0.5 * v * dt / hbar)).collect();
        let kinetic_phase =
            kinetic.iter().map(|t| C64::from_polar(scale, -t * dt / hbar)).collect();
        let work = vec![C64::new(0.0, 0.0); fft.len()];
        Self { fft, potential, kinetic, half_potential_phase, kinetic_phase, mask, work, dt, hbar }
    }

    /// Single particle in `potential` (sampled on `grid`).
    pub fn one_particle(
        grid: &Grid2D,
        units: &UnitSystem,
        potential: Vec<f64>,
        dt: f64,
        mask: Option<Vec<f64>>,
    ) -> Result<Self> {
        if potential.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        let kinetic = kinetic_table(grid, units);
        Ok(Self::build(&[grid.nx, grid.ny], potential, kinetic, mask, dt, units.hbar))
    }

    /// Two particles sharing `cfg.grid` in the field `v`.
    pub fn two_particle(cfg: &ScatteringConfig, v: &PotentialField) -> Result<Self> {
        if !v.grid.same_as(&cfg.grid) {
            return Err(Error::GridMismatch);
        }
        let g = cfg.grid;
        let kinetic = outer_sum(&kinetic_table(&g, &cfg.units));
        let mask = cfg.absorber_mask().map(|m| outer_product(&m));
        Ok(Self::build(&[g.nx, g.ny, g.nx, g.ny], v.pair_table(), kinetic, mask, cfg.dt, cfg.units.hbar))
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn max_potential(&self) -> f64 {
        self.potential.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_kinetic(&self) -> f64 {
        self.kinetic.iter().fold(0.0, |m, t| m.max(*t))
    }

    /// dt·max|V|/ℏ < 0.1 and dt·max T/ℏ < π on the actual tables.
    pub fn check_stability(&self) -> Result<()> {
        let pot = self.dt * self.max_potential() / self.hbar;
        if !(pot < super::MAX_POTENTIAL_PHASE) {
            return Err(Error::Unstable(format!("dt·max|V|/ℏ = {pot:.4} exceeds 0.1")));
        }
        let kin = self.dt * self.max_kinetic() / self.hbar;
        if !(kin < super::MAX_KINETIC_PHASE) {
            return Err(Error::Unstable(format!("dt·max T/ℏ = {kin:.4} exceeds π")));
        }
        Ok(())
    }

    pub fn step(&mut self, psi: &mut [C64]) {
        for (z, p) in psi.iter_mut().zip(&self.half_potential_phase) {
            *z *= p;
        }
        self.fft.forward(psi);
        for (z, p) in psi.iter_mut().zip(&self.kinetic_phase) {
            *z *= p;
        }
        self.fft.inverse(psi);
        for (z, p) in psi.iter_mut().zip(&self.half_potential_phase) {
            *z *= p;
        }
        if let Some(mask) = &self.mask {
            for (z, m) in psi.iter_mut().zip(mask) {
                *z *= m;
            }
        }
    }

    /// ⟨H⟩ = (Σ V|ψ|² + Σ T|Fψ|²/len) / Σ|ψ|²; independent of the cell weight.
    pub fn energy(&mut self, psi: &[C64]) -> f64 {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        let pot: f64 = psi.iter().zip(&self.potential).map(|(z, v)| v * z.norm_sqr()).sum();
        self.work.copy_from_slice(psi);
        self.fft.forward(&mut self.work);
        let kin: f64 = self.work.iter().zip(&self.kinetic).map(|(z, t)| t * z.norm_sqr()).sum();
        (pot + kin / self.fft.len() as f64) / norm
    }

    /// Advances `psi` from step `start` to step `end`, calling `on_step(step, psi)`
    /// at `start` and at every later multiple of `stride`.
    pub fn evolve<F>(&mut self, psi: &mut [C64], start: usize, end: usize, stride: usize, mut on_step: F) -> Result<()>
    where
        F: FnMut(usize, &[C64]) -> Result<()>,
    {
        let stride = stride.max(1);
        on_step(start, psi)?;
        for s in start + 1..=end {
            self.step(psi);
            if s % stride == 0 {
                on_step(s, psi)?;
            }
        }
        Ok(())
    }
}

/// Evolves a two-particle state under `cfg` from step `start_step` (time
/// `start_step·dt`) to `cfg.n_steps`, refusing unstable step sizes before the
/// first step. `on_snapshot(t, Ψ)` runs at the start and every
/// `snapshot_stride` steps.
pub fn propagate_from<F>(
    mut psi: WaveFn2P,
    cfg: &ScatteringConfig,
    v: &PotentialField,
    start_step: usize,
    mut on_snapshot: F,
) -> Result<WaveFn2P>
where
    F: FnMut(f64, &WaveFn2P) -> Result<()>,
{
    cfg.validate()?;
    if !psi.grid.same_as(&cfg.grid) {
        return Err(Error::GridMismatch);
    }
    let mut op = SplitOperator::two_particle(cfg, v)?;
    op.check_stability()?;
    on_snapshot(start_step as f64 * cfg.dt, &psi)?;
    for s in start_step + 1..=cfg.n_steps {
        op.step(&mut psi.amplitudes);
        if s % cfg.snapshot_stride == 0 {
            on_snapshot(s as f64 * cfg.dt, &psi)?;
        }
    }
    Ok(psi)
}

pub fn propagate<F>(psi: WaveFn2P, cfg: &ScatteringConfig, on_snapshot: F) -> Result<WaveFn2P>
where
    F: FnMut(f64, &WaveFn2P) -> Result<()>,
{
    let v = super::build_potential(cfg);
    propagate_from(psi, cfg, &v, 0, on_snapshot)
}

/// One-particle evolution of `psi` for `n_steps` in `potential`, recording
/// (t, state) every `stride` steps including t = 0.
pub fn propagate_1p(
    psi: &WaveFn1P,
    units: &UnitSystem,
    potential: Vec<f64>,
    dt: f64,
    n_steps: usize,
    stride: usize,
) -> Result<Vec<(f64, WaveFn1P)>> {
    let mut op = SplitOperator::one_particle(&psi.grid, units, potential, dt, None)?;
    op.check_stability()?;
    let mut amps = psi.amplitudes.clone();
    let mut out = Vec::new();
    op.evolve(&mut amps, 0, n_steps, stride, |s, a| {
        out.push((s as f64 * dt, WaveFn1P { grid: psi.grid, amplitudes: a.to_vec() }));
        Ok(())
    })?;
    Ok(out)
}
