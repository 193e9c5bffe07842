use num_complex::Complex64 as C64;

use super::ScatteringConfig;
use crate::error::{Error, Result};
use crate::wavefunction::{Symmetry, WaveFn1P, WaveFn2P};

/// Minimum-uncertainty packet exp(−|r − r_c|²/(4σ²) + i k·(r − r_c)).
pub fn gaussian_packet(cfg: &ScatteringConfig) -> Result<WaveFn1P> {
    let g = cfg.grid;
    let d = g.dx.max(g.dy);
    if cfg.packet_sigma < 2.0 * d {
        return Err(Error::Unresolved(format!(
            "σ = {} nm is below twice the grid spacing {d} nm",
            cfg.packet_sigma
        )));
    }
    let [kx, ky] = cfg.wavevector();
    let [cx, cy] = cfg.packet_center;
    let s2 = 4.0 * cfg.packet_sigma * cfg.packet_sigma;
    WaveFn1P::from_fn(g, |x, y| {
        let (u, v) = (x - cx, y - cy);
        C64::new(-(u * u + v * v) / s2, kx * u + ky * v).exp()
    })
    .normalize()
}

pub fn ho_ground_state(cfg: &ScatteringConfig) -> Result<WaveFn1P> {
    ho_eigenstate(cfg, 0, 0)
}

/// Normalized Hermite functions h_0..=h_n at ξ.
fn hermite_functions(n: usize, xi: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(n + 1);
    h.push(std::f64::consts::PI.powf(-0.25) * (-0.5 * xi * xi).exp());
    if n >= 1 {
        h.push(std::f64::consts::SQRT_2 * xi * h[0]);
    }
    for k in 1..n {
        let next = (2.0 / (k + 1) as f64).sqrt() * xi * h[k] - (k as f64 / (k + 1) as f64).sqrt() * h[k - 1];
        h.push(next);
    }
    h
}

/// Trap eigenstate ξ_{n_x n_y}, energy (n_x + n_y + 1)ℏω.
pub fn ho_eigenstate(cfg: &ScatteringConfig, n_x: usize, n_y: usize) -> Result<WaveFn1P> {
    let g = cfg.grid;
    let l = cfg.oscillator_length();
    let margin = g.margin_from(cfg.trap_center);
    for (n, d, m, axis) in [(n_x, g.dx, margin[0], 'x'), (n_y, g.dy, margin[1], 'y')] {
        let reach = (2 * n + 1) as f64;
        if l / reach.sqrt() < d {
            return Err(Error::Unresolved(format!(
                "level {n} along {axis} oscillates faster than the spacing {d} nm resolves"
            )));
        }
        if l * reach.sqrt() > m {
            return Err(Error::Unresolved(format!(
                "level {n} along {axis} reaches beyond the grid edge"
            )));
        }
    }
    let [cx, cy] = cfg.trap_center;
    WaveFn1P::from_fn(g, |x, y| {
        let hx = hermite_functions(n_x, (x - cx) / l)[n_x];
        let hy = hermite_functions(n_y, (y - cy) / l)[n_y];
        C64::new(hx * hy, 0.0)
    })
    .normalize()
}

/// Unsymmetrized ψ(r_a)·φ(r_b), normalized.
pub fn product_initial(psi: &WaveFn1P, phi: &WaveFn1P) -> Result<WaveFn2P> {
    if !psi.grid.same_as(&phi.grid) {
        return Err(Error::GridMismatch);
    }
    let m = psi.grid.len();
    let mut amplitudes = Vec::with_capacity(m * m);
    for a in &psi.amplitudes {
        amplitudes.extend(phi.amplitudes.iter().map(|b| a * b));
    }
    WaveFn2P::new(psi.grid, amplitudes, Symmetry::None)?.normalize()
}
