//! The 2N-mode state χ(α): one dominant Slater pair plus N − 1 equally
//! weighted ones, interpolating between a single determinant (α = 0) and the
//! maximally correlated state (α = 1).

use std::io::Write;

use num_complex::Complex64 as C64;

use crate::entanglement::{
    self, linear_entropy_from_spectrum, normalized_le, normalized_vne, von_neumann_from_spectrum,
    OmegaMatrix,
};
use crate::error::{Error, Result};
use crate::io::fmt_sig;

/// Largest N for which the generic pipeline is run on a dense Ω.
pub const DENSE_PATH_MAX_PAIRS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToyModelParams {
    pub n_pairs: usize,
    pub alpha: f64,
}

impl ToyModelParams {
    pub fn new(n_pairs: usize, alpha: f64) -> Result<Self> {
        if n_pairs < 1 {
            return Err(Error::OutOfRange { what: "n_pairs", value: 0.0, lo: 1.0, hi: f64::INFINITY });
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::OutOfRange { what: "alpha", value: alpha, lo: 0.0, hi: 1.0 });
        }
        Ok(Self { n_pairs, alpha })
    }

    /// (ω₁₂, ω_{2k−1,2k} for k ≥ 2).
    pub fn coefficients(&self) -> (f64, f64) {
        let n = self.n_pairs as f64;
        let u = (1.0 - self.alpha).powi(2);
        let lead = ((1.0 + (n - 1.0) * u) / (2.0 * n)).sqrt();
        let rest = (self.alpha * (2.0 - self.alpha) / (2.0 * n)).sqrt();
        (lead, rest)
    }

    /// Eigenvalues of ρ(χ), read off its diagonal structure (each pair weight
    /// appears twice).
    pub fn spectrum(&self) -> Vec<f64> {
        let (lead, rest) = self.coefficients();
        let mut ev = Vec::with_capacity(2 * self.n_pairs);
        ev.extend([lead * lead; 2]);
        ev.extend(std::iter::repeat_n(rest * rest, 2 * (self.n_pairs - 1)));
        ev
    }
}

/// Dense 2N×2N Ω of χ(α).
pub fn build_chi_omega(p: ToyModelParams) -> OmegaMatrix {
    let (lead, rest) = p.coefficients();
    OmegaMatrix::from_upper(2 * p.n_pairs, |i, j| {
        if j == i + 1 && i % 2 == 0 {
            C64::new(if i == 0 { lead } else { rest }, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
    .expect("χ(α) always has ω₁₂ > 0")
}

/// 1 − 1/(2N) − (1−α)⁴(N−1)/(2N).
pub fn le_chi_closed(p: ToyModelParams) -> f64 {
    let n = p.n_pairs as f64;
    1.0 - 1.0 / (2.0 * n) - (1.0 - p.alpha).powi(4) * (n - 1.0) / (2.0 * n)
}

/// 1 − (1−α)⁴.
pub fn le_chi_normalized(p: ToyModelParams) -> f64 {
    1.0 - (1.0 - p.alpha).powi(4)
}

/// Closed-form normalized von Neumann entropy of χ(α); undefined for N = 1.
pub fn vne_chi_normalized(p: ToyModelParams) -> Result<f64> {
    if p.n_pairs < 2 {
        return Err(Error::OutOfRange { what: "n_pairs", value: p.n_pairs as f64, lo: 2.0, hi: f64::INFINITY });
    }
    let n = p.n_pairs as f64;
    let a = p.alpha * (2.0 - p.alpha);
    let b = 1.0 + (1.0 - p.alpha).powi(2) * (n - 1.0);
    let xlnx = |w: f64, x: f64| if w == 0.0 { 0.0 } else { w * x.ln() };
    Ok(-((n - 1.0) * xlnx(a, a / n) + xlnx(b, b / n)) / (n * n.ln()))
}

/// Un-normalized ε_vN of χ(α) from the closed form.
pub fn vne_chi_closed(p: ToyModelParams) -> Result<f64> {
    Ok(vne_chi_normalized(p)? * (p.n_pairs as f64).ln() + std::f64::consts::LN_2)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub le_norm: f64,
    pub vne_norm: f64,
    pub le: f64,
    pub vne: f64,
}

/// Tolerance on closed form vs generic pipeline agreement inside a sweep.
pub const SWEEP_CONSISTENCY: f64 = 1e-9;

/// Measures of χ(α) through the generic spectrum-based pipeline: a dense Ω for
/// small N, the analytic diagonal spectrum otherwise.
pub fn generic_measures(p: ToyModelParams) -> Result<(f64, f64)> {
    if p.n_pairs <= DENSE_PATH_MAX_PAIRS {
        let omega = build_chi_omega(p);
        let rho = entanglement::reduced_density(&omega)?;
        Ok((entanglement::linear_entropy(&omega), entanglement::von_neumann_entropy(&rho)?))
    } else {
        let ev = p.spectrum();
        Ok((linear_entropy_from_spectrum(&ev), von_neumann_from_spectrum(&ev)))
    }
}

/// Uniform α sweep over [0, 1]. Each row is cross-checked between the closed
/// forms and [`generic_measures`].
pub fn sweep_alpha(n_pairs: usize, n_points: usize) -> Result<Vec<SweepRow>> {
    if n_points < 2 {
        return Err(Error::OutOfRange { what: "n_points", value: n_points as f64, lo: 2.0, hi: f64::INFINITY });
    }
    (0..n_points)
        .map(|i| {
            let alpha = i as f64 / (n_points - 1) as f64;
            let p = ToyModelParams::new(n_pairs, alpha)?;
            let le = le_chi_closed(p);
            let vne = vne_chi_closed(p)?;
            let (le_gen, vne_gen) = generic_measures(p)?;
            let gap = (le - le_gen).abs().max((vne - vne_gen).abs());
            if gap > SWEEP_CONSISTENCY {
                return Err(Error::NotConverged(format!(
                    "closed form and generic pipeline disagree by {gap:.3e} at alpha = {alpha}"
                )));
            }
            let le_norm = le_chi_normalized(p);
            let vne_norm = vne_chi_normalized(p)?;
            // the generic normalizers must reproduce the closed normalized forms
            let gap = (normalized_le(le_gen, n_pairs)? - le_norm)
                .abs()
                .max((normalized_vne(vne_gen, n_pairs)? - vne_norm).abs());
            if gap > SWEEP_CONSISTENCY {
                return Err(Error::NotConverged(format!(
                    "normalized forms disagree by {gap:.3e} at alpha = {alpha}"
                )));
            }
            Ok(SweepRow { alpha, le_norm, vne_norm, le, vne })
        })
        .collect()
}

pub const SWEEP_HEADER: &str = "alpha,le_norm,vne_norm,le,vne";

pub fn write_sweep_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_sig(r.alpha, 12),
            fmt_sig(r.le_norm, 12),
            fmt_sig(r.vne_norm, 12),
            fmt_sig(r.le, 12),
            fmt_sig(r.vne, 12)
        )?;
    }
    Ok(())
}
