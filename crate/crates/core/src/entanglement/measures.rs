use std::f64::consts::LN_2;

use crate::error::{Error, Result};

use super::DensityMatrix1P;

/// Largest allowed gap inside an eigenvalue pair (relative to Tr ρ = 1).
pub const PAIRING_TOLERANCE: f64 = 1e-6;

/// Slater-decomposition weights |z_k|², one per degenerate eigenvalue pair of
/// ρ, sorted descending.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum {
    pub pair_weights: Vec<f64>,
    /// Largest within-pair eigenvalue gap.
    pub pairing_defect: f64,
}

impl SchmidtSpectrum {
    /// Σ 2|z_k|².
    pub fn total(&self) -> f64 {
        self.pair_weights.iter().map(|w| 2.0 * w).sum()
    }

    /// 1 − Σ 2|z_k|⁴.
    pub fn linear_entropy(&self) -> f64 {
        1.0 - self.pair_weights.iter().map(|w| 2.0 * w * w).sum::<f64>()
    }

    /// ln 2 − Σ 2|z_k|² ln(2|z_k|²).
    pub fn von_neumann_entropy(&self) -> f64 {
        LN_2 - self
            .pair_weights
            .iter()
            .filter(|&&w| w > 0.0)
            .map(|&w| 2.0 * w * (2.0 * w).ln())
            .sum::<f64>()
    }
}

fn entropy_term(l: f64) -> f64 {
    if l > 0.0 {
        -l * l.ln()
    } else {
        0.0
    }
}

/// −Σ λ ln λ with 0·ln 0 = 0; eigenvalues below zero are roundoff and count
/// as zero.
pub fn von_neumann_from_spectrum(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().map(|&l| entropy_term(l)).sum()
}

/// 1 − Σ λ².
pub fn linear_entropy_from_spectrum(eigenvalues: &[f64]) -> f64 {
    1.0 - eigenvalues.iter().map(|l| l * l).sum::<f64>()
}

pub fn von_neumann_entropy(rho: &DensityMatrix1P) -> Result<f64> {
    Ok(von_neumann_from_spectrum(&rho.eigenvalues()?))
}

/// (Tr ρ − Tr ρ^q)/(q − 1) over the support of ρ.
pub fn tsallis_entropy(rho: &DensityMatrix1P, q: f64) -> Result<f64> {
    if q == 1.0 {
        return Err(Error::TsallisAtOne);
    }
    let ev = rho.eigenvalues()?;
    let tr: f64 = ev.iter().map(|l| l.max(0.0)).sum();
    let trq: f64 = ev.iter().filter(|&&l| l > 1e-300).map(|l| l.powf(q)).sum();
    Ok((tr - trq) / (q - 1.0))
}

/// Groups the spectrum of ρ into degenerate pairs. Fails when a pair splits by
/// more than [`PAIRING_TOLERANCE`], which no two-fermion pure state produces.
pub fn eigen_pairs(rho: &DensityMatrix1P) -> Result<SchmidtSpectrum> {
    let mut ev = rho.eigenvalues()?;
    ev.reverse();
    let mut pair_weights = Vec::with_capacity(ev.len() / 2);
    let mut defect: f64 = 0.0;
    for pair in ev.chunks(2) {
        match pair {
            [a, b] => {
                defect = defect.max((a - b).abs());
                pair_weights.push((0.5 * (a + b)).max(0.0));
            }
            // odd dimension: the unpaired eigenvalue must vanish
            [a] => defect = defect.max(a.abs()),
            _ => unreachable!(),
        }
    }
    if defect > PAIRING_TOLERANCE {
        return Err(Error::Unpaired(defect));
    }
    // the eigensolver returns sorted values and pairs are adjacent, so this
    // only settles roundoff-level reorderings; stable for ties
    pair_weights.sort_by(|a, b| b.total_cmp(a));
    Ok(SchmidtSpectrum { pair_weights, pairing_defect: defect })
}

/// Number of Slater pairs with weight above `tol`.
pub fn slater_rank_estimate(rho: &DensityMatrix1P, tol: f64) -> Result<usize> {
    let hi = 1.0 / rho.dim() as f64;
    if !(tol > 0.0 && tol < hi) {
        return Err(Error::OutOfRange { what: "tol", value: tol, lo: 0.0, hi });
    }
    Ok(eigen_pairs(rho)?.pair_weights.iter().filter(|&&w| w > tol).count())
}

const RANGE_SLACK: f64 = 1e-12;

fn check_range(what: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_finite() && value >= lo - RANGE_SLACK && value <= hi + RANGE_SLACK {
        Ok(())
    } else {
        Err(Error::OutOfRange { what, value, lo, hi })
    }
}

/// Maps ε_L ∈ [1/2, 1 − 1/(2N)] onto [0, 1].
pub fn normalized_le(le: f64, n_pairs: usize) -> Result<f64> {
    if n_pairs < 2 {
        return Err(Error::OutOfRange { what: "n_pairs", value: n_pairs as f64, lo: 2.0, hi: f64::INFINITY });
    }
    let hi = 1.0 - 1.0 / (2.0 * n_pairs as f64);
    check_range("linear entropy", le, 0.5, hi)?;
    Ok(((le - 0.5) / (hi - 0.5)).clamp(0.0, 1.0))
}

/// Maps ε_vN ∈ [ln 2, ln 2N] onto [0, 1].
pub fn normalized_vne(vne: f64, n_pairs: usize) -> Result<f64> {
    if n_pairs < 2 {
        return Err(Error::OutOfRange { what: "n_pairs", value: n_pairs as f64, lo: 2.0, hi: f64::INFINITY });
    }
    let n = n_pairs as f64;
    check_range("von Neumann entropy", vne, LN_2, (2.0 * n).ln())?;
    Ok(((vne - LN_2) / n.ln()).clamp(0.0, 1.0))
}
