//! Post-processing of a propagation: entanglement time series, plateau
//! detection, formation time and trap-eigenstate projection maps.

use std::io::Write;

use num_complex::Complex64 as C64;

use crate::entanglement::{normalized_le, normalized_vne};
use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::io::fmt_sig;
use crate::spin::SpinConfig;
use crate::wavefunction::{WaveFn1P, WaveFn2P};

pub const DEFAULT_TAIL_FRACTION: f64 = 0.2;
pub const DEFAULT_FORMATION_DELTA: f64 = 0.01;
/// Tail standard deviation (relative to the mean) above which a plateau is
/// flagged as not stationary.
pub const STATIONARY_SPREAD: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntanglementRecord {
    pub t: f64,
    pub le: f64,
    pub vne: Option<f64>,
    pub spin: SpinConfig,
    pub ek: f64,
}

/// Time-ordered records for one spin configuration. `n_pairs` is the number of
/// Slater pairs used by the normalized measures and `dim` the dimension of ρ.
#[derive(Clone, Debug)]
pub struct EntanglementSeries {
    pub spin: SpinConfig,
    pub ek: f64,
    pub n_pairs: usize,
    pub dim: usize,
    records: Vec<EntanglementRecord>,
}

impl EntanglementSeries {
    pub fn new(spin: SpinConfig, ek: f64, n_pairs: usize, dim: usize) -> Self {
        Self { spin, ek, n_pairs, dim, records: Vec::new() }
    }

    pub fn push(&mut self, t: f64, le: f64, vne: Option<f64>) -> Result<()> {
        if let Some(last) = self.records.last() {
            if !(t > last.t) {
                return Err(Error::InvalidSeries(format!("time {t} does not follow {}", last.t)));
            }
        }
        let tol = 1e-10;
        if !(0.5 - tol..1.0).contains(&le) {
            return Err(Error::InvalidSeries(format!("linear entropy {le} outside [1/2, 1)")));
        }
        if let Some(v) = vne {
            let hi = (self.dim as f64).ln();
            if !(std::f64::consts::LN_2 - tol..hi + tol).contains(&v) {
                return Err(Error::InvalidSeries(format!("von Neumann entropy {v} outside [ln 2, ln {})", self.dim)));
            }
        }
        self.records.push(EntanglementRecord { t, le, vne, spin: self.spin, ek: self.ek });
        Ok(())
    }

    pub fn records(&self) -> &[EntanglementRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn le(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.le).collect()
    }

    pub fn le_normalized(&self) -> Result<Vec<f64>> {
        self.records.iter().map(|r| normalized_le(r.le, self.n_pairs)).collect()
    }

    /// Normalized vNE; errors if any record lacks ε_vN.
    pub fn vne_normalized(&self) -> Result<Vec<f64>> {
        self.records
            .iter()
            .map(|r| {
                let v = r.vne.ok_or_else(|| Error::InvalidSeries("series has no von Neumann entropy".into()))?;
                normalized_vne(v, self.n_pairs)
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stationary {
    pub mean: f64,
    pub std: f64,
    /// False when the tail spread exceeds 2% of the mean.
    pub settled: bool,
}

/// Mean and standard deviation of the trailing `tail_fraction` of `values`.
pub fn stationary_of(values: &[f64], tail_fraction: f64) -> Result<Stationary> {
    if values.len() < 10 {
        return Err(Error::InvalidSeries(format!("{} records, need at least 10", values.len())));
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 0.5) {
        return Err(Error::OutOfRange { what: "tail_fraction", value: tail_fraction, lo: 0.0, hi: 0.5 });
    }
    let n = ((values.len() as f64 * tail_fraction).round() as usize).max(2);
    let tail = &values[values.len() - n..];
    let mean = tail.iter().sum::<f64>() / n as f64;
    let std = (tail.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
    Ok(Stationary { mean, std, settled: std <= STATIONARY_SPREAD * mean.abs() })
}

pub fn stationary_value(series: &EntanglementSeries, tail_fraction: f64) -> Result<Stationary> {
    stationary_of(&series.le(), tail_fraction)
}

/// Earliest time after which every value stays within
/// δ·|stationary − values[0]| of `stationary`.
pub fn formation_time_of(times: &[f64], values: &[f64], stationary: f64, delta: f64) -> Result<f64> {
    if times.len() != values.len() || times.is_empty() {
        return Err(Error::InvalidSeries("times and values must be non-empty and aligned".into()));
    }
    if !(delta > 0.0 && delta <= 0.1) {
        return Err(Error::OutOfRange { what: "delta", value: delta, lo: 0.0, hi: 0.1 });
    }
    let band = delta * (stationary - values[0]).abs();
    let inside = |v: f64| (v - stationary).abs() <= band;
    let first = values.iter().rposition(|&v| !inside(v)).map_or(0, |i| i + 1);
    if first == values.len() {
        return Err(Error::NotConverged(format!(
            "the series never settles within {band:.3e} of {stationary}"
        )));
    }
    Ok(times[first])
}

pub fn formation_time(series: &EntanglementSeries, stationary: &Stationary, delta: f64) -> Result<f64> {
    formation_time_of(&series.times(), &series.le(), stationary.mean, delta)
}

pub const SERIES_HEADER: &str = "t_fs,le,vne,le_norm,vne_norm,spin,ek_mev";

/// One row per record; the vNE columns are empty when not computed.
pub fn write_series_csv<W: Write>(mut w: W, series: &EntanglementSeries) -> Result<()> {
    writeln!(w, "{SERIES_HEADER}")?;
    let le_norm = series.le_normalized()?;
    for (r, ln) in series.records().iter().zip(le_norm) {
        let (vne, vn) = match r.vne {
            Some(v) => (fmt_sig(v, 12), fmt_sig(normalized_vne(v, series.n_pairs)?, 12)),
            None => (String::new(), String::new()),
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            fmt_sig(r.t, 12),
            fmt_sig(r.le, 12),
            vne,
            fmt_sig(ln, 12),
            vn,
            r.spin,
            fmt_sig(r.ek, 12)
        )?;
    }
    Ok(())
}

/// γ_n(r) = |∫dr′ ξ_n(r′) Ψ(r, r′)|² sampled on the grid.
#[derive(Clone, Debug)]
pub struct ProjectionMap {
    pub n: (usize, usize),
    pub grid: Grid2D,
    pub values: Vec<f64>,
}

impl ProjectionMap {
    /// ∫γ dr, the weight of trap level n in the second particle's slot.
    pub fn population(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell()
    }

    /// Grid point with the largest γ.
    pub fn peak(&self) -> [f64; 2] {
        let i = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map_or(0, |(i, _)| i);
        self.grid.point(i)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x_nm,y_nm,gamma")?;
        for (i, g) in self.values.iter().enumerate() {
            let [x, y] = self.grid.point(i);
            writeln!(w, "{},{},{}", fmt_sig(x, 12), fmt_sig(y, 12), fmt_sig(*g, 12))?;
        }
        Ok(())
    }
}

pub fn ho_projection(psi: &WaveFn2P, xi: &WaveFn1P, n: (usize, usize)) -> Result<ProjectionMap> {
    if !psi.grid.same_as(&xi.grid) {
        return Err(Error::GridMismatch);
    }
    let m = psi.modes();
    let w = psi.grid.cell();
    let values = psi
        .amplitudes
        .chunks_exact(m)
        .map(|row| {
            let s: C64 = row.iter().zip(&xi.amplitudes).map(|(p, x)| x.conj() * p).sum();
            (s * w).norm_sqr()
        })
        .collect();
    Ok(ProjectionMap { n, grid: psi.grid, values })
}
