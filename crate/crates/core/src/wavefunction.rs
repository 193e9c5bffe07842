//! Single- and two-particle amplitudes on a [`Grid2D`].
//!
//! Amplitudes are continuum-normalized: a one-particle state satisfies
//! Σ|ψᵢ|²·dx·dy = 1 and a two-particle state Σ|Ψᵢⱼ|²·(dx·dy)² = 1. The
//! two-particle array is stored row-major as an M×M matrix (M = nx·ny) whose
//! row index is the mode of particle a and column index the mode of particle b,
//! so particle exchange is matrix transposition.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::Grid2D;

#[derive(Clone, Debug, PartialEq)]
pub struct WaveFn1P {
    pub grid: Grid2D,
    pub amplitudes: Vec<C64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    None,
    Symmetric,
    Antisymmetric,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WaveFn2P {
    pub grid: Grid2D,
    pub amplitudes: Vec<C64>,
    pub symmetry: Symmetry,
}

fn sum_sq(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

impl WaveFn1P {
    pub fn new(grid: Grid2D, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} amplitudes, got {}",
                grid.len(),
                amplitudes.len()
            )));
        }
        Ok(Self { grid, amplitudes })
    }

    /// Samples `f(x, y)` on every grid point.
    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> C64) -> Self {
        let amplitudes = (0..grid.len())
            .map(|i| {
                let [x, y] = grid.point(i);
                f(x, y)
            })
            .collect();
        Self { grid, amplitudes }
    }

    pub fn norm_sqr(&self) -> f64 {
        sum_sq(&self.amplitudes) * self.grid.cell()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::ZeroNorm);
        }
        let s = 1.0 / n;
        self.amplitudes.iter_mut().for_each(|z| *z *= s);
        Ok(self)
    }

    pub fn density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// ⟨x⟩ and ⟨y⟩ (assumes a normalized state).
    pub fn mean_position(&self) -> [f64; 2] {
        let mut m = [0.0; 2];
        for (i, z) in self.amplitudes.iter().enumerate() {
            let p = self.grid.point(i);
            let w = z.norm_sqr();
            m[0] += w * p[0];
            m[1] += w * p[1];
        }
        let w = sum_sq(&self.amplitudes);
        [m[0] / w, m[1] / w]
    }

    /// Second central moment along x and y.
    pub fn position_variance(&self) -> [f64; 2] {
        let [mx, my] = self.mean_position();
        let mut v = [0.0; 2];
        for (i, z) in self.amplitudes.iter().enumerate() {
            let p = self.grid.point(i);
            let w = z.norm_sqr();
            v[0] += w * (p[0] - mx).powi(2);
            v[1] += w * (p[1] - my).powi(2);
        }
        let w = sum_sq(&self.amplitudes);
        [v[0] / w, v[1] / w]
    }
}

/// Σ conj(aᵢ)·bᵢ·dx·dy.
pub fn inner_product(a: &WaveFn1P, b: &WaveFn1P) -> Result<C64> {
    if !a.grid.same_as(&b.grid) {
        return Err(Error::GridMismatch);
    }
    let s: C64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(s * a.grid.cell())
}

impl WaveFn2P {
    pub fn new(grid: Grid2D, amplitudes: Vec<C64>, symmetry: Symmetry) -> Result<Self> {
        let m = grid.len();
        if amplitudes.len() != m * m {
            return Err(Error::InvalidGrid(format!(
                "expected {} amplitudes, got {}",
                m * m,
                amplitudes.len()
            )));
        }
        Ok(Self { grid, amplitudes, symmetry })
    }

    #[inline]
    pub fn modes(&self) -> usize {
        self.grid.len()
    }

    /// Amplitude with particle a in mode `i` and particle b in mode `j`.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.amplitudes[i * self.modes() + j]
    }

    pub fn norm_sqr(&self) -> f64 {
        let c = self.grid.cell();
        sum_sq(&self.amplitudes) * c * c
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::ZeroNorm);
        }
        let s = 1.0 / n;
        self.amplitudes.iter_mut().for_each(|z| *z *= s);
        Ok(self)
    }

    /// Particle exchange Ψ(r, r′) → Ψ(r′, r).
    pub fn swapped(&self) -> Self {
        let m = self.modes();
        let mut out = vec![C64::new(0.0, 0.0); m * m];
        for i in 0..m {
            for j in 0..m {
                out[j * m + i] = self.amplitudes[i * m + j];
            }
        }
        Self { grid: self.grid, amplitudes: out, symmetry: self.symmetry }
    }

    /// Max over (i, j) of |Ψᵢⱼ ∓ Ψⱼᵢ| relative to the largest amplitude, for
    /// the requested exchange parity.
    pub fn symmetry_defect(&self, sym: Symmetry) -> f64 {
        let sign = match sym {
            Symmetry::None => return 0.0,
            Symmetry::Symmetric => -1.0,
            Symmetry::Antisymmetric => 1.0,
        };
        let m = self.modes();
        let scale = self
            .amplitudes
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in i..m {
                let d = self.amplitudes[i * m + j] + self.amplitudes[j * m + i] * sign;
                worst = worst.max(d.norm());
            }
        }
        worst / scale
    }

    /// Recomputes the exchange defect for the stored tag.
    pub fn check_symmetry(&self) -> Result<()> {
        let d = self.symmetry_defect(self.symmetry);
        if d >= 1e-10 {
            return Err(Error::InvalidDensity(format!(
                "{:?} tag violated, defect {d:.3e}",
                self.symmetry
            )));
        }
        Ok(())
    }

    /// (Ψ ± Ψᵀ), normalized and tagged.
    pub fn projected(&self, sym: Symmetry) -> Result<Self> {
        let sign = match sym {
            Symmetry::None => return Ok(self.clone()),
            Symmetry::Symmetric => 1.0,
            Symmetry::Antisymmetric => -1.0,
        };
        let m = self.modes();
        let mut out = vec![C64::new(0.0, 0.0); m * m];
        for i in 0..m {
            for j in 0..m {
                out[i * m + j] = self.amplitudes[i * m + j] + self.amplitudes[j * m + i] * sign;
            }
        }
        Self { grid: self.grid, amplitudes: out, symmetry: sym }.normalize()
    }

    /// Reduced single-particle marginal density of particle a.
    pub fn marginal_a(&self) -> WaveFn1P {
        let m = self.modes();
        let c = self.grid.cell();
        let amplitudes = (0..m)
            .map(|i| {
                let w: f64 = self.amplitudes[i * m..(i + 1) * m].iter().map(|z| z.norm_sqr()).sum();
                C64::new((w * c).sqrt(), 0.0)
            })
            .collect();
        WaveFn1P { grid: self.grid, amplitudes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid2D {
        Grid2D::centered(16, 16, 1.0, 1.5, [0.0, 0.0]).unwrap()
    }

    fn gauss(x0: f64) -> WaveFn1P {
        WaveFn1P::from_fn(grid(), |x, y| {
            C64::new(-(x - x0).powi(2) / 8.0 - y * y / 10.0, 0.3 * x).exp()
        })
    }

    #[test]
    fn normalize_scales_and_is_idempotent() {
        let g = gauss(0.5).normalize().unwrap();
        let mut twice = g.clone();
        twice.amplitudes.iter_mut().for_each(|z| *z *= 2.0);
        assert!((twice.norm() - 2.0).abs() < 1e-12);
        let back = twice.normalize().unwrap();
        for (a, b) in back.amplitudes.iter().zip(&g.amplitudes) {
            assert!((a - b).norm() < 1e-14);
        }
        let again = g.clone().normalize().unwrap();
        for (a, b) in again.amplitudes.iter().zip(&g.amplitudes) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn zero_norm_is_error() {
        let z = WaveFn1P::from_fn(grid(), |_, _| C64::new(0.0, 0.0));
        assert!(matches!(z.normalize(), Err(Error::ZeroNorm)));
    }

    #[test]
    fn inner_product_basics() {
        let a = gauss(0.0).normalize().unwrap();
        let ia = WaveFn1P { grid: a.grid, amplitudes: a.amplitudes.iter().map(|z| z * C64::i()).collect() };
        assert!((inner_product(&a, &a).unwrap() - 1.0).norm() < 1e-12);
        assert!((inner_product(&a, &ia).unwrap() - C64::i()).norm() < 1e-12);
        let other = Grid2D::centered(16, 16, 1.0, 1.0, [0.0, 0.0]).unwrap();
        let b = WaveFn1P::from_fn(other, |_, _| C64::new(1.0, 0.0));
        assert!(matches!(inner_product(&a, &b), Err(Error::GridMismatch)));
    }

    #[test]
    fn symmetry_checker_detects_tags() {
        let g = grid();
        let m = g.len();
        let a = gauss(-1.0).normalize().unwrap();
        let b = gauss(2.0).normalize().unwrap();
        let mut amp = vec![C64::new(0.0, 0.0); m * m];
        for i in 0..m {
            for j in 0..m {
                amp[i * m + j] = a.amplitudes[i] * b.amplitudes[j];
            }
        }
        let prod = WaveFn2P::new(g, amp, Symmetry::None).unwrap();
        let anti = prod.projected(Symmetry::Antisymmetric).unwrap();
        let sym = prod.projected(Symmetry::Symmetric).unwrap();
        anti.check_symmetry().unwrap();
        sym.check_symmetry().unwrap();
        assert!(prod.symmetry_defect(Symmetry::Antisymmetric) > 1e-3);
        let mut bad = anti.clone();
        bad.symmetry = Symmetry::Symmetric;
        assert!(bad.check_symmetry().is_err());
        assert!((anti.norm() - 1.0).abs() < 1e-12);
    }
}
