use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform 2D mesh. Point `(ix, iy)` sits at `origin + (ix·dx, iy·dy)` and has
/// flat mode index `ix·ny + iy`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub origin: [f64; 2],
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, dx: f64, dy: f64, origin: [f64; 2]) -> Result<Self> {
        let g = Self { nx, ny, dx, dy, origin };
        g.validate()?;
        Ok(g)
    }

    /// Grid whose point `(nx/2, ny/2)` lies on `center`.
    pub fn centered(nx: usize, ny: usize, dx: f64, dy: f64, center: [f64; 2]) -> Result<Self> {
        let origin = [
            center[0] - (nx / 2) as f64 * dx,
            center[1] - (ny / 2) as f64 * dy,
        ];
        Self::new(nx, ny, dx, dy, origin)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("nx", self.nx), ("ny", self.ny)] {
            if n < 16 || n % 2 != 0 {
                return Err(Error::InvalidGrid(format!("{name} = {n} must be even and >= 16")));
            }
        }
        if !(self.dx > 0.0 && self.dy > 0.0 && self.dx.is_finite() && self.dy.is_finite()) {
            return Err(Error::InvalidGrid("spacings must be positive".into()));
        }
        if !(self.origin[0].is_finite() && self.origin[1].is_finite()) {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        Ok(())
    }

    /// Number of single-particle modes.
    #[inline]
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn cell(&self) -> f64 {
        self.dx * self.dy
    }

    #[inline]
    pub fn x(&self, ix: usize) -> f64 {
        self.origin[0] + ix as f64 * self.dx
    }

    #[inline]
    pub fn y(&self, iy: usize) -> f64 {
        self.origin[1] + iy as f64 * self.dy
    }

    /// Position of flat mode index `i`.
    #[inline]
    pub fn point(&self, i: usize) -> [f64; 2] {
        [self.x(i / self.ny), self.y(i % self.ny)]
    }

    pub fn extent(&self) -> [f64; 2] {
        [self.nx as f64 * self.dx, self.ny as f64 * self.dy]
    }

    /// Angular wavenumbers in FFT order for `n` points of spacing `d`.
    pub fn wavenumbers(n: usize, d: f64) -> Vec<f64> {
        let dk = 2.0 * std::f64::consts::PI / (n as f64 * d);
        (0..n)
            .map(|i| if i < n.div_ceil(2) { i as f64 } else { i as f64 - n as f64 } * dk)
            .collect()
    }

    /// Largest |k| along each axis.
    pub fn k_max(&self) -> [f64; 2] {
        [std::f64::consts::PI / self.dx, std::f64::consts::PI / self.dy]
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.nx == other.nx
            && self.ny == other.ny
            && (self.dx - other.dx).abs() <= 1e-12 * self.dx
            && (self.dy - other.dy).abs() <= 1e-12 * self.dy
            && (self.origin[0] - other.origin[0]).abs() <= 1e-9 * self.dx
            && (self.origin[1] - other.origin[1]).abs() <= 1e-9 * self.dy
    }

    /// Distance from `p` to the nearest grid edge, per axis.
    pub fn margin_from(&self, p: [f64; 2]) -> [f64; 2] {
        let [lx, ly] = self.extent();
        let hi = [self.origin[0] + lx - self.dx, self.origin[1] + ly - self.dy];
        [
            (p[0] - self.origin[0]).min(hi[0] - p[0]),
            (p[1] - self.origin[1]).min(hi[1] - p[1]),
        ]
    }
}
