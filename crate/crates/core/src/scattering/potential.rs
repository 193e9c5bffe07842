use super::ScatteringConfig;
use crate::grid::Grid2D;

/// Which terms of the two-electron Hamiltonian are switched on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PotentialTerms {
    pub trap: bool,
    pub coulomb: bool,
}

impl PotentialTerms {
    pub const ALL: Self = Self { trap: true, coulomb: true };
    pub const NONE: Self = Self { trap: false, coulomb: false };
}

/// One-body trap on the grid plus the softened Coulomb repulsion tabulated on
/// every lattice displacement (ix_a − ix_b, iy_a − iy_b).
#[derive(Clone, Debug)]
pub struct PotentialField {
    pub grid: Grid2D,
    pub one_body: Vec<f64>,
    /// (2nx − 1)×(2ny − 1), displacement (0, 0) at (nx − 1, ny − 1).
    pub two_body: Vec<f64>,
}

impl PotentialField {
    #[inline]
    pub fn displacement_index(&self, dix: isize, diy: isize) -> usize {
        let w = 2 * self.grid.ny - 1;
        (dix + self.grid.nx as isize - 1) as usize * w + (diy + self.grid.ny as isize - 1) as usize
    }

    #[inline]
    pub fn interaction(&self, dix: isize, diy: isize) -> f64 {
        self.two_body[self.displacement_index(dix, diy)]
    }

    /// V(r_a, r_b) for flat mode indices `a`, `b`.
    #[inline]
    pub fn pair(&self, a: usize, b: usize) -> f64 {
        let ny = self.grid.ny;
        let dix = (a / ny) as isize - (b / ny) as isize;
        let diy = (a % ny) as isize - (b % ny) as isize;
        self.one_body[a] + self.one_body[b] + self.interaction(dix, diy)
    }

    /// Full M×M table of V(r_a, r_b), row-major.
    pub fn pair_table(&self) -> Vec<f64> {
        let m = self.grid.len();
        let mut v = Vec::with_capacity(m * m);
        for a in 0..m {
            v.extend((0..m).map(|b| self.pair(a, b)));
        }
        v
    }
}

/// ½mω²|r − r₀|² for each particle and e²/(ε√(|Δr|² + a²)) between them.
pub fn build_potential(cfg: &ScatteringConfig) -> PotentialField {
    build_potential_with(cfg, PotentialTerms::ALL)
}

pub fn build_potential_with(cfg: &ScatteringConfig, terms: PotentialTerms) -> PotentialField {
    let g = cfg.grid;
    let one_body = trap_potential(cfg, terms.trap);
    let (wx, wy) = (2 * g.nx - 1, 2 * g.ny - 1);
    let a2 = cfg.coulomb_softening * cfg.coulomb_softening;
    let mut two_body = vec![0.0; wx * wy];
    if terms.coulomb {
        for (k, v) in two_body.iter_mut().enumerate() {
            let rx = ((k / wy) as f64 - (g.nx - 1) as f64) * g.dx;
            let ry = ((k % wy) as f64 - (g.ny - 1) as f64) * g.dy;
            *v = cfg.units.coulomb_scale / (rx * rx + ry * ry + a2).sqrt();
        }
    }
    PotentialField { grid: g, one_body, two_body }
}

/// Trap potential on one particle's grid (zeros when `enabled` is false).
pub fn trap_potential(cfg: &ScatteringConfig, enabled: bool) -> Vec<f64> {
    let g = cfg.grid;
    if !enabled {
        return vec![0.0; g.len()];
    }
    let l = cfg.oscillator_length();
    let [cx, cy] = cfg.trap_center;
    (0..g.len())
        .map(|i| {
            let [x, y] = g.point(i);
            0.5 * cfg.trap_energy * ((x - cx).powi(2) + (y - cy).powi(2)) / (l * l)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::make_gaas_units;

    #[test]
    fn coulomb_at_contact() {
        let mut cfg = ScatteringConfig::desk_default(make_gaas_units(), 2.0, 10.0).unwrap();
        cfg.coulomb_softening = 1.0;
        let v = build_potential(&cfg);
        assert!((v.interaction(0, 0) - 111.6).abs() < 0.05);
        assert!((v.interaction(0, 0) - cfg.units.coulomb_scale).abs() < 1e-12);
    }

    #[test]
    fn symmetry_and_trap_minimum() {
        let cfg = ScatteringConfig::desk_default(make_gaas_units(), 2.0, 10.0).unwrap();
        let v = build_potential(&cfg);
        for dix in -(cfg.grid.nx as isize - 1)..cfg.grid.nx as isize {
            for diy in -(cfg.grid.ny as isize - 1)..cfg.grid.ny as isize {
                assert_eq!(v.interaction(dix, diy), v.interaction(-dix, -diy));
            }
        }
        let c = (cfg.grid.nx / 2) * cfg.grid.ny + cfg.grid.ny / 2;
        assert_eq!(cfg.grid.point(c), cfg.trap_center);
        assert_eq!(v.one_body[c], 0.0);
        let table = v.pair_table();
        let max = table.iter().cloned().fold(0.0, f64::max);
        assert!((max - cfg.max_pair_potential()).abs() < 1e-9 * max);
        assert!(table.iter().all(|x| x.is_finite()));
        let m = cfg.grid.len();
        assert_eq!(table[3 * m + 70], table[70 * m + 3]);
    }
}
