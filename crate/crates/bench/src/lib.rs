//! Shared inputs for the benchmarks.

use twofermion::{Grid2D, Symmetry, WaveFn2P, C64};

/// A smooth, non-separable two-particle amplitude on an `n`×`n` grid with
/// every spin block populated.
pub fn sample_state(n: usize) -> WaveFn2P {
    let grid = Grid2D::centered(n, n, 5.0, 5.0, [0.0, 0.0]).expect("valid grid");
    let m = grid.len();
    let mut amp = vec![C64::new(0.0, 0.0); m * m];
    for i in 0..m {
        let [xa, ya] = grid.point(i);
        for j in 0..m {
            let [xb, yb] = grid.point(j);
            let a = -((xa + 20.0).powi(2) + ya * ya) / 400.0 - (xb * xb + (yb - 5.0).powi(2)) / 300.0;
            let coupling = 0.002 * (xa - xb) * (ya + yb);
            amp[i * m + j] = C64::new(a, 0.1 * xa + coupling).exp();
        }
    }
    WaveFn2P::new(grid, amp, Symmetry::None).expect("sized amplitudes").normalize().expect("nonzero")
}
