//! In-place multidimensional FFT on row-major arrays, built from 1D
//! transforms along each axis.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

/// Columns transformed together along a strided axis.
const TILE: usize = 16;

pub struct FftNd {
    dims: Vec<usize>,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
    scratch: Vec<C64>,
    lane: Vec<C64>,
}

impl FftNd {
    pub fn new(dims: &[usize]) -> Self {
        let mut planner = FftPlanner::new();
        let forward: Vec<_> = dims.iter().map(|&n| planner.plan_fft_forward(n)).collect();
        let inverse: Vec<_> = dims.iter().map(|&n| planner.plan_fft_inverse(n)).collect();
        let scratch_len = forward
            .iter()
            .chain(&inverse)
            .map(|f| f.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        let longest = dims.iter().copied().max().unwrap_or(0);
        Self {
            dims: dims.to_vec(),
            forward,
            inverse,
            scratch: vec![C64::new(0.0, 0.0); scratch_len],
            lane: vec![C64::new(0.0, 0.0); TILE * longest],
        }
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Unnormalized forward transform.
    pub fn forward(&mut self, data: &mut [C64]) {
        self.run(data, true);
    }

    /// Unnormalized inverse transform (a round trip multiplies by `len()`).
    pub fn inverse(&mut self, data: &mut [C64]) {
        self.run(data, false);
    }

    fn run(&mut self, data: &mut [C64], forward: bool) {
        assert_eq!(data.len(), self.len(), "array size does not match the FFT plan");
        for axis in 0..self.dims.len() {
            let n = self.dims[axis];
            if n == 1 {
                continue;
            }
            let plan = if forward { &self.forward[axis] } else { &self.inverse[axis] };
            let stride: usize = self.dims[axis + 1..].iter().product();
            if stride == 1 {
                plan.process_with_scratch(data, &mut self.scratch);
                continue;
            }
            // gather TILE neighbouring columns at a time so reads stay in cache lines
            let block = n * stride;
            for chunk in data.chunks_exact_mut(block) {
                let mut s0 = 0;
                while s0 < stride {
                    let w = TILE.min(stride - s0);
                    let lane = &mut self.lane[..w * n];
                    for i in 0..n {
                        let row = &chunk[i * stride + s0..i * stride + s0 + w];
                        for (c, z) in row.iter().enumerate() {
                            lane[c * n + i] = *z;
                        }
                    }
                    plan.process_with_scratch(lane, &mut self.scratch);
                    for i in 0..n {
                        let row = &mut chunk[i * stride + s0..i * stride + s0 + w];
                        for (c, z) in row.iter_mut().enumerate() {
                            *z = lane[c * n + i];
                        }
                    }
                    s0 += w;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(dims: &[usize], data: &[C64]) -> Vec<C64> {
        let total: usize = dims.iter().product();
        let idx = |mut f: usize| {
            let mut v = vec![0; dims.len()];
            for a in (0..dims.len()).rev() {
                v[a] = f % dims[a];
                f /= dims[a];
            }
            v
        };
        (0..total)
            .map(|k| {
                let kv = idx(k);
                (0..total)
                    .map(|j| {
                        let jv = idx(j);
                        let phase: f64 = (0..dims.len())
                            .map(|a| (kv[a] * jv[a]) as f64 / dims[a] as f64)
                            .sum();
                        data[j] * C64::from_polar(1.0, -2.0 * std::f64::consts::PI * phase)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        let dims = [4, 3, 2, 5];
        let total: usize = dims.iter().product();
        let data: Vec<C64> = (0..total)
            .map(|i| C64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let mut fast = data.clone();
        let mut plan = FftNd::new(&dims);
        plan.forward(&mut fast);
        let slow = naive_dft(&dims, &data);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-10);
        }
        plan.inverse(&mut fast);
        for (a, b) in fast.iter().zip(&data) {
            assert!((a / total as f64 - b).norm() < 1e-13);
        }
    }
}
