//! Multi-dimensional FFT over the periodic grid, used to diagonalize the
//! finite-difference Laplacian.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::Grid;

pub(crate) struct GridFft {
    grid: Grid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl GridFft {
    pub(crate) fn new(grid: Grid) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.points();
        Self { grid, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    fn along_axes(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.grid.points();
        match self.grid.dims() {
            1 => plan.process(data),
            _ => {
                // axis 2 is contiguous
                for line in data.chunks_exact_mut(n) {
                    plan.process(line);
                }
                let mut buf = vec![Complex64::new(0.0, 0.0); n];
                for stride in [n, n * n] {
                    for start in 0..data.len() {
                        // first element of each line along this axis
                        if (start / stride) % n != 0 {
                            continue;
                        }
                        for (j, b) in buf.iter_mut().enumerate() {
                            *b = data[start + j * stride];
                        }
                        plan.process(&mut buf);
                        for (j, b) in buf.iter().enumerate() {
                            data[start + j * stride] = *b;
                        }
                    }
                }
            }
        }
    }

    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.along_axes(data, &self.forward);
    }

    /// Normalized inverse.
    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.along_axes(data, &self.inverse);
        let scale = 1.0 / data.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    /// Eigenvalues of the periodic three-point Laplacian in FFT order,
    /// `-sum_axes 4 sin^2(pi j / N) / h^2`.
    pub(crate) fn laplacian_symbol(&self) -> Vec<f64> {
        let n = self.grid.points();
        let h = self.grid.spacing();
        let axis: Vec<f64> = (0..n).map(|j| -4.0 * (PI * j as f64 / n as f64).sin().powi(2) / (h * h)).collect();
        (0..self.grid.len())
            .map(|i| {
                let m = self.grid.multi_index(i);
                (0..self.grid.dims()).map(|a| axis[m[a]]).sum()
            })
            .collect()
    }
}
