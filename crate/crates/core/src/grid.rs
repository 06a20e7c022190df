//! Periodic position grids and their conjugate wave-number grids.

use nalgebra::DVector;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic grid of N points covering `length`, with positions
/// x_j = -length/2 + j*dx and wave numbers k_j in [-pi/dx, pi/dx).
///
/// N is kept a power of two so the position and wave-number grids are exact
/// duals under the FFT.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    n_points: usize,
    length: f64,
}

impl GridSpec {
    pub fn new(n_points: usize, length: f64) -> Result<Self> {
        if n_points < 16 || !n_points.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "grid size must be a power of two >= 16, got {n_points}"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid length must be positive, got {length}"
            )));
        }
        Ok(Self { n_points, length })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dim(&self) -> usize {
        self.n_points
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n_points as f64
    }

    pub fn position_at(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.spacing()
    }

    pub fn positions(&self) -> DVector<f64> {
        DVector::from_fn(self.n_points, |j, _| self.position_at(j))
    }

    /// Angular wave number of FFT bin `l` (negative branch for l >= N/2).
    pub fn wave_number_at(&self, l: usize) -> f64 {
        let n = self.n_points;
        let freq = if l < n / 2 {
            l as i64
        } else {
            l as i64 - n as i64
        };
        2.0 * PI * freq as f64 / self.length
    }

    pub fn wave_numbers(&self) -> DVector<f64> {
        DVector::from_fn(self.n_points, |l, _| self.wave_number_at(l))
    }

    /// Signed cyclic displacement between grid indices, in length units,
    /// reduced to [-length/2, length/2).
    pub fn cyclic_displacement(&self, from: usize, to: usize) -> f64 {
        let n = self.n_points as i64;
        let mut steps = (to as i64 - from as i64).rem_euclid(n);
        if steps >= n / 2 {
            steps -= n;
        }
        steps as f64 * self.spacing()
    }

    /// Wrapped index difference `to - from` in [0, N).
    pub fn wrap_steps(&self, steps: i64) -> usize {
        steps.rem_euclid(self.n_points as i64) as usize
    }
}

/// In-place unnormalized forward FFT.
pub(crate) fn fft_forward(data: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(data.len()).process(data);
}

/// In-place unnormalized inverse FFT (composition with the forward
/// transform scales by N).
pub(crate) fn fft_inverse(data: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(data.len()).process(data);
}
