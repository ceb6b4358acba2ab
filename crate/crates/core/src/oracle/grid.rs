use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::states::GcsState;

pub const MIN_POINTS: usize = 256;
/// Normalization slack accepted for a freshly sampled state.
pub const NORM_TOL: f64 = 1e-6;

/// Uniform periodic grid `q_k = q_min + k·dq`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    q_min: f64,
    q_max: f64,
    n_points: usize,
}

impl SpatialGrid {
    pub fn new(q_min: f64, q_max: f64, n_points: usize) -> Result<Self> {
        if !(q_min.is_finite() && q_max.is_finite()) || q_max <= q_min {
            return Err(Error::InvalidGrid("q_max must exceed q_min"));
        }
        if n_points < MIN_POINTS || !n_points.is_power_of_two() {
            return Err(Error::InvalidGrid("n_points must be a power of two >= 256"));
        }
        Ok(Self { q_min, q_max, n_points })
    }

    /// The `[−20, 20]`, 4096-point box.
    pub fn verification_default() -> Self {
        Self::new(-20.0, 20.0, 4096).expect("valid default grid")
    }

    pub fn q_min(&self) -> f64 {
        self.q_min
    }

    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn length(&self) -> f64 {
        self.q_max - self.q_min
    }

    pub fn dq(&self) -> f64 {
        self.length() / self.n_points as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        self.q_min + k as f64 * self.dq()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |k| self.point(k))
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n_points;
        let unit = 2.0 * PI / self.length();
        (0..n)
            .map(|j| if j < n / 2 { j as f64 } else { j as f64 - n as f64 } * unit)
            .collect()
    }

    /// Same point count, twice the range, same centre.
    pub fn widened(&self) -> Self {
        let centre = 0.5 * (self.q_min + self.q_max);
        Self {
            q_min: centre - self.length(),
            q_max: centre + self.length(),
            n_points: self.n_points,
        }
    }

    pub fn contains(&self, lo: f64, hi: f64) -> bool {
        self.q_min <= lo && hi <= self.q_max
    }
}

/// Widens `base` until `q̄ ± 8σ_q` fits at both `τ = 0` and `τ_final`.
pub fn verification_grid(state: &GcsState, tau_final: f64, base: SpatialGrid) -> Result<SpatialGrid> {
    let mut extent = (f64::INFINITY, f64::NEG_INFINITY);
    for tau in [0.0, tau_final] {
        let at = state.at(tau)?;
        let half = 8.0 * at.sigma_q();
        extent.0 = extent.0.min(at.mean_q() - half);
        extent.1 = extent.1.max(at.mean_q() + half);
    }
    let mut grid = base;
    for _ in 0..64 {
        if grid.contains(extent.0, extent.1) {
            return Ok(grid);
        }
        grid = grid.widened();
    }
    Err(Error::InvalidGrid("packet does not fit any widened box"))
}

/// Wavefunction values on a grid at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionSample {
    pub grid: SpatialGrid,
    pub tau: f64,
    pub values: Vec<Complex64>,
}

impl WavefunctionSample {
    pub fn new(grid: SpatialGrid, tau: f64, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::InvalidGrid("value count differs from n_points"));
        }
        Ok(Self { grid, tau, values })
    }

    /// Samples `Φ(q, τ)`; fails if the discrete norm is off by more than
    /// [`NORM_TOL`].
    pub fn from_state(state: &GcsState, grid: SpatialGrid, tau: f64) -> Result<Self> {
        let at = state.at(tau)?;
        let values = grid.points().map(|q| at.amplitude(q)).collect();
        let sample = Self { grid, tau, values };
        let norm = sample.norm();
        if !((1.0 - NORM_TOL)..=(1.0 + NORM_TOL)).contains(&norm) {
            return Err(Error::NotNormalized { norm });
        }
        Ok(sample)
    }

    /// `Σ|ψ|² dq`.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dq()
    }

    /// Largest density in the outer four points on either side over the
    /// peak density.
    pub fn edge_ratio(&self) -> f64 {
        edge_ratio(&self.values)
    }
}

pub(crate) fn edge_ratio(values: &[Complex64]) -> f64 {
    let n = values.len();
    let peak = values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    let edge = values[..4]
        .iter()
        .chain(&values[n - 4..])
        .map(|v| v.norm_sqr())
        .fold(0.0, f64::max);
    if peak == 0.0 {
        f64::INFINITY
    } else {
        edge / peak
    }
}

/// `‖a − b‖` on the grid. With `phase_aligned` the global phase of `b`
/// is first rotated onto `a`.
pub fn l2_distance(a: &WavefunctionSample, b: &WavefunctionSample, phase_aligned: bool) -> Result<f64> {
    if a.grid != b.grid || (a.tau - b.tau).abs() > 1e-12 * a.tau.abs().max(1.0) {
        return Err(Error::GridMismatch);
    }
    let dq = a.grid.dq();
    if phase_aligned {
        let overlap: Complex64 = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| x.conj() * y)
            .sum::<Complex64>()
            * dq;
        let d2 = a.norm() + b.norm() - 2.0 * overlap.norm();
        return Ok(d2.max(0.0).sqrt());
    }
    let d2: f64 = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm_sqr()).sum();
    Ok((d2 * dq).sqrt())
}

/// Forward/inverse FFT pair with the grid's wavenumbers.
pub(crate) struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    pub k: Vec<f64>,
}

impl Spectral {
    pub fn new(grid: &SpatialGrid) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.n_points();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            k: grid.wavenumbers(),
        }
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    /// Inverse transform including the `1/n` factor.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        let scale = 1.0 / buf.len() as f64;
        buf.iter_mut().for_each(|v| *v *= scale);
    }

    /// Applies a function of `p̂` to `values`.
    pub fn apply(&self, values: &[Complex64], symbol: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.forward(&mut buf);
        for (v, &k) in buf.iter_mut().zip(&self.k) {
            *v *= symbol(k);
        }
        self.inverse(&mut buf);
        buf
    }
}
