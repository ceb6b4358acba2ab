use num_complex::Complex64;

use super::grid::{SpatialGrid, Spectral};
use crate::error::{Error, Result};
use crate::states::{GcsState, StateAt};

pub const MIN_STEP: f64 = 1e-6;
pub const MAX_STEP: f64 = 1e-2;

/// Which wavefunction the residual is taken of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseVariant {
    Exact,
    /// The `∫ Re Q/2` phase left out.
    WithoutPhaseIntegral,
}

/// `‖(∂_τ + iĤ)Φ‖` on `grid`, with `∂_τ` from a five-point central
/// difference of step `h` and the kinetic terms applied spectrally.
pub fn schrodinger_residual(state: &GcsState, grid: &SpatialGrid, tau: f64, h: f64) -> Result<f64> {
    schrodinger_residual_with(state, grid, tau, h, PhaseVariant::Exact)
}

pub fn schrodinger_residual_with(
    state: &GcsState,
    grid: &SpatialGrid,
    tau: f64,
    h: f64,
    variant: PhaseVariant,
) -> Result<f64> {
    if !(MIN_STEP..=MAX_STEP).contains(&h) {
        return Err(Error::StepOutOfRange {
            h,
            min: MIN_STEP,
            max: MAX_STEP,
        });
    }
    let sample = |t: f64| -> Result<Vec<Complex64>> {
        let mut at: StateAt = state.at(t)?;
        if variant == PhaseVariant::WithoutPhaseIntegral {
            at = at.without_phase_integral();
        }
        Ok(grid.points().map(|q| at.amplitude(q)).collect())
    };
    let [m2, m1, p1, p2] = [tau - 2.0 * h, tau - h, tau + h, tau + 2.0 * h].map(sample);
    let (m2, m1, p1, p2) = (m2?, m1?, p1?, p2?);
    let centre = sample(tau)?;

    let field = state.field();
    let (xi, sin2, cos2) = (field.big_xi, field.sin2(), field.cos2());
    let spectral = Spectral::new(grid);
    let kinetic = spectral.apply(&centre, |k| Complex64::new(0.5 * k * k + xi * tau * k * cos2, 0.0));
    let offset = 0.5 * (xi * tau * cos2).powi(2);

    let mut sum = 0.0;
    for (j, q) in grid.points().enumerate() {
        let dt = (-p2[j] + 8.0 * p1[j] - 8.0 * m1[j] + m2[j]) / (12.0 * h);
        let h_psi = kinetic[j] + (offset - xi * q * sin2) * centre[j];
        sum += (dt + Complex64::i() * h_psi).norm_sqr();
    }
    Ok((sum * grid.dq()).sqrt())
}

/// Residuals over a sequence of steps, for order-of-accuracy checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualConvergence {
    pub steps: Vec<f64>,
    pub residuals: Vec<f64>,
    /// `residual[k]/residual[k+1]`.
    pub ratios: Vec<f64>,
    /// False when a smaller step gave a larger residual, the sign of a
    /// step lost in roundoff.
    pub monotone: bool,
}

pub fn residual_convergence(
    state: &GcsState,
    grid: &SpatialGrid,
    tau: f64,
    steps: &[f64],
) -> Result<ResidualConvergence> {
    let residuals = steps
        .iter()
        .map(|&h| schrodinger_residual(state, grid, tau, h))
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = residuals.windows(2).map(|w| w[0] / w[1]).collect();
    let monotone = steps
        .windows(2)
        .zip(residuals.windows(2))
        .all(|(s, r)| (s[1] < s[0]) == (r[1] <= r[0]));
    Ok(ResidualConvergence {
        steps: steps.to_vec(),
        residuals,
        ratios,
        monotone,
    })
}
