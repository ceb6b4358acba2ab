use num_complex::Complex64;

use super::grid::{Spectral, WavefunctionSample};
use crate::error::{Error, Result};
use crate::states::MomentSet;

/// Moments of a sampled wavefunction: position moments from sums over
/// `|ψ|²`, momentum moments from the discrete spectrum, and the
/// covariance as `Re⟨(q − q̄)ψ, (p − p̄)ψ⟩`.
pub fn quadrature_moments(sample: &WavefunctionSample) -> Result<MomentSet> {
    let norm = sample.norm();
    if !(norm.is_finite() && (norm - 1.0).abs() <= 1e-6) {
        return Err(Error::NotNormalized { norm });
    }
    let grid = sample.grid;
    let dq = grid.dq();
    let q: Vec<f64> = grid.points().collect();
    let density: Vec<f64> = sample.values.iter().map(|v| v.norm_sqr() * dq / norm).collect();
    let mean_q: f64 = density.iter().zip(&q).map(|(w, x)| w * x).sum();
    let var_q: f64 = density.iter().zip(&q).map(|(w, x)| w * (x - mean_q).powi(2)).sum();

    let spectral = Spectral::new(&grid);
    let mut phi = sample.values.clone();
    spectral.forward(&mut phi);
    let total: f64 = phi.iter().map(|v| v.norm_sqr()).sum();
    let mean_p: f64 = phi.iter().zip(&spectral.k).map(|(v, k)| v.norm_sqr() * k).sum::<f64>() / total;
    let var_p: f64 = phi
        .iter()
        .zip(&spectral.k)
        .map(|(v, k)| v.norm_sqr() * (k - mean_p).powi(2))
        .sum::<f64>()
        / total;

    let shifted_p = spectral.apply(&sample.values, |k| Complex64::new(k - mean_p, 0.0));
    let sigma_qp = sample
        .values
        .iter()
        .zip(&shifted_p)
        .zip(&q)
        .map(|((v, pv), x)| ((x - mean_q) * v.conj() * pv).re)
        .sum::<f64>()
        * dq
        / norm;

    Ok(MomentSet {
        tau: sample.tau,
        mean_q,
        mean_p,
        sigma_q: var_q.sqrt(),
        sigma_p: var_p.sqrt(),
        sigma_qp,
    })
}
