//! Strang-split Fourier propagator for
//! `i ∂_τ ψ = [p²/2 + Ξτ p cos²α − Ξ q sin²α + Ξ²τ² cos⁴α/2] ψ`.

use num_complex::Complex64;

use super::grid::{edge_ratio, Spectral, WavefunctionSample};
use crate::dynamics::FieldParams;
use crate::error::{Error, Result};

/// Largest edge-to-peak density ratio tolerated at any step.
pub const EDGE_LEAKAGE_LIMIT: f64 = 1e-12;
/// Steps above this size draw a [`PropagationWarning::CoarseStep`].
pub const ADVISED_MAX_DT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PropagationWarning {
    CoarseStep { dt: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    pub sample: WavefunctionSample,
    pub steps: usize,
    /// Step actually used, `(τ_final − τ_0)/steps`.
    pub dt: f64,
    pub max_edge_ratio: f64,
    /// `|‖ψ(τ_final)‖² − ‖ψ(τ_0)‖²|`.
    pub norm_drift: f64,
    pub warnings: Vec<PropagationWarning>,
}

fn check_edges(values: &[Complex64], tau: f64, worst: &mut f64) -> Result<()> {
    let ratio = edge_ratio(values);
    *worst = worst.max(ratio);
    if ratio > EDGE_LEAKAGE_LIMIT {
        return Err(Error::EdgeLeakage { tau, ratio });
    }
    Ok(())
}

/// Propagates `sample` from its own `τ` to `tau_final` with steps no
/// larger than `dt`.
pub fn propagate(sample: &WavefunctionSample, field: FieldParams, tau_final: f64, dt: f64) -> Result<Propagation> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "dt",
            value: dt,
            reason: "must be finite and > 0",
        });
    }
    if !tau_final.is_finite() || tau_final < sample.tau {
        return Err(Error::InvalidParameter {
            name: "tau_final",
            value: tau_final,
            reason: "must be finite and not before the sample time",
        });
    }
    let mut warnings = Vec::new();
    if dt > ADVISED_MAX_DT {
        warnings.push(PropagationWarning::CoarseStep { dt });
    }
    let tau0 = sample.tau;
    let span = tau_final - tau0;
    let steps = (span / dt).ceil().max(if span > 0.0 { 1.0 } else { 0.0 }) as usize;
    let mut max_edge = 0.0;
    check_edges(&sample.values, tau0, &mut max_edge)?;
    let norm0 = sample.norm();
    if steps == 0 {
        return Ok(Propagation {
            sample: sample.clone(),
            steps,
            dt: 0.0,
            max_edge_ratio: max_edge,
            norm_drift: 0.0,
            warnings,
        });
    }
    let h = span / steps as f64;

    let grid = sample.grid;
    let spectral = Spectral::new(&grid);
    let q: Vec<f64> = grid.points().collect();
    let (xi, sin2, cos2) = (field.big_xi, field.sin2(), field.cos2());
    // phase of exp(−i K(τ_mid) Δ) with K = p²/2 + Ξτ p cos²α
    let kinetic = |tau_mid: f64, weight: f64, k: f64| -> Complex64 {
        Complex64::from_polar(1.0, -(0.5 * k * k + xi * tau_mid * k * cos2) * weight)
    };

    let mut psi = sample.values.clone();
    spectral.forward(&mut psi);
    let mid0 = tau0 + 0.5 * h;
    for (v, &k) in psi.iter_mut().zip(&spectral.k) {
        *v *= kinetic(mid0, 0.5 * h, k);
    }
    for step in 0..steps {
        let tau_mid = tau0 + (step as f64 + 0.5) * h;
        spectral.inverse(&mut psi);
        let offset = 0.5 * (xi * tau_mid * cos2).powi(2);
        for (v, &qk) in psi.iter_mut().zip(&q) {
            *v *= Complex64::from_polar(1.0, -(offset - xi * qk * sin2) * h);
        }
        check_edges(&psi, tau_mid, &mut max_edge)?;
        spectral.forward(&mut psi);
        let next_mid = tau_mid + h;
        let last = step + 1 == steps;
        for (v, &k) in psi.iter_mut().zip(&spectral.k) {
            // closing half-step of this step fused with the opening one of the next
            let mut phase = kinetic(tau_mid, 0.5 * h, k);
            if !last {
                phase *= kinetic(next_mid, 0.5 * h, k);
            }
            *v *= phase;
        }
    }
    spectral.inverse(&mut psi);
    check_edges(&psi, tau_final, &mut max_edge)?;

    let out = WavefunctionSample::new(grid, tau_final, psi)?;
    let norm_drift = (out.norm() - norm0).abs();
    Ok(Propagation {
        sample: out,
        steps,
        dt: h,
        max_edge_ratio: max_edge,
        norm_drift,
        warnings,
    })
}
