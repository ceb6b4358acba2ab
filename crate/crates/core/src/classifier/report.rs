//! Regime conditions restated in physical units (de Broglie wavelength,
//! Compton wavelength, critical field).

use super::ratios::{RatioSet, SemiclassicalInput};
use super::verdict::X_EQ_Y_RTOL;

/// Factor used for the soft `≪` / `≫` flags.
pub const DEFAULT_SOFT_FACTOR: f64 = 10.0;

/// Truth values of the physical-unit conditions for one input.
///
/// The exact flags are equivalent to the dimensionless tests of the
/// classifiers. The `*_soft` flags read `a ≪ b` as `factor·a ≤ b`, up to
/// a relative slack of 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConditions {
    /// `λ = 2πħ/|p_z|`, `None` at rest.
    pub de_broglie: Option<f64>,
    pub compton: f64,
    pub critical_field: f64,
    pub soft_factor: f64,
    /// `σ_pz ≤ 2πħ/λ` (X ≥ 1).
    pub momentum_dominates: bool,
    pub momentum_dominates_soft: bool,
    /// `2πħ/λ < σ_pz ≤ (2πħ/λ)[1 + (λ/4πσ_z)²]^{1/2}` (Y ≤ X < 1).
    pub transient_window: bool,
    /// `σ_pz > (2πħ/λ)[1 + (λ/4πσ_z)²]^{1/2}` (X < Y).
    pub spread_dominates: bool,
    /// `λ ≤ 4πσ_z` (X_σ ≥ 1).
    pub wide_packet: bool,
    pub wide_packet_soft: bool,
    /// `E ≥ (σ_pz/mc)²(ƛ_e/σ_z) E_c` (2W ≥ 1).
    pub strong_field: bool,
    pub strong_field_soft: bool,
    /// `(σ_pz/mc)²(ƛ_e/σ_z)[1 − (2πħ/σ_pz λ)²] ≤ E/E_c < (σ_pz/mc)²(ƛ_e/σ_z)`.
    pub moderate_field: bool,
    /// `0 < E/E_c < (σ_pz/mc)²(ƛ_e/σ_z)[1 − (2πħ/σ_pz λ)²]`.
    pub weak_field: bool,
    /// `σ_pz` on the window edge and a weak field (case vi).
    pub balanced_weak: bool,
    /// `E ≥ ¼(ƛ_e/σ_z)³ E_c` (2W_σ ≥ 1).
    pub strong_field_cs: bool,
    pub strong_field_cs_soft: bool,
    /// `0 < E/E_c < ¼(ƛ_e/σ_z)³[1 − (4πσ_z/λ)²]` and `σ_z ≤ λ/4π` (case ix).
    pub weak_field_cs: bool,
}

impl PhysicalConditions {
    /// Names of the exact flags whose truth value differs from the
    /// dimensionless condition on `r`.
    pub fn mismatches(&self, r: &RatioSet) -> Vec<&'static str> {
        let two_w = 2.0 * r.w;
        let weak = two_w > 0.0 && two_w < 1.0 - r.x * r.x;
        let two_ws = 2.0 * r.w_sigma;
        let checks = [
            ("momentum_dominates", self.momentum_dominates, r.x >= 1.0),
            ("transient_window", self.transient_window, r.y <= r.x && r.x < 1.0),
            ("spread_dominates", self.spread_dominates, r.x < r.y),
            ("wide_packet", self.wide_packet, r.x_sigma >= 1.0),
            ("strong_field", self.strong_field, two_w >= 1.0),
            (
                "moderate_field",
                self.moderate_field,
                1.0 - r.x * r.x <= two_w && two_w < 1.0,
            ),
            ("weak_field", self.weak_field, weak),
            (
                "balanced_weak",
                self.balanced_weak,
                weak && (r.x - r.y).abs() <= X_EQ_Y_RTOL * r.x.max(r.y),
            ),
            ("strong_field_cs", self.strong_field_cs, two_ws >= 1.0),
            (
                "weak_field_cs",
                self.weak_field_cs,
                two_ws > 0.0 && two_ws < 1.0 - r.x_sigma * r.x_sigma && r.x_sigma < 1.0,
            ),
        ];
        checks
            .into_iter()
            .filter(|(_, physical, dimensionless)| physical != dimensionless)
            .map(|(name, _, _)| name)
            .collect()
    }
}

const SOFT_SLACK: f64 = 1e-12;

fn soft_le(a: f64, b: f64) -> bool {
    a <= b * (1.0 + SOFT_SLACK)
}

pub fn physical_conditions_report(input: &SemiclassicalInput) -> PhysicalConditions {
    physical_conditions_report_with(input, DEFAULT_SOFT_FACTOR)
}

pub fn physical_conditions_report_with(input: &SemiclassicalInput, soft_factor: f64) -> PhysicalConditions {
    let setup = input.setup();
    let hbar = setup.hbar();
    let mc = setup.mass() * setup.light_speed();
    let scales = setup.scales();
    let (sigma_z, sigma_pz) = (input.sigma_z(), input.sigma_pz());
    let lambda = setup.de_broglie(input.p_z());
    // 2πħ/λ, which stays finite at rest
    let k = input.p_z().abs();
    let e_ratio = setup.field() / scales.critical_field;

    // (λ/4πσ_z)² = (ħ/2|p|σ_z)²; its reciprocal avoids λ = ∞ at rest
    let inv_lambda_ratio = 2.0 * k * sigma_z / hbar;
    let window_edge = (k * k + (hbar / (2.0 * sigma_z)).powi(2)).sqrt();

    let threshold = (sigma_pz / mc).powi(2) * (scales.compton / sigma_z);
    let weak_top = threshold * (1.0 - (k / sigma_pz).powi(2));
    let threshold_cs = 0.25 * (scales.compton / sigma_z).powi(3);
    let weak_top_cs = threshold_cs * (1.0 - inv_lambda_ratio.powi(2));

    let weak_field = e_ratio > 0.0 && e_ratio < weak_top;
    let balanced = (sigma_pz - window_edge).abs() <= X_EQ_Y_RTOL * sigma_pz.max(window_edge);

    PhysicalConditions {
        de_broglie: lambda,
        compton: scales.compton,
        critical_field: scales.critical_field,
        soft_factor,
        momentum_dominates: sigma_pz <= k,
        momentum_dominates_soft: soft_le(soft_factor * sigma_pz, k),
        transient_window: k < sigma_pz && sigma_pz <= window_edge,
        spread_dominates: sigma_pz > window_edge,
        wide_packet: inv_lambda_ratio >= 1.0,
        wide_packet_soft: soft_le(soft_factor, inv_lambda_ratio),
        strong_field: e_ratio >= threshold,
        strong_field_soft: soft_le(soft_factor * threshold, e_ratio),
        moderate_field: weak_top <= e_ratio && e_ratio < threshold,
        weak_field,
        balanced_weak: weak_field && balanced,
        strong_field_cs: e_ratio >= threshold_cs,
        strong_field_cs_soft: soft_le(soft_factor * threshold_cs, e_ratio),
        weak_field_cs: e_ratio > 0.0 && e_ratio < weak_top_cs && inv_lambda_ratio <= 1.0,
    }
}
