//! Semiclassical regime decision tree.
//!
//! All closed-form times below are multiples of `t_σ` computed on a
//! [`RatioSet`]; the `classify_*` entry points on a [`SemiclassicalInput`]
//! return them in the time unit of its setup.

use std::fmt;

use super::ratios::{RatioSet, SemiclassicalInput};
use crate::error::{Error, Result};
use crate::roots::brute_force_crossing;

/// Relative tolerance of the `X = Y` test.
pub const X_EQ_Y_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    SemiclassicalAlways,
    SemiclassicalUntil(f64),
    SemiclassicalAfter(f64),
    QuantumAlways,
}

impl Regime {
    pub fn time(&self) -> Option<f64> {
        match *self {
            Regime::SemiclassicalUntil(t) | Regime::SemiclassicalAfter(t) => Some(t),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regime::SemiclassicalAlways => "SemiclassicalAlways",
            Regime::SemiclassicalUntil(_) => "SemiclassicalUntil",
            Regime::SemiclassicalAfter(_) => "SemiclassicalAfter",
            Regime::QuantumAlways => "QuantumAlways",
        }
    }

    fn scaled(self, factor: f64) -> Self {
        match self {
            Regime::SemiclassicalUntil(t) => Regime::SemiclassicalUntil(t * factor),
            Regime::SemiclassicalAfter(t) => Regime::SemiclassicalAfter(t * factor),
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionLabel {
    I,
    Ii,
    Iii,
    Iv,
    V,
    Vi,
    Vii,
    Viii,
    Ix,
    Quantum,
}

impl ConditionLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConditionLabel::I => "i",
            ConditionLabel::Ii => "ii",
            ConditionLabel::Iii => "iii",
            ConditionLabel::Iv => "iv",
            ConditionLabel::V => "v",
            ConditionLabel::Vi => "vi",
            ConditionLabel::Vii => "vii",
            ConditionLabel::Viii => "viii",
            ConditionLabel::Ix => "ix",
            ConditionLabel::Quantum => "quantum",
        }
    }
}

impl fmt::Display for ConditionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeVerdict {
    pub regime: Regime,
    pub label: ConditionLabel,
    /// When a weak field pulls a packet that has already turned quantum
    /// back under `R = 1`, the time of that second crossing.
    pub recovery_time: Option<f64>,
}

impl RegimeVerdict {
    fn new(regime: Regime, label: ConditionLabel) -> Self {
        Self {
            regime,
            label,
            recovery_time: None,
        }
    }

    pub fn time_value(&self) -> Option<f64> {
        self.regime.time()
    }

    fn scaled(self, factor: f64) -> Self {
        Self {
            regime: self.regime.scaled(factor),
            label: self.label,
            recovery_time: self.recovery_time.map(|t| t * factor),
        }
    }
}

/// Free-particle critical time `t_c = δ/|X² − 1|` (units of `t_σ`).
pub fn critical_time_free(r: &RatioSet) -> f64 {
    r.delta() / (r.x * r.x - 1.0).abs()
}

/// Free minimal-packet critical time `2X_σ/|X_σ² − 1|`.
pub fn critical_time_free_cs(r: &RatioSet) -> f64 {
    2.0 * r.x_sigma / (r.x_sigma * r.x_sigma - 1.0).abs()
}

/// Case (vi): `(X/W)(√(1 + Δ/X²) − 1)`.
pub fn critical_time_vi(r: &RatioSet) -> f64 {
    let d = r.big_delta();
    if r.x == 0.0 {
        return d.sqrt() / r.w;
    }
    // X(√(1 + Δ/X²) − 1) rewritten without cancellation
    let x2 = r.x * r.x;
    d / (r.w * ((x2 + d).sqrt() + r.x))
}

/// Case (vii) reference time `min(δ/Δ, √(δ/2XW), (δ/W²)^{1/3})`.
pub fn reference_time_vii(r: &RatioSet) -> f64 {
    let delta = r.delta();
    let d = r.big_delta();
    let candidates = [
        delta / d,
        (delta / (2.0 * r.x * r.w)).sqrt(),
        (delta / (r.w * r.w)).cbrt(),
    ];
    candidates
        .into_iter()
        .filter(|t| !t.is_nan())
        .fold(f64::INFINITY, f64::min)
}

/// Case (viii) reference time `(Δ/4XW)[1 + √(1 + 8XWδ/Δ²)]`.
///
/// For `X = 0` the formula degenerates; there `max(√(2Δ)/W, (2δ/W²)^{1/3})`
/// bounds the positive root of `W²s³ − Δs − δ` instead.
pub fn reference_time_viii(r: &RatioSet) -> f64 {
    let delta = r.delta();
    let d = r.big_delta();
    if r.x == 0.0 {
        return ((2.0 * d).sqrt() / r.w).max((2.0 * delta / (r.w * r.w)).cbrt());
    }
    let xw = r.x * r.w;
    // positive root of 2XW s² − Δ s − δ
    (d + (d * d + 8.0 * xw * delta).sqrt()) / (4.0 * xw)
}

/// Case (ix) reference time `(√Δ_σ/W_σ) min(1, √Δ_σ/(2X_σ))`.
pub fn reference_time_ix(r: &RatioSet) -> f64 {
    let d = r.big_delta_sigma();
    let root = d.sqrt();
    let cap = if r.x_sigma == 0.0 {
        1.0
    } else {
        (root / (2.0 * r.x_sigma)).min(1.0)
    };
    root / r.w_sigma * cap
}

fn x_equals_y(r: &RatioSet) -> bool {
    (r.x - r.y).abs() <= X_EQ_Y_RTOL * r.x.max(r.y)
}

fn x_at_least_y(r: &RatioSet) -> bool {
    r.x > r.y || x_equals_y(r)
}

/// Free particle, general packet.
pub fn classify_free_gcs_ratios(r: &RatioSet) -> RegimeVerdict {
    if r.x >= 1.0 {
        return RegimeVerdict::new(Regime::SemiclassicalAlways, ConditionLabel::I);
    }
    if r.x > 0.0 && r.x > r.y && !x_equals_y(r) {
        let t_c = critical_time_free(r);
        return RegimeVerdict::new(Regime::SemiclassicalUntil(t_c), ConditionLabel::Ii);
    }
    // X < Y, or X = Y where the critical time collapses to zero
    RegimeVerdict::new(Regime::QuantumAlways, ConditionLabel::Quantum)
}

/// Free particle, minimal packet.
pub fn classify_free_cs_ratios(r: &RatioSet) -> RegimeVerdict {
    if r.x_sigma >= 1.0 {
        return RegimeVerdict::new(Regime::SemiclassicalAlways, ConditionLabel::I);
    }
    if r.x_sigma > 0.0 {
        return RegimeVerdict::new(Regime::SemiclassicalUntil(critical_time_free_cs(r)), ConditionLabel::Ii);
    }
    RegimeVerdict::new(Regime::QuantumAlways, ConditionLabel::Quantum)
}

/// Electric field, general packet.
pub fn classify_field_gcs_ratios(r: &RatioSet) -> Result<RegimeVerdict> {
    if r.w <= 0.0 {
        if r.x == 0.0 {
            return Err(Error::UndefinedRatio);
        }
        return Err(Error::FieldRegime("field classifier needs W > 0"));
    }
    let two_w = 2.0 * r.w;
    let one_minus_x2 = 1.0 - r.x * r.x;
    let verdict = if r.x >= 1.0 {
        RegimeVerdict::new(Regime::SemiclassicalAlways, ConditionLabel::Iii)
    } else if two_w >= 1.0 {
        if x_at_least_y(r) {
            RegimeVerdict::new(Regime::SemiclassicalAlways, ConditionLabel::Iv)
        } else {
            // R(0⁺) = Y/X > 1: the strong field only wins after a while
            RegimeVerdict::new(Regime::SemiclassicalAfter(reference_time_vii(r)), ConditionLabel::Iv)
        }
    } else if two_w >= one_minus_x2 {
        if x_at_least_y(r) {
            RegimeVerdict::new(Regime::SemiclassicalAlways, ConditionLabel::V)
        } else {
            RegimeVerdict::new(Regime::SemiclassicalAfter(reference_time_vii(r)), ConditionLabel::Vii)
        }
    } else if x_equals_y(r) {
        RegimeVerdict::new(Regime::SemiclassicalAfter(critical_time_vi(r)), ConditionLabel::Vi)
    } else if r.x < r.y {
        RegimeVerdict::new(Regime::SemiclassicalAfter(reference_time_viii(r)), ConditionLabel::Viii)
    } else {
        weak_field_window(r)?
    };
    Ok(verdict)
}

/// `Y < X < 1` with a weak field: `P(s)` starts positive and may dip below
/// zero before the cubic term takes over.
fn weak_field_window(r: &RatioSet) -> Result<RegimeVerdict> {
    let d = r.big_delta();
    let (x, w) = (r.x, r.w);
    // positive root of P'(s) = −Δ + 4XW s + 3W² s²
    let s_min = (-4.0 * x * w + (16.0 * x * x * w * w + 12.0 * w * w * d).sqrt()) / (6.0 * w * w);
    if r.margin_polynomial(s_min) >= 0.0 {
        return Ok(RegimeVerdict::new(Regime::SemiclassicalAlways, ConditionLabel::Ii));
    }
    let p = |s: f64| r.margin_polynomial(s);
    let first = brute_force_crossing(p, 0.0, 0.0, s_min)?;
    let mut hi = 2.0 * s_min;
    while p(hi) < 0.0 {
        hi *= 2.0;
    }
    let second = brute_force_crossing(p, 0.0, s_min, hi)?;
    Ok(RegimeVerdict {
        regime: Regime::SemiclassicalUntil(first),
        label: ConditionLabel::Ii,
        recovery_time: Some(second),
    })
}

/// Electric field, minimal packet.
pub fn classify_field_cs_ratios(r: &RatioSet) -> Result<RegimeVerdict> {
    if r.w_sigma <= 0.0 {
        return Err(Error::FieldRegime("field classifier needs W_sigma > 0"));
    }
    let two_w = 2.0 * r.w_sigma;
    let verdict = if r.x_sigma >= 1.0 {
        RegimeVerdict::new(Regime::SemiclassicalAlways, ConditionLabel::Iii)
    } else if two_w >= 1.0 {
        RegimeVerdict::new(Regime::SemiclassicalAlways, ConditionLabel::Iv)
    } else if two_w >= 1.0 - r.x_sigma * r.x_sigma {
        RegimeVerdict::new(Regime::SemiclassicalAlways, ConditionLabel::V)
    } else {
        RegimeVerdict::new(Regime::SemiclassicalAfter(reference_time_ix(r)), ConditionLabel::Ix)
    };
    Ok(verdict)
}

fn require_free(input: &SemiclassicalInput) -> Result<()> {
    if input.setup().field() == 0.0 {
        Ok(())
    } else {
        Err(Error::FieldRegime("free-particle classifier needs E = 0"))
    }
}

fn require_field(input: &SemiclassicalInput) -> Result<()> {
    if input.setup().field() > 0.0 {
        Ok(())
    } else {
        Err(Error::FieldRegime("field classifier needs E > 0"))
    }
}

pub fn classify_free_gcs(input: &SemiclassicalInput) -> Result<RegimeVerdict> {
    require_free(input)?;
    let r = input.ratios();
    Ok(classify_free_gcs_ratios(&r).scaled(r.t_sigma))
}

pub fn classify_free_cs(input: &SemiclassicalInput) -> Result<RegimeVerdict> {
    require_free(input)?;
    input.require_minimal()?;
    let r = input.ratios();
    Ok(classify_free_cs_ratios(&r).scaled(r.t_sigma))
}

pub fn classify_field_gcs(input: &SemiclassicalInput) -> Result<RegimeVerdict> {
    require_field(input)?;
    let r = input.ratios();
    Ok(classify_field_gcs_ratios(&r)?.scaled(r.t_sigma))
}

pub fn classify_field_cs(input: &SemiclassicalInput) -> Result<RegimeVerdict> {
    require_field(input)?;
    input.require_minimal()?;
    let r = input.ratios();
    Ok(classify_field_cs_ratios(&r)?.scaled(r.t_sigma))
}

/// Packet family for [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Gcs,
    Cs,
}

/// Dispatches on packet kind and on whether the field vanishes.
pub fn classify(input: &SemiclassicalInput, kind: StateKind) -> Result<RegimeVerdict> {
    let free = input.setup().field() == 0.0;
    match (kind, free) {
        (StateKind::Gcs, true) => classify_free_gcs(input),
        (StateKind::Gcs, false) => classify_field_gcs(input),
        (StateKind::Cs, true) => classify_free_cs(input),
        (StateKind::Cs, false) => classify_field_cs(input),
    }
}
