use crate::dynamics::PhysicalSetup;
use crate::error::{ensure_finite, ensure_positive, Error, Result};

/// Relative tolerance of the minimal-product check `σ_z σ_pz = ħ/2`.
pub const MINIMAL_TOL: f64 = 1e-9;

/// Initial packet widths and momentum in physical units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiclassicalInput {
    sigma_z: f64,
    sigma_pz: f64,
    p_z: f64,
    setup: PhysicalSetup,
}

impl SemiclassicalInput {
    pub fn new(sigma_z: f64, sigma_pz: f64, p_z: f64, setup: PhysicalSetup) -> Result<Self> {
        ensure_positive("sigma_z", sigma_z)?;
        ensure_positive("sigma_pz", sigma_pz)?;
        ensure_finite("p_z", p_z)?;
        let bound = setup.hbar() / 2.0;
        let product = sigma_z * sigma_pz;
        if product < bound * (1.0 - 1e-12) {
            return Err(Error::HeisenbergViolation { product, bound });
        }
        if setup.xi() * p_z < 0.0 {
            return Err(Error::DeceleratingField);
        }
        Ok(Self {
            sigma_z,
            sigma_pz,
            p_z,
            setup,
        })
    }

    /// Minimal packet: `σ_pz = ħ/(2σ_z)`.
    pub fn minimal(sigma_z: f64, p_z: f64, setup: PhysicalSetup) -> Result<Self> {
        ensure_positive("sigma_z", sigma_z)?;
        Self::new(sigma_z, setup.hbar() / (2.0 * sigma_z), p_z, setup)
    }

    /// Natural units (ħ = m = c = |e| = 1, σ_z = 1) chosen so that the
    /// ratios come out as `(x, y, w)`.
    pub fn from_ratios(x: f64, y: f64, w: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&y) {
            return Err(Error::InvalidParameter {
                name: "y",
                value: y,
                reason: "must lie in [0, 1)",
            });
        }
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "x",
                value: x,
                reason: "must be finite and >= 0",
            });
        }
        if !(w >= 0.0 && w.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "w",
                value: w,
                reason: "must be finite and >= 0",
            });
        }
        let sigma_z = 1.0;
        let sigma_pz = 1.0 / (2.0 * ((1.0 - y) * (1.0 + y)).sqrt());
        // W = m|e|E σ_z / (2 σ_pz²)
        let field = 2.0 * w * sigma_pz * sigma_pz / sigma_z;
        let setup = PhysicalSetup::natural(field, std::f64::consts::FRAC_PI_2, 1.0)?;
        Self::new(sigma_z, sigma_pz, x * sigma_pz, setup)
    }

    pub fn sigma_z(&self) -> f64 {
        self.sigma_z
    }

    pub fn sigma_pz(&self) -> f64 {
        self.sigma_pz
    }

    pub fn p_z(&self) -> f64 {
        self.p_z
    }

    pub fn setup(&self) -> &PhysicalSetup {
        &self.setup
    }

    /// `t_σ = m σ_z / σ_pz`.
    pub fn t_sigma(&self) -> f64 {
        self.setup.mass() * self.sigma_z / self.sigma_pz
    }

    pub fn is_minimal(&self) -> bool {
        let bound = self.setup.hbar() / 2.0;
        (self.sigma_z * self.sigma_pz / bound - 1.0).abs() <= MINIMAL_TOL
    }

    pub(crate) fn require_minimal(&self) -> Result<()> {
        if self.is_minimal() {
            Ok(())
        } else {
            Err(Error::NotMinimal {
                product: self.sigma_z * self.sigma_pz,
                bound: self.setup.hbar() / 2.0,
            })
        }
    }

    /// `W` written through the acceleration: `|ξ| t_σ² / (2σ_z)`.
    pub fn w_from_acceleration(&self) -> f64 {
        self.setup.xi().abs() * self.t_sigma().powi(2) / (2.0 * self.sigma_z)
    }

    pub fn ratios(&self) -> RatioSet {
        let hbar = self.setup.hbar();
        let u = (hbar / (2.0 * self.sigma_z * self.sigma_pz)).min(1.0);
        let y = ((1.0 - u) * (1.0 + u)).max(0.0).sqrt();
        let x = self.p_z.abs() / self.sigma_pz;
        let x_sigma = 2.0 * self.p_z.abs() * self.sigma_z / hbar;

        let scales = self.setup.scales();
        let mc = self.setup.mass() * self.setup.light_speed();
        let e_ratio = self.setup.field() / scales.critical_field;
        let w = 0.5 * (mc / self.sigma_pz).powi(2) * (self.sigma_z / scales.compton) * e_ratio;
        let w_sigma = 2.0 * (self.sigma_z / scales.compton).powi(3) * e_ratio;
        RatioSet::with_sigma_parts(x, y, x_sigma, w, w_sigma, self.t_sigma())
    }
}

/// Dimensionless ratios entering `R(t)`.
///
/// Times derived from a ratio set are multiples of `t_sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioSet {
    pub x: f64,
    pub y: f64,
    pub x_sigma: f64,
    pub w: f64,
    pub w_sigma: f64,
    pub t_sigma: f64,
}

impl RatioSet {
    /// Ratios from `(X, Y, W)` alone; `X_σ` and `W_σ` follow from
    /// `Y² + X²/X_σ² = 1` and `W_σ = W X_σ²/X²`.
    pub fn new(x: f64, y: f64, w: f64, t_sigma: f64) -> Self {
        let u2 = (1.0 - y) * (1.0 + y);
        let x_sigma = x / u2.sqrt();
        let w_sigma = w / u2;
        Self::with_sigma_parts(x, y, x_sigma, w, w_sigma, t_sigma)
    }

    fn with_sigma_parts(x: f64, y: f64, x_sigma: f64, w: f64, w_sigma: f64, t_sigma: f64) -> Self {
        Self {
            x,
            y,
            x_sigma,
            w,
            w_sigma,
            t_sigma,
        }
    }

    /// The minimal-packet specialization `X → X_σ`, `Y → 0`, `W → W_σ`.
    pub fn coherent(&self) -> Self {
        Self::with_sigma_parts(
            self.x_sigma,
            0.0,
            self.x_sigma,
            self.w_sigma,
            self.w_sigma,
            self.t_sigma,
        )
    }

    /// `δ = 2|X − Y|`.
    pub fn delta(&self) -> f64 {
        2.0 * (self.x - self.y).abs()
    }

    /// `Δ = |X² + 2W − 1|`.
    pub fn big_delta(&self) -> f64 {
        (self.x * self.x + 2.0 * self.w - 1.0).abs()
    }

    /// `Δ_σ = |X_σ² + 2W_σ − 1|`.
    pub fn big_delta_sigma(&self) -> f64 {
        (self.x_sigma * self.x_sigma + 2.0 * self.w_sigma - 1.0).abs()
    }

    /// Spread `Δσ_z / σ_z` at `s = t/t_σ`.
    pub fn spread_scaled(&self, s: f64) -> f64 {
        let root = (1.0 + 2.0 * s * self.y + s * s).sqrt();
        s * (2.0 * self.y + s) / (root + 1.0)
    }

    /// Displacement `Δz / σ_z` at `s = t/t_σ`.
    pub fn displacement_scaled(&self, s: f64) -> f64 {
        s * self.x + s * s * self.w
    }

    /// `R` at `s = t/t_σ`, with the `s → 0⁺` limit at `s = 0`.
    pub fn ratio_at(&self, s: f64) -> Result<f64> {
        if self.x == 0.0 && self.w == 0.0 {
            return Err(Error::UndefinedRatio);
        }
        let root = (1.0 + 2.0 * s * self.y + s * s).sqrt();
        let denominator = (root + 1.0) * (self.x + s * self.w);
        let numerator = 2.0 * self.y + s;
        if denominator == 0.0 {
            // X = 0 at s = 0: spread ~ sY against displacement ~ s²W
            return Ok(if self.y > 0.0 {
                f64::INFINITY
            } else {
                1.0 / (2.0 * self.w)
            });
        }
        Ok(numerator / denominator)
    }

    /// `P(s) = 2(X − Y) + s(X² + 2W − 1) + 2XW s² + W² s³`; for `s > 0`,
    /// `R(s) ≤ 1` exactly when `P(s) ≥ 0`.
    pub fn margin_polynomial(&self, s: f64) -> f64 {
        let (x, y, w) = (self.x, self.y, self.w);
        2.0 * (x - y) + s * (x * x + 2.0 * w - 1.0) + 2.0 * x * w * s * s + w * w * s * s * s
    }
}

/// Coordinate spread `Δσ_z(t)`.
pub fn spread(input: &SemiclassicalInput, t: f64) -> Result<f64> {
    let t = non_negative_time(t)?;
    let r = input.ratios();
    Ok(input.sigma_z() * r.spread_scaled(t / r.t_sigma))
}

/// Classical displacement `Δz(t)`.
pub fn displacement(input: &SemiclassicalInput, t: f64) -> Result<f64> {
    let t = non_negative_time(t)?;
    let r = input.ratios();
    Ok(input.sigma_z() * r.displacement_scaled(t / r.t_sigma))
}

/// Spread-to-displacement ratio `R(t)`.
pub fn ratio_r(input: &SemiclassicalInput, t: f64) -> Result<f64> {
    let t = non_negative_time(t)?;
    let r = input.ratios();
    r.ratio_at(t / r.t_sigma)
}

fn non_negative_time(t: f64) -> Result<f64> {
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "time must be finite and >= 0",
        })
    }
}
