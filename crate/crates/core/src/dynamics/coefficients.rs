//! Coefficients of the linear integral of motion
//! `A(τ) = (f q + i g p)/√2 + φ` and the phase function entering the
//! state wavefunctions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};

/// Tolerance of the commutator constraint `Re(f0 g0*) = 1`.
pub const SEED_CONSTRAINT_TOL: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Initial values `(f0, g0)`, with `Re(f0 g0*) = 1` enforced on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedCoefficients {
    f0: Complex64,
    g0: Complex64,
}

impl SeedCoefficients {
    pub fn new(f0: Complex64, g0: Complex64) -> Result<Self> {
        let re_product = (f0 * g0.conj()).re;
        if !re_product.is_finite() || (re_product - 1.0).abs() > SEED_CONSTRAINT_TOL {
            return Err(Error::SeedConstraint { re_product });
        }
        Ok(Self { f0, g0 })
    }

    /// Builds the seed with `f0` given and `f0 g0* = 1 + i·imag`, which
    /// satisfies the constraint by construction.
    pub fn from_f0(f0: Complex64, imag: f64) -> Result<Self> {
        if f0.norm() == 0.0 || !f0.is_finite() || !imag.is_finite() {
            return Err(Error::SeedConstraint { re_product: 0.0 });
        }
        let g0 = (Complex64::new(1.0, imag) / f0).conj();
        Self::new(f0, g0)
    }

    pub fn f0(&self) -> Complex64 {
        self.f0
    }

    pub fn g0(&self) -> Complex64 {
        self.g0
    }

    /// `g(τ) = g0 + i f0 τ`.
    pub fn g(&self, tau: f64) -> Complex64 {
        self.g0 + I * self.f0 * tau
    }
}

/// Dimensionless field strength Ξ and gauge angle α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    pub big_xi: f64,
    pub alpha: f64,
}

impl FieldParams {
    pub fn new(big_xi: f64, alpha: f64) -> Self {
        Self { big_xi, alpha }
    }

    pub fn free() -> Self {
        Self::new(0.0, 0.0)
    }

    pub fn sin2(&self) -> f64 {
        self.alpha.sin().powi(2)
    }

    pub fn cos2(&self) -> f64 {
        self.alpha.cos().powi(2)
    }
}

/// `(f, g, φ)` at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub f: Complex64,
    pub g: Complex64,
    pub phi: Complex64,
}

pub fn coefficient_functions(seed: &SeedCoefficients, field: FieldParams, tau: f64) -> Coefficients {
    let f = seed.f0;
    let g = seed.g(tau);
    let phi = -(I * g * field.sin2() + f * tau / 2.0) * field.big_xi * tau / std::f64::consts::SQRT_2;
    Coefficients { f, g, phi }
}

fn checked_g(seed: &SeedCoefficients, tau: f64) -> Result<Complex64> {
    let g = seed.g(tau);
    let modulus = g.norm();
    if modulus < 1e-300 || !modulus.is_finite() {
        return Err(Error::DegenerateSeed { tau, modulus });
    }
    Ok(g)
}

/// `Q(τ) = (1 - i f0 τ / (2 g(τ)))² Ξ² τ²`.
///
/// The gauge angle drops out of `Q` entirely.
pub fn q_function(seed: &SeedCoefficients, field: FieldParams, tau: f64) -> Result<Complex64> {
    let g = checked_g(seed, tau)?;
    let inner = Complex64::new(1.0, 0.0) - I * seed.f0 * tau / (2.0 * g);
    Ok(inner * inner * (field.big_xi * tau).powi(2))
}

/// `∫₀^τ Re Q(s)/2 ds` by adaptive Gauss–Legendre quadrature.
///
/// The lower limit is pinned at 0 so the wavefunction phase is
/// deterministic. Negative `τ` gives the oriented integral.
pub fn phase_integral(seed: &SeedCoefficients, field: FieldParams, tau: f64) -> Result<f64> {
    if field.big_xi == 0.0 || tau == 0.0 {
        return Ok(0.0);
    }
    checked_g(seed, tau)?;
    let integrand = |s: f64| q_function(seed, field, s).map(|q| 0.5 * q.re).unwrap_or(f64::NAN);
    let result = quadrature::integrate(integrand, 0.0, tau, Tolerance::default())?;
    if !result.value.is_finite() {
        return Err(Error::DegenerateSeed {
            tau,
            modulus: seed.g(tau).norm(),
        });
    }
    Ok(result.value)
}
