//! Physical constants of the particle and field, unit conversion to the
//! dimensionless variables, and the classical trajectories.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{ensure_finite, ensure_positive, Error, Result};

/// CODATA 2018 values, SI units.
pub mod si {
    pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
    pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
    pub const HBAR: f64 = 1.054_571_817e-34;
}

/// Particle and field constants.
///
/// The charge is signed (an electron has `e < 0`), so `xi` and `big_xi`
/// carry the sign of the force. The potentials follow the one-parameter
/// mixed gauge `A0(z) = -z E sin²α`, `A(t) = -c t E cos²α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalSetup {
    mass: f64,
    charge: f64,
    light_speed: f64,
    hbar: f64,
    field: f64,
    alpha: f64,
    length_scale: f64,
}

/// Alternative unit scales derived from a [`PhysicalSetup`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScales {
    /// Reduced Compton wavelength ħ/(mc).
    pub compton: f64,
    /// Critical field m²c³/(|e|ħ).
    pub critical_field: f64,
}

impl PhysicalSetup {
    pub fn new(
        mass: f64,
        charge: f64,
        light_speed: f64,
        hbar: f64,
        field: f64,
        alpha: f64,
        length_scale: f64,
    ) -> Result<Self> {
        ensure_positive("mass", mass)?;
        ensure_finite("charge", charge)?;
        if charge == 0.0 {
            return Err(Error::InvalidParameter {
                name: "charge",
                value: charge,
                reason: "must be nonzero",
            });
        }
        ensure_positive("light_speed", light_speed)?;
        ensure_positive("hbar", hbar)?;
        ensure_finite("field", field)?;
        if field < 0.0 {
            return Err(Error::InvalidParameter {
                name: "field",
                value: field,
                reason: "field amplitude must be >= 0",
            });
        }
        if !(0.0..=FRAC_PI_2).contains(&alpha) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "gauge angle must lie in [0, pi/2]",
            });
        }
        ensure_positive("length_scale", length_scale)?;
        Ok(Self {
            mass,
            charge,
            light_speed,
            hbar,
            field,
            alpha,
            length_scale,
        })
    }

    /// Units where ħ = m = c = |e| = 1 (positive charge).
    pub fn natural(field: f64, alpha: f64, length_scale: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, 1.0, field, alpha, length_scale)
    }

    /// An electron in SI units.
    pub fn electron_si(field: f64, alpha: f64, length_scale: f64) -> Result<Self> {
        Self::new(
            si::ELECTRON_MASS,
            -si::ELEMENTARY_CHARGE,
            si::SPEED_OF_LIGHT,
            si::HBAR,
            field,
            alpha,
            length_scale,
        )
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn light_speed(&self) -> f64 {
        self.light_speed
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn length_scale(&self) -> f64 {
        self.length_scale
    }

    pub fn with_field(&self, field: f64) -> Result<Self> {
        Self::new(
            self.mass,
            self.charge,
            self.light_speed,
            self.hbar,
            field,
            self.alpha,
            self.length_scale,
        )
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(
            self.mass,
            self.charge,
            self.light_speed,
            self.hbar,
            self.field,
            alpha,
            self.length_scale,
        )
    }

    /// Signed acceleration ξ = eE/m.
    pub fn xi(&self) -> f64 {
        self.charge * self.field / self.mass
    }

    /// Dimensionless field Ξ = m² l³ ξ / ħ².
    pub fn big_xi(&self) -> f64 {
        self.mass * self.mass * self.length_scale.powi(3) * self.xi() / (self.hbar * self.hbar)
    }

    /// Scalar potential A0(z) = -z E sin²α.
    pub fn scalar_potential(&self, z: f64) -> f64 {
        -z * self.field * self.alpha.sin().powi(2)
    }

    /// Vector potential A(t) = -c t E cos²α.
    pub fn vector_potential(&self, t: f64) -> f64 {
        -self.light_speed * t * self.field * self.alpha.cos().powi(2)
    }

    pub fn scales(&self) -> DerivedScales {
        DerivedScales {
            compton: self.hbar / (self.mass * self.light_speed),
            critical_field: self.mass * self.mass * self.light_speed.powi(3) / (self.charge.abs() * self.hbar),
        }
    }

    /// de Broglie wavelength 2πħ/p_z; `None` for p_z = 0.
    pub fn de_broglie(&self, p_z: f64) -> Option<f64> {
        (p_z != 0.0).then(|| 2.0 * PI * self.hbar / p_z.abs())
    }

    /// Maps (z, p_z, t) to (q, p, τ).
    pub fn to_dimensionless(&self, z: f64, p_z: f64, t: f64) -> (f64, f64, f64) {
        let l = self.length_scale;
        (z / l, l * p_z / self.hbar, self.hbar * t / (self.mass * l * l))
    }

    /// Inverse of [`PhysicalSetup::to_dimensionless`].
    pub fn from_dimensionless(&self, q: f64, p: f64, tau: f64) -> (f64, f64, f64) {
        let l = self.length_scale;
        (q * l, self.hbar * p / l, self.mass * l * l * tau / self.hbar)
    }

    pub fn time_to_tau(&self, t: f64) -> f64 {
        self.hbar * t / (self.mass * self.length_scale * self.length_scale)
    }

    pub fn tau_to_time(&self, tau: f64) -> f64 {
        self.mass * self.length_scale * self.length_scale * tau / self.hbar
    }

    /// Solution of Hamilton's equations from (z0, p0) at time t.
    pub fn classical_trajectory(&self, z0: f64, p0: f64, t: f64) -> (f64, f64) {
        let xi = self.xi();
        let z = z0 + p0 / self.mass * t + 0.5 * xi * t * t;
        let p = p0 + self.mass * xi * t * self.alpha.sin().powi(2);
        (z, p)
    }
}
