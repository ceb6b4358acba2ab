//! Physical setup, unit conversions, classical motion and the
//! integral-of-motion coefficients.

mod coefficients;
mod setup;

pub use coefficients::{
    coefficient_functions, phase_integral, q_function, Coefficients, FieldParams, SeedCoefficients, SEED_CONSTRAINT_TOL,
};
pub use setup::{si, DerivedScales, PhysicalSetup};
