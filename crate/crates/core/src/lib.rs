//! Generalized coherent states of a nonrelativistic charged particle in a
//! constant uniform electric field.
//!
//! * [`dynamics`]: physical setup, units, classical trajectories and the
//!   coefficients of the linear integral of motion.
//! * [`states`]: wavefunctions, densities, moments and uncertainty relations.
//! * [`classifier`]: spread-to-displacement ratio and the semiclassical
//!   regime decision tree with its critical and reference times.
//! * [`oracle`]: split-step Schrödinger propagation and grid quadratures used
//!   to check every closed form independently.

pub mod classifier;
pub mod dynamics;
mod error;
pub mod oracle;
pub mod quadrature;
pub mod roots;
pub mod states;

pub use error::{Error, Result};
