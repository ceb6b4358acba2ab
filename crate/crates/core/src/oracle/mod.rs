//! Independent numerical checks: a split-step propagator, sampled
//! moments, the Schrödinger residual of closed-form states.

mod grid;
mod moments;
mod propagate;
mod residual;

pub use grid::{l2_distance, verification_grid, SpatialGrid, WavefunctionSample, MIN_POINTS, NORM_TOL};
pub use moments::quadrature_moments;
pub use propagate::{propagate, Propagation, PropagationWarning, ADVISED_MAX_DT, EDGE_LEAKAGE_LIMIT};
pub use residual::{
    residual_convergence, schrodinger_residual, schrodinger_residual_with, PhaseVariant, ResidualConvergence, MAX_STEP,
    MIN_STEP,
};
