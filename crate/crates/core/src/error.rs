use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("seed violates Re(f0 g0*) = 1 (got {re_product})")]
    SeedConstraint { re_product: f64 },

    #[error("degenerate seed: |g(tau)| = {modulus:e} at tau = {tau}")]
    DegenerateSeed { tau: f64, modulus: f64 },

    #[error("quadrature did not converge: error estimate {estimate:e} > tolerance {tolerance:e}")]
    QuadratureNonConvergence { estimate: f64, tolerance: f64 },

    #[error("Heisenberg bound violated: sigma product {product:e} < {bound:e}")]
    HeisenbergViolation { product: f64, bound: f64 },

    #[error("state is not minimal: sigma product {product:e} != {bound:e}")]
    NotMinimal { product: f64, bound: f64 },

    #[error("ratio R(t) undefined: no displacement (X = 0 and W = 0)")]
    UndefinedRatio,

    #[error("wrong field regime: {0}")]
    FieldRegime(&'static str),

    #[error("decelerating configuration (xi * p_z < 0) is not supported")]
    DeceleratingField,

    #[error("no sign change of R - threshold on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("non-finite function value at t = {t}")]
    NonFinite { t: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),

    #[error("samples are on different grids or times")]
    GridMismatch,

    #[error("edge leakage at tau = {tau}: edge/peak density ratio {ratio:e}")]
    EdgeLeakage { tau: f64, ratio: f64 },

    #[error("sample not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("finite-difference step {h:e} outside [{min:e}, {max:e}]")]
    StepOutOfRange { h: f64, min: f64, max: f64 },
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}
