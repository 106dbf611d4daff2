use thiserror::Error;

use crate::generator::Generator;
use crate::ring::CoefficientRing;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coefficient ring mismatch: {0} vs {1}")]
    RingMismatch(CoefficientRing, CoefficientRing),

    #[error("coefficient {coeff} is not an element of {ring}")]
    NotInRing { coeff: String, ring: CoefficientRing },

    #[error("generator {0} is not legal here: {1}")]
    IllegalGenerator(Generator, String),

    #[error("index {0} is not allowed: {1}")]
    BadIndex(String, String),

    #[error("unsupported sphere dimension n = {0}: {1}")]
    UnsupportedDimension(u32, String),

    #[error("cannot parse {0:?}: {1}")]
    Parse(String, String),

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("constraint drift {drift:.3e} exceeds tolerance at step {step}")]
    ConstraintDrift { step: usize, drift: f64 },

    #[error("shooting did not converge after {iterations} iterations (best residual {best_residual:.3e})")]
    NoConvergence { iterations: usize, best_residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
