//! Error type shared by all photonlink operations.

use std::fmt;

/// Validation and numerical-precondition failures.
///
/// Every failure carries enough context to fix the call site: grid
/// resolutions report the required spacing, window errors report the
/// required extent.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A frequency grid does not cover the requested band.
    GridTooNarrow {
        /// Half-width the grid must reach (rad/time).
        required_half_span: f64,
        /// Half-width the grid actually covers (rad/time).
        actual_half_span: f64,
    },
    /// Two sampled quantities live on different grids.
    GridMismatch {
        context: &'static str,
    },
    /// Grid spacing is too coarse to resolve the finest feature present.
    UnderResolved {
        /// Maximum admissible spacing (rad/time).
        required_spacing: f64,
        actual_spacing: f64,
    },
    /// A time grid does not extend far enough into the past.
    WindowTooShort {
        /// Latest admissible start time.
        required_start: f64,
        actual_start: f64,
    },
    /// Time step too coarse for the decay rate being integrated.
    TimeStepTooCoarse {
        required_dt: f64,
        actual_dt: f64,
    },
    /// An operation that requires a normalized temporal mode received a raw one.
    NotNormalized,
    /// A mode with vanishing norm cannot be normalized.
    ZeroNorm,
    /// The closed-form encoded mode and the term-wise coded overlap
    /// require an odd code length; use the transform path instead.
    EvenCodeLength {
        n0: usize,
    },
    /// Catch-all for parameter-range violations.
    InvalidParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GridTooNarrow {
                required_half_span,
                actual_half_span,
            } => write!(
                f,
                "frequency grid too narrow: must span at least +/-{required_half_span:.6e}, \
                 covers +/-{actual_half_span:.6e}"
            ),
            Error::GridMismatch { context } => {
                write!(f, "grid mismatch: {context}")
            }
            Error::UnderResolved {
                required_spacing,
                actual_spacing,
            } => write!(
                f,
                "grid under-resolved: spacing must be <= {required_spacing:.6e}, \
                 got {actual_spacing:.6e}"
            ),
            Error::WindowTooShort {
                required_start,
                actual_start,
            } => write!(
                f,
                "time window too short: must start at or before {required_start:.6e}, \
                 starts at {actual_start:.6e}"
            ),
            Error::TimeStepTooCoarse {
                required_dt,
                actual_dt,
            } => write!(
                f,
                "time step too coarse: dt must be <= {required_dt:.6e}, got {actual_dt:.6e}"
            ),
            Error::NotNormalized => {
                write!(f, "temporal mode must be normalized before use")
            }
            Error::ZeroNorm => write!(f, "mode has zero norm"),
            Error::EvenCodeLength { n0 } => write!(
                f,
                "code length N0 = {n0} is even; the closed form indexes n = -N..N \
                 and requires odd N0 (use the transform path)"
            ),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
