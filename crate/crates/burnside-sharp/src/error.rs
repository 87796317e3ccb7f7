//! Error type shared across the crate.

use std::fmt;
use std::io;

/// Everything that can go wrong outside of programmer error.
///
/// Overflow inside the extended-precision arithmetic itself (a sum or
/// product leaving the finite `f64` range) is treated as a contract
/// violation and panics; the variants here are for conditions a caller
/// can plausibly hit with well-formed but out-of-domain input.
#[derive(Debug)]
pub enum Error {
    /// A component passed to a constructor was NaN or infinite.
    NotFinite { what: &'static str, value: f64 },
    /// `exp` argument outside the supported range.
    ExpRange { x: f64, limit: f64 },
    /// `log` of a non-positive value.
    LogDomain { x: f64 },
    /// Argument outside a function's documented domain.
    Domain { what: &'static str },
    /// The `n = 0`, `a = 0` corner where `log f` is singular.
    SingularCorner,
    /// A factorial regime was asked to operate outside its validated range.
    RegimeRange {
        n: u64,
        regime: &'static str,
        min: u64,
        max: u64,
    },
    /// A sweep request exceeds the configured ceiling.
    RangeTooLarge { requested: u64, ceiling: u64 },
    /// An empty or inverted sweep range.
    EmptyRange { from: u64, to: u64 },
    /// Root finder exhausted its iteration budget. The bracket at the time
    /// of failure is included so the caller can see how far it got.
    NoConvergence {
        iterations: u32,
        lo: f64,
        hi: f64,
        residual: f64,
    },
    /// A decimal string could not be parsed as an extended-precision value.
    ParseDecimal { input: String },
    /// Output could not be written.
    Io(io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotFinite { what, value } => {
                write!(f, "{what} must be finite, got {value}")
            }
            Error::ExpRange { x, limit } => {
                write!(
                    f,
                    "exp argument {x} outside supported range [-{limit}, {limit}]"
                )
            }
            Error::LogDomain { x } => write!(f, "log domain error: argument {x} is not positive"),
            Error::Domain { what } => write!(f, "domain error: {what}"),
            Error::SingularCorner => {
                write!(f, "log f(a, n) is singular at a = 0, n = 0")
            }
            Error::RegimeRange {
                n,
                regime,
                min,
                max,
            } => {
                write!(
                    f,
                    "n = {n} outside validated range [{min}, {max}] of {regime} regime"
                )
            }
            Error::RangeTooLarge { requested, ceiling } => {
                write!(f, "requested n = {requested} exceeds ceiling {ceiling}")
            }
            Error::EmptyRange { from, to } => {
                write!(f, "invalid range [{from}, {to}]: need 1 <= from <= to")
            }
            Error::NoConvergence {
                iterations,
                lo,
                hi,
                residual,
            } => write!(
                f,
                "root finder did not converge after {iterations} iterations; \
                 bracket [{lo}, {hi}], residual {residual:e}"
            ),
            Error::ParseDecimal { input } => {
                write!(f, "cannot parse {input:?} as a decimal number")
            }
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(e: io::Error) -> Self {
        Error::Io(e)
    }
}
