//! The approximation family f(a, n) = sqrt(2 pi) ((n + a)/e)^(n + a) in
//! log space, its named members, and signed relative errors against n!.
//!
//! Everything is compared in log space: the inequalities under test are
//! order-preserved by log, and the linear-domain values overflow native
//! floats already at n = 171.

use crate::error::Error;
use crate::extprec::{ExtReal, HALF_LN_TWO_PI};
use crate::logfact::log_factorial;
use crate::solver;

/// A named member of the family, or an arbitrary shift.
#[derive(Clone, Copy, Debug)]
pub enum ApproxKind {
    /// n^n e^-n sqrt(2 pi n).
    Stirling,
    /// f(1/2), Burnside's approximation.
    Burnside,
    /// f(a*), the sharp lower bound; a* is taken from the solver cache,
    /// never from a hardcoded truncation.
    SharpLower,
    /// f(1/2), the sharp upper bound.
    SharpUpper,
    /// f(a) for a caller-chosen shift a >= 0.
    Generalized(ExtReal),
}

/// log f(a, n) = ½ log(2 pi) + (n + a)(log(n + a) − 1).
///
/// Strictly increasing in a for fixed n (f'(x) = f(x) log(x + n) > 0).
pub fn log_f(a: ExtReal, n: u64) -> Result<ExtReal, Error> {
    if a.is_negative() {
        return Err(Error::Domain {
            what: "shift a must be nonnegative",
        });
    }
    if n == 0 && a.is_zero() {
        return Err(Error::SingularCorner);
    }
    let s = ExtReal::from_u64(n) + a;
    let ln_s = s.ln().expect("n + a > 0");
    Ok(HALF_LN_TWO_PI + s * (ln_s - ExtReal::ONE))
}

/// log of Stirling's approximation, n log n − n + ½ log(2 pi n).
pub fn log_stirling(n: u64) -> Result<ExtReal, Error> {
    if n == 0 {
        return Err(Error::Domain {
            what: "Stirling's formula needs n >= 1",
        });
    }
    let x = ExtReal::from_u64(n);
    let ln_x = x.ln().expect("n > 0");
    Ok((x + ExtReal::HALF) * ln_x - x + HALF_LN_TWO_PI)
}

/// log of Burnside's approximation, log f(1/2, n).
pub fn log_burnside(n: u64) -> Result<ExtReal, Error> {
    log_f(ExtReal::HALF, n)
}

/// log of the sharp lower bound, log f(a*, n).
pub fn log_sharp_lower(n: u64) -> Result<ExtReal, Error> {
    log_f(solver::a_star(), n)
}

/// log of the sharp upper bound, log f(1/2, n).
pub fn log_sharp_upper(n: u64) -> Result<ExtReal, Error> {
    log_f(ExtReal::HALF, n)
}

/// Dispatch by kind.
pub fn log_approx(kind: ApproxKind, n: u64) -> Result<ExtReal, Error> {
    match kind {
        ApproxKind::Stirling => log_stirling(n),
        ApproxKind::Burnside => log_burnside(n),
        ApproxKind::SharpLower => log_sharp_lower(n),
        ApproxKind::SharpUpper => log_sharp_upper(n),
        ApproxKind::Generalized(a) => {
            if n == 0 {
                return Err(Error::Domain {
                    what: "approximations need n >= 1",
                });
            }
            log_f(a, n)
        }
    }
}

/// Signed relative error (approx − n!)/n! in the linear domain, computed
/// as expm1(log approx − log n!) so no linear-domain overflow occurs.
pub fn signed_rel_error(kind: ApproxKind, n: u64) -> Result<ExtReal, Error> {
    signed_rel_error_with(kind, n, log_factorial(n))
}

/// Sweep variant taking a precomputed log n!.
pub(crate) fn signed_rel_error_with(
    kind: ApproxKind,
    n: u64,
    log_fact: ExtReal,
) -> Result<ExtReal, Error> {
    let gap = log_approx(kind, n)? - log_fact;
    gap.expm1()
}
