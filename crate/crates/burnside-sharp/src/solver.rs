//! Root finding for the shift sequence a_n and the sharp constant a*.
//!
//! a_n is the unique root in (0, 1/2) of
//! g(a; n) = log f(a, n) − log n!, which is strictly increasing in a with
//! g'(a) = log(n + a). a* satisfies the scalar equation
//! h(a) = (a + 1) − (a + 1) log(a + 1) − ½ log(2 pi) = 0, which is the
//! n = 1 case of g rearranged (h is decreasing where g is increasing).
//!
//! Method: Newton iteration safeguarded by a maintained sign bracket.
//! Any Newton step that leaves the current bracket is replaced by the
//! bracket midpoint, so convergence never depends on the seed.

use std::sync::OnceLock;

use crate::error::Error;
use crate::extprec::{ExtReal, HALF_LN_TWO_PI};
use crate::logfact::log_factorial;

/// Resolution floor for the root tolerance: below this, cancellation in
/// g leaves no usable signal. Smaller requests are clamped here.
pub const TOL_FLOOR: f64 = 1e-25;

/// Iteration budget; bisection alone crosses [0, 1/2] down to the floor
/// in about 82 halvings, Newton needs far fewer.
const MAX_ITER: u32 = 80;

/// Outcome of a root solve.
#[derive(Clone, Copy, Debug)]
pub struct RootResult {
    /// The root; always inside [0, 1/2].
    pub value: ExtReal,
    /// Defining function evaluated at `value`.
    pub residual: ExtReal,
    /// Total function evaluations spent.
    pub iterations: u32,
    /// Width of the final enclosing interval.
    pub bracket_width: ExtReal,
    /// True iff `bracket_width <= tol_a` and `|residual| <= tol_res`.
    pub converged: bool,
    /// Accepted Newton steps.
    pub newton_steps: u32,
    /// Safeguard bisection steps.
    pub bisection_steps: u32,
}

/// g(a; n) = log f(a, n) − log n!. Strictly increasing in a.
pub fn residual_g(a: ExtReal, n: u64) -> Result<ExtReal, Error> {
    if n == 0 {
        return Err(Error::Domain {
            what: "residual g needs n >= 1",
        });
    }
    if a.is_negative() || a > ExtReal::ONE {
        return Err(Error::Domain {
            what: "residual g needs a in [0, 1]",
        });
    }
    Ok(eval_g(a, ExtReal::from_u64(n), log_factorial(n)).0)
}

/// One evaluation of (g, g') sharing the single log it needs.
#[inline]
fn eval_g(a: ExtReal, n: ExtReal, log_fact: ExtReal) -> (ExtReal, ExtReal) {
    let s = n + a;
    let ln_s = s.ln().expect("n + a > 0");
    (HALF_LN_TWO_PI + s * (ln_s - ExtReal::ONE) - log_fact, ln_s)
}

/// Newton seed: Burnside's log-error behaves like 1/(24n), which places
/// the root near 1/2 − 1/(24 n log(n+1)). A performance hint only; the
/// bracket carries correctness.
fn newton_seed(n: u64) -> f64 {
    0.5 - 1.0 / (24.0 * n as f64 * ((n + 1) as f64).ln())
}

/// Solves g(a; n) = 0 for a_n in (0, 1/2).
pub fn solve_a_n(n: u64, tol_a: ExtReal) -> Result<RootResult, Error> {
    if n == 0 {
        return Err(Error::Domain {
            what: "a_n is defined for n >= 1",
        });
    }
    solve_a_n_with(n, log_factorial(n), tol_a)
}

/// Sweep variant taking a precomputed log n!, so n consecutive solves can
/// share one incremental factorial sweep.
pub(crate) fn solve_a_n_with(
    n: u64,
    log_fact: ExtReal,
    tol_a: ExtReal,
) -> Result<RootResult, Error> {
    debug_assert!(n >= 1);
    let nx = ExtReal::from_u64(n);
    bracketed_newton(
        |a| eval_g(a, nx, log_fact),
        newton_seed(n),
        clamp_tol(tol_a),
        ((n + 1) as f64).ln(),
    )
}

/// Solves h(a) = (a + 1) − (a + 1) log(a + 1) − ½ log(2 pi) = 0.
///
/// h is decreasing, so the engine works on −h (increasing, like g); the
/// reported residual is h itself.
pub fn solve_a_star(tol_a: ExtReal) -> Result<RootResult, Error> {
    let eval = |a: ExtReal| {
        let ap1 = a + ExtReal::ONE;
        let ln_ap1 = ap1.ln().expect("a + 1 > 0");
        let h = ap1 - ap1 * ln_ap1 - HALF_LN_TWO_PI;
        (-h, ln_ap1)
    };
    let mut result = bracketed_newton(eval, newton_seed(1), clamp_tol(tol_a), 2f64.ln())?;
    result.residual = -result.residual;
    Ok(result)
}

/// The sharp constant a*, solved once at the tolerance floor and cached.
/// Never a stored literal: every downstream digit is self-consistent
/// with the local arithmetic kernel.
pub fn a_star() -> ExtReal {
    static CACHE: OnceLock<ExtReal> = OnceLock::new();
    *CACHE.get_or_init(|| {
        let result =
            solve_a_star(ExtReal::from(TOL_FLOOR)).expect("the bracket [0, 1/2] is sign-valid");
        debug_assert!(result.converged);
        result.value
    })
}

fn clamp_tol(tol_a: ExtReal) -> ExtReal {
    if tol_a < ExtReal::from(TOL_FLOOR) {
        ExtReal::from(TOL_FLOOR)
    } else {
        tol_a
    }
}

/// Safeguarded Newton on an increasing function with a sign change over
/// [0, 1/2]. `eval` returns (f, f'). Maintains lo, hi with
/// f(lo) < 0 < f(hi) at every step; converges when the bracket is
/// narrower than `tol_a`.
fn bracketed_newton<E>(
    eval: E,
    seed: f64,
    tol_a: ExtReal,
    res_scale: f64,
) -> Result<RootResult, Error>
where
    E: Fn(ExtReal) -> (ExtReal, ExtReal),
{
    let mut lo = ExtReal::ZERO;
    let mut hi = ExtReal::HALF;
    let f_lo = eval(lo).0;
    let f_hi = eval(hi).0;
    if !(f_lo.is_negative() && f_hi > ExtReal::ZERO) {
        return Err(Error::Domain {
            what: "no sign change over [0, 1/2]",
        });
    }
    let mut iterations = 2u32;
    let mut newton_steps = 0u32;
    let mut bisection_steps = 0u32;
    let half_tol = tol_a.mul_f64(0.5);
    let mut x = ExtReal::from(seed.clamp(1e-3, 0.5 - 1e-3));
    for _ in 0..MAX_ITER {
        let (fx, dfx) = eval(x);
        iterations += 1;
        if fx.is_negative() {
            lo = x;
        } else {
            hi = x;
        }
        let width = hi - lo;
        if width <= tol_a {
            let value = (lo + hi).mul_f64(0.5);
            let residual = eval(value).0;
            iterations += 1;
            let converged = residual.abs().to_f64() <= tol_a.to_f64() * res_scale;
            return Ok(RootResult {
                value,
                residual,
                iterations,
                bracket_width: width,
                converged,
                newton_steps,
                bisection_steps,
            });
        }
        let step = fx / dfx;
        let mut next = x - step;
        // Newton alone only drives one bracket end. Once steps are below
        // tol/2, deliberately overshoot the predicted root by tol/2 so
        // the opposite end moves too and the width test can fire.
        if step.abs() < half_tol {
            next = if fx.is_negative() {
                next + half_tol
            } else {
                next - half_tol
            };
        }
        if next > lo && next < hi {
            newton_steps += 1;
        } else {
            next = (lo + hi).mul_f64(0.5);
            bisection_steps += 1;
        }
        x = next;
    }
    Err(Error::NoConvergence {
        iterations,
        lo: lo.to_f64(),
        hi: hi.to_f64(),
        residual: eval((lo + hi).mul_f64(0.5)).0.to_f64(),
    })
}
