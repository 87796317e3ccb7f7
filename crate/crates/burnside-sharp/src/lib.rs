//! Sharp Burnside-type bounds on the factorial, verified in extended
//! precision.
//!
//! For every positive integer n,
//!
//! ```text
//! sqrt(2 pi) ((n + a*) / e)^(n + a*)  <  n!  <  sqrt(2 pi) ((n + 1/2) / e)^(n + 1/2)
//! ```
//!
//! where a* = 0.42884... is the unique root of
//! (a + 1) - (a + 1) log(a + 1) = log sqrt(2 pi), and both constants are
//! best possible. This crate computes a*, the per-n sharp shifts a_n, and
//! machine-checks the bounds and their limit behaviour over large ranges,
//! all in double-word (~31 digit) arithmetic.
//!
//! Module map:
//!
//! - [`extprec`]: double-word arithmetic kernel (add/mul/exp/log).
//! - [`logfact`]: log n! by exact summation and by asymptotic series.
//! - [`approx`]: the approximation family log f(a, n) and named members.
//! - [`solver`]: safeguarded Newton for a_n and the sharp constant a*.
//! - [`verify`]: bound sweeps, monotonicity, limit diagnostics, accuracy.
//! - [`cli`]: the `burnside-sharp` command-line interface.
//!
//! ```
//! use burnside_sharp::{solver, verify, ExtReal};
//!
//! let a1 = solver::solve_a_n(1, ExtReal::from(1e-25))?.value;
//! assert_eq!(a1.to_fraction_trunc(9), "0.428844044");
//!
//! for row in verify::verify_bounds(1, 100)? {
//!     assert_eq!(row.status, verify::BoundStatus::StrictPass);
//! }
//! # Ok::<(), burnside_sharp::Error>(())
//! ```

pub mod approx;
pub mod cli;
pub mod error;
pub mod extprec;
pub mod logfact;
pub mod solver;
pub mod verify;

pub use error::Error;
pub use extprec::ExtReal;
