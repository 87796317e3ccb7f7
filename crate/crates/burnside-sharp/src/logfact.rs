//! log n! to better than 25 significant digits for 1 <= n <= 10^9.
//!
//! Two regimes: exact summation of log k for small n, and the
//! Stirling–De Moivre asymptotic series for large n. The regimes overlap
//! on [10^5, 2·10^6] so the seam is a continuously tested cross-check
//! rather than a trusted handoff.

use std::sync::OnceLock;

use crate::error::Error;
use crate::extprec::{CompensatedSum, ExtReal, HALF_LN_TWO_PI};

/// Upper end of the exact-summation regime.
pub const N_EXACT_MAX: u64 = 2_000_000;
/// Lower end of the asymptotic-series regime.
pub const N_SERIES_MIN: u64 = 100_000;
/// The dispatcher switches regimes above this n.
pub const REGIME_SPLIT: u64 = 1_000_000;

/// Which evaluation path produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    ExactSum,
    AsymptoticSeries,
}

/// log n! together with its provenance.
#[derive(Clone, Copy, Debug)]
pub struct LogFactorial {
    pub n: u64,
    pub value: ExtReal,
    pub regime: Regime,
}

impl LogFactorial {
    /// Evaluates log n! through the regime dispatcher.
    pub fn new(n: u64) -> LogFactorial {
        let (value, regime) = if n <= REGIME_SPLIT {
            (
                log_factorial_exact(n).expect("split is below the exact cap"),
                Regime::ExactSum,
            )
        } else {
            (
                log_factorial_series(n).expect("split is above the series floor"),
                Regime::AsymptoticSeries,
            )
        };
        LogFactorial { n, value, regime }
    }
}

/// log n! = sum of log k for k = 2..=n, accumulated in a compensated sum.
///
/// Absolute error stays below 1e-23 over the whole regime (per-term log
/// error times n, plus the accumulator's own O(n u^2) cascade error).
pub fn log_factorial_exact(n: u64) -> Result<ExtReal, Error> {
    if n > N_EXACT_MAX {
        return Err(Error::RegimeRange {
            n,
            regime: "exact summation",
            min: 0,
            max: N_EXACT_MAX,
        });
    }
    let mut acc = CompensatedSum::new();
    for k in 2..=n {
        acc.add(ln_u64(k));
    }
    Ok(acc.value())
}

/// log n! by the Stirling–De Moivre series,
/// n log n − n + ½ log(2 pi n) + 1/(12n) − 1/(360n³) + 1/(1260n⁵)
/// − 1/(1680n⁷) + 1/(1188n⁹).
///
/// The first omitted term is 691/(360360 n^11) < 1e-58 at the regime
/// floor, far beneath double-word resolution.
pub fn log_factorial_series(n: u64) -> Result<ExtReal, Error> {
    if n < N_SERIES_MIN {
        return Err(Error::RegimeRange {
            n,
            regime: "asymptotic series",
            min: N_SERIES_MIN,
            max: u64::MAX,
        });
    }
    Ok(series_partial(n, 5))
}

/// The series with only `terms` Bernoulli corrections (0..=5). Separated
/// out so tests can check the bracketing property of each partial sum.
fn series_partial(n: u64, terms: usize) -> ExtReal {
    let x = ExtReal::from_u64(n);
    let ln_x = x.ln().expect("n is positive");
    // n log n − n + ½ log(2 pi n) = (n + ½) log n − n + ½ log(2 pi)
    let lead = (x + ExtReal::HALF) * ln_x - x + HALF_LN_TWO_PI;
    if terms == 0 {
        return lead;
    }
    let c = bernoulli_terms();
    let r = ExtReal::ONE / (x * x);
    let mut tail = c[terms - 1];
    for k in (0..terms - 1).rev() {
        tail = tail * r + c[k];
    }
    lead + tail / x
}

/// Coefficients of n^-1, n^-3, ..., n^-9 in the series, i.e.
/// B_2k / ((2k−1)(2k)), built once from exact integer ratios.
fn bernoulli_terms() -> &'static [ExtReal; 5] {
    static TABLE: OnceLock<[ExtReal; 5]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let term = |num: i64, den: u64| {
            let t = ExtReal::from_u64(num.unsigned_abs()) / ExtReal::from_u64(den);
            if num < 0 {
                -t
            } else {
                t
            }
        };
        [
            term(1, 12),
            term(-1, 360),
            term(1, 1260),
            term(-1, 1680),
            term(1, 1188),
        ]
    })
}

/// Dispatcher: exact summation through [`REGIME_SPLIT`], series above.
/// Total for any u64 n; the regimes cover the line with overlap.
pub fn log_factorial(n: u64) -> ExtReal {
    LogFactorial::new(n).value
}

#[inline]
fn ln_u64(k: u64) -> ExtReal {
    ExtReal::from_u64(k).ln().expect("positive integer")
}

/// Streaming log-factorials (n, log n!) for n = start, start+1, ... up to
/// [`N_EXACT_MAX`], maintained as a running compensated sum: O(1) work per
/// step instead of O(n) per from-scratch call.
#[derive(Debug)]
pub struct LogFactSweep {
    next_n: u64,
    acc: CompensatedSum,
}

impl LogFactSweep {
    /// Sweep beginning at n = 1.
    pub fn new() -> LogFactSweep {
        LogFactSweep {
            next_n: 1,
            acc: CompensatedSum::new(),
        }
    }

    /// Sweep whose first yielded pair is (start, log start!).
    pub fn starting_at(start: u64) -> Result<LogFactSweep, Error> {
        if !(1..=N_EXACT_MAX).contains(&start) {
            return Err(Error::RegimeRange {
                n: start,
                regime: "incremental sweep",
                min: 1,
                max: N_EXACT_MAX,
            });
        }
        let mut sweep = LogFactSweep::new();
        for k in 2..=start.saturating_sub(1) {
            sweep.acc.add(ln_u64(k));
        }
        sweep.next_n = start;
        Ok(sweep)
    }
}

impl Default for LogFactSweep {
    fn default() -> LogFactSweep {
        LogFactSweep::new()
    }
}

impl Iterator for LogFactSweep {
    type Item = (u64, ExtReal);

    fn next(&mut self) -> Option<(u64, ExtReal)> {
        let n = self.next_n;
        if n > N_EXACT_MAX {
            return None;
        }
        if n >= 2 {
            self.acc.add(ln_u64(n));
        }
        self.next_n = n + 1;
        Some((n, self.acc.value()))
    }
}
