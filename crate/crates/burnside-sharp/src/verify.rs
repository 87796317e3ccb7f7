//! Machine checks for every claim: the sharp sandwich, sequence
//! monotonicity, the limit chain diagnostics, and the accuracy
//! comparison against Stirling.
//!
//! Sweeps stream their rows (constant memory for the 10^6 range) and ride
//! one incremental log-factorial sweep, so a full pass is O(n) total.

use std::env;

use crate::approx::{self, ApproxKind};
use crate::error::Error;
use crate::extprec::ExtReal;
use crate::logfact::LogFactSweep;
use crate::solver::{self, TOL_FLOOR};

/// Hard ceiling for bound and accuracy sweeps.
pub const SWEEP_CEILING: u64 = 1_000_000;
/// Hard ceiling for the monotonicity check (each n costs a solve).
pub const MONOTONE_CEILING: u64 = 10_000;
/// Hard ceiling for individual limit-diagnostic points.
pub const LIMIT_CEILING: u64 = 1_000_000_000;

/// Environment variable that may lower (never raise) the sweep ceilings,
/// e.g. for quick CI runs.
pub const MAX_N_ENV: &str = "BURNSIDE_SHARP_MAX_N";

fn effective_ceiling(hard: u64) -> u64 {
    match env::var(MAX_N_ENV).ok().and_then(|v| v.parse::<u64>().ok()) {
        Some(limit) => hard.min(limit),
        None => hard,
    }
}

/// Sweep ceiling currently in force (hard cap, possibly lowered by the
/// environment).
pub fn sweep_ceiling() -> u64 {
    effective_ceiling(SWEEP_CEILING)
}

/// Worst-case absolute error of one bound comparison at n: covers the
/// accumulated log-factorial error plus both bound evaluations, with
/// slack. Deliberately generous; margins are compared against ten times
/// this.
pub fn error_budget(n: u64) -> f64 {
    let m = (n + 1) as f64;
    2f64.powi(-100) * m * (m.ln() + 1.0)
}

/// Verdict for one n of the bound sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundStatus {
    /// Both margins exceed 10x the error budget.
    StrictPass,
    /// A margin is inside the numerical noise band; not a refutation.
    Indeterminate,
    /// A margin is negative beyond the noise band.
    Fail,
}

impl BoundStatus {
    pub fn label(self) -> &'static str {
        match self {
            BoundStatus::StrictPass => "StrictPass",
            BoundStatus::Indeterminate => "Indeterminate",
            BoundStatus::Fail => "Fail",
        }
    }
}

/// One row of the Theorem 1 sweep.
#[derive(Clone, Copy, Debug)]
pub struct BoundReport {
    pub n: u64,
    pub log_lower: ExtReal,
    pub log_fact: ExtReal,
    pub log_upper: ExtReal,
    /// log_fact − log_lower.
    pub lower_margin: ExtReal,
    /// log_upper − log_fact.
    pub upper_margin: ExtReal,
    pub status: BoundStatus,
    /// True on the n = 1 row of the canonical sweep, where the lower
    /// bound holds with equality by the definition of a*.
    pub defining_equality: bool,
}

/// Streaming bound verification over a contiguous n range.
#[derive(Debug)]
pub struct BoundsSweep {
    lf: LogFactSweep,
    n_to: u64,
    a_lower: ExtReal,
    a_upper: ExtReal,
    exempt_n1: bool,
}

/// Theorem 1 sweep with the canonical shifts a* and 1/2.
pub fn verify_bounds(n_from: u64, n_to: u64) -> Result<BoundsSweep, Error> {
    bounds_sweep(solver::a_star(), ExtReal::HALF, n_from, n_to, true)
}

/// Bound sweep with caller-chosen shifts; used by the best-possibility
/// perturbation probes. No defining-equality exemption applies.
pub fn verify_bounds_with(
    a_lower: ExtReal,
    a_upper: ExtReal,
    n_from: u64,
    n_to: u64,
) -> Result<BoundsSweep, Error> {
    bounds_sweep(a_lower, a_upper, n_from, n_to, false)
}

fn bounds_sweep(
    a_lower: ExtReal,
    a_upper: ExtReal,
    n_from: u64,
    n_to: u64,
    exempt_n1: bool,
) -> Result<BoundsSweep, Error> {
    if a_lower.is_negative() || a_upper.is_negative() {
        return Err(Error::Domain {
            what: "bound shifts must be nonnegative",
        });
    }
    let ceiling = effective_ceiling(SWEEP_CEILING);
    if n_to > ceiling {
        return Err(Error::RangeTooLarge {
            requested: n_to,
            ceiling,
        });
    }
    if n_from < 1 || n_from > n_to {
        return Err(Error::EmptyRange {
            from: n_from,
            to: n_to,
        });
    }
    Ok(BoundsSweep {
        lf: LogFactSweep::starting_at(n_from)?,
        n_to,
        a_lower,
        a_upper,
        exempt_n1,
    })
}

impl Iterator for BoundsSweep {
    type Item = BoundReport;

    fn next(&mut self) -> Option<BoundReport> {
        let (n, log_fact) = self.lf.next()?;
        if n > self.n_to {
            return None;
        }
        let log_lower = approx::log_f(self.a_lower, n).expect("shift checked nonnegative");
        let log_upper = approx::log_f(self.a_upper, n).expect("shift checked nonnegative");
        let lower_margin = log_fact - log_lower;
        let upper_margin = log_upper - log_fact;
        let noise = 10.0 * error_budget(n);
        let defining_equality =
            self.exempt_n1 && n == 1 && lower_margin.abs().to_f64() <= 10.0 * TOL_FLOOR;
        let lower_status = if defining_equality {
            BoundStatus::StrictPass
        } else {
            classify(lower_margin, noise)
        };
        let status = worse(lower_status, classify(upper_margin, noise));
        Some(BoundReport {
            n,
            log_lower,
            log_fact,
            log_upper,
            lower_margin,
            upper_margin,
            status,
            defining_equality,
        })
    }
}

fn classify(margin: ExtReal, noise: f64) -> BoundStatus {
    let m = margin.to_f64();
    if m > noise {
        BoundStatus::StrictPass
    } else if m < -noise {
        BoundStatus::Fail
    } else {
        BoundStatus::Indeterminate
    }
}

fn worse(a: BoundStatus, b: BoundStatus) -> BoundStatus {
    use BoundStatus::*;
    match (a, b) {
        (Fail, _) | (_, Fail) => Fail,
        (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
        _ => StrictPass,
    }
}

/// Tally over a bound sweep.
#[derive(Clone, Copy, Debug, Default)]
pub struct BoundsSummary {
    pub rows: u64,
    pub strict_pass: u64,
    pub indeterminate: u64,
    pub fail: u64,
    pub defining_equalities: u64,
    pub first_fail: Option<u64>,
}

impl BoundsSummary {
    pub fn record(&mut self, report: &BoundReport) {
        self.rows += 1;
        match report.status {
            BoundStatus::StrictPass => self.strict_pass += 1,
            BoundStatus::Indeterminate => self.indeterminate += 1,
            BoundStatus::Fail => {
                self.fail += 1;
                self.first_fail.get_or_insert(report.n);
            }
        }
        if report.defining_equality {
            self.defining_equalities += 1;
        }
    }

    /// Indeterminate rows are counted but do not fail the run.
    pub fn pass(&self) -> bool {
        self.rows > 0 && self.fail == 0
    }
}

/// One entry of the monotonicity check.
#[derive(Clone, Copy, Debug)]
pub struct MonotoneRow {
    pub n: u64,
    pub a_n: ExtReal,
    /// a_n − a_{n−1}; zero on the first row.
    pub gap: ExtReal,
}

/// Outcome of [`verify_monotone`].
#[derive(Clone, Debug)]
pub struct MonotoneReport {
    pub rows: Vec<MonotoneRow>,
    pub pass: bool,
    pub first_violation: Option<u64>,
    /// Smallest forward gap seen (n >= 2).
    pub min_gap: f64,
    /// Observation only: the gaps themselves shrink from n = 2 on.
    pub gaps_decreasing_from_2: bool,
    /// Tolerance the solves ran at.
    pub tol_a: f64,
}

/// Checks a_{n+1} > a_n with margin above 10x the solver tolerance for
/// n = 1..=n_max, plus the Eq. (4) bounds a_1 <= a_n < 1/2.
pub fn verify_monotone(n_max: u64) -> Result<MonotoneReport, Error> {
    let ceiling = effective_ceiling(MONOTONE_CEILING);
    if n_max > ceiling {
        return Err(Error::RangeTooLarge {
            requested: n_max,
            ceiling,
        });
    }
    if n_max < 1 {
        return Err(Error::EmptyRange { from: 1, to: n_max });
    }
    let tol = ExtReal::from(TOL_FLOOR);
    let margin = 10.0 * TOL_FLOOR;
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut pass = true;
    let mut first_violation = None;
    let mut min_gap = f64::INFINITY;
    let mut gaps_decreasing = true;
    let mut prev_a = ExtReal::ZERO;
    let mut prev_gap = f64::INFINITY;
    let mut a1 = ExtReal::ZERO;
    for (n, log_fact) in LogFactSweep::new() {
        if n > n_max {
            break;
        }
        let root = solver::solve_a_n_with(n, log_fact, tol)?;
        let a_n = root.value;
        let mut ok = root.converged && a_n > ExtReal::ZERO && a_n < ExtReal::HALF;
        let gap = if n == 1 {
            a1 = a_n;
            ExtReal::ZERO
        } else {
            let gap = a_n - prev_a;
            let g = gap.to_f64();
            min_gap = min_gap.min(g);
            ok &= g > margin && a_n >= a1;
            if n > 2 {
                gaps_decreasing &= g < prev_gap;
            }
            prev_gap = g;
            gap
        };
        if !ok && first_violation.is_none() {
            first_violation = Some(n);
            pass = false;
        }
        rows.push(MonotoneRow { n, a_n, gap });
        prev_a = a_n;
    }
    Ok(MonotoneReport {
        rows,
        pass,
        first_violation,
        min_gap,
        gaps_decreasing_from_2: gaps_decreasing,
        tol_a: TOL_FLOOR,
    })
}

/// Diagnostics for the limit chain at one n.
#[derive(Clone, Copy, Debug)]
pub struct LimitRow {
    pub n: u64,
    pub a_n: ExtReal,
    /// 1/2 − a_n, always positive.
    pub gap: ExtReal,
    /// n^(a_n − 1/2), in (0, 1), tending to 1.
    pub pow_diag: ExtReal,
    /// e^(−a_n) (1 + a_n/n)^n, in (0, 1), tending to 1.
    pub exp_diag: ExtReal,
    /// (1 + a_n/n)^(a_n), in [1, e^(a_n²/n)), tending to 1.
    pub small_diag: ExtReal,
}

/// Evaluates the three limit factors at each requested n.
pub fn limit_diagnostics(ns: &[u64]) -> Result<Vec<LimitRow>, Error> {
    let ceiling = effective_ceiling(LIMIT_CEILING);
    let tol = ExtReal::from(TOL_FLOOR);
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        if n < 1 {
            return Err(Error::Domain {
                what: "limit diagnostics need n >= 1",
            });
        }
        if n > ceiling {
            return Err(Error::RangeTooLarge {
                requested: n,
                ceiling,
            });
        }
        let a_n = solver::solve_a_n(n, tol)?.value;
        let nx = ExtReal::from_u64(n);
        let ln_n = nx.ln().expect("n > 0");
        let ln_q = (ExtReal::ONE + a_n / nx).ln().expect("1 + a/n > 1");
        let gap = ExtReal::HALF - a_n;
        let pow_diag = ((a_n - ExtReal::HALF) * ln_n)
            .exp()
            .expect("small argument");
        let exp_diag = (nx * ln_q - a_n).exp().expect("small argument");
        let small_diag = (a_n * ln_q).exp().expect("small argument");
        rows.push(LimitRow {
            n,
            a_n,
            gap,
            pow_diag,
            exp_diag,
            small_diag,
        });
    }
    Ok(rows)
}

/// Verdict for a limit ladder: every diagnostic stays in its documented
/// range and its distance to 1 strictly decreases row over row.
pub fn limit_trend_ok(rows: &[LimitRow]) -> bool {
    let dist1 = |x: ExtReal| (x - ExtReal::ONE).abs();
    let in_range = rows.iter().all(|r| {
        r.gap > ExtReal::ZERO
            && r.pow_diag > ExtReal::ZERO
            && r.pow_diag < ExtReal::ONE
            && r.exp_diag > ExtReal::ZERO
            && r.exp_diag < ExtReal::ONE
            && r.small_diag >= ExtReal::ONE
    });
    in_range
        && rows.windows(2).all(|p| {
            p[1].gap < p[0].gap
                && dist1(p[1].pow_diag) < dist1(p[0].pow_diag)
                && dist1(p[1].exp_diag) < dist1(p[0].exp_diag)
                && dist1(p[1].small_diag) < dist1(p[0].small_diag)
        })
}

/// Geometric ladder {from, 10 from, 100 from, ...} capped at `to`.
pub fn ladder(from: u64, to: u64) -> Result<Vec<u64>, Error> {
    if from < 1 || from > to {
        return Err(Error::EmptyRange { from, to });
    }
    let mut ns = Vec::new();
    let mut n = from;
    while n <= to {
        ns.push(n);
        match n.checked_mul(10) {
            Some(next) => n = next,
            None => break,
        }
    }
    Ok(ns)
}

/// One row of the Stirling-versus-Burnside accuracy table.
#[derive(Clone, Copy, Debug)]
pub struct AccuracyRow {
    pub n: u64,
    pub log_fact: ExtReal,
    /// Signed relative error of Stirling's approximation.
    pub sre_stirling: ExtReal,
    /// Signed relative error of Burnside's approximation.
    pub sre_burnside: ExtReal,
}

impl AccuracyRow {
    /// |Burnside error| < |Stirling error|, the claim under test.
    pub fn burnside_wins(&self) -> bool {
        self.sre_burnside.abs() < self.sre_stirling.abs()
    }
}

/// Streaming accuracy comparison over 1..=n_max.
#[derive(Debug)]
pub struct AccuracySweep {
    lf: LogFactSweep,
    n_max: u64,
}

pub fn accuracy_comparison(n_max: u64) -> Result<AccuracySweep, Error> {
    let ceiling = effective_ceiling(SWEEP_CEILING);
    if n_max > ceiling {
        return Err(Error::RangeTooLarge {
            requested: n_max,
            ceiling,
        });
    }
    if n_max < 1 {
        return Err(Error::EmptyRange { from: 1, to: n_max });
    }
    Ok(AccuracySweep {
        lf: LogFactSweep::new(),
        n_max,
    })
}

impl Iterator for AccuracySweep {
    type Item = AccuracyRow;

    fn next(&mut self) -> Option<AccuracyRow> {
        let (n, log_fact) = self.lf.next()?;
        if n > self.n_max {
            return None;
        }
        let sre_stirling =
            approx::signed_rel_error_with(ApproxKind::Stirling, n, log_fact).expect("n >= 1");
        let sre_burnside =
            approx::signed_rel_error_with(ApproxKind::Burnside, n, log_fact).expect("n >= 1");
        Some(AccuracyRow {
            n,
            log_fact,
            sre_stirling,
            sre_burnside,
        })
    }
}

/// Tally over an accuracy sweep.
#[derive(Clone, Copy, Debug, Default)]
pub struct AccuracySummary {
    pub rows: u64,
    pub violations: u64,
    pub first_violation: Option<u64>,
    /// |Burnside|/|Stirling| on the last row; tends to 1/2.
    pub final_ratio: f64,
}

impl AccuracySummary {
    pub fn record(&mut self, row: &AccuracyRow) {
        self.rows += 1;
        if !row.burnside_wins() {
            self.violations += 1;
            self.first_violation.get_or_insert(row.n);
        }
        let s = row.sre_stirling.abs().to_f64();
        if s > 0.0 {
            self.final_ratio = row.sre_burnside.abs().to_f64() / s;
        }
    }

    pub fn pass(&self) -> bool {
        self.rows > 0 && self.violations == 0
    }
}
