//! Shared test oracle built on a 256-bit arbitrary-precision library.
//!
//! Everything here is deliberately independent of the crate's own
//! arithmetic: reference values come from astro-float evaluations and a
//! pure bisection root finder, so agreement is meaningful.

#![allow(dead_code)]

use astro_float::{BigFloat, Consts, RoundingMode};
use burnside_sharp::ExtReal;

/// Working precision of the reference arithmetic, in bits. 256 bits is
/// about 77 decimal digits, far beyond the 1e-28 tolerances under test.
pub const P: usize = 256;
pub const RM: RoundingMode = RoundingMode::ToEven;

pub struct Oracle {
    cc: Consts,
    half_ln_two_pi: BigFloat,
}

impl Oracle {
    pub fn new() -> Oracle {
        let mut cc = Consts::new().expect("constants cache");
        let two_pi = cc.pi(P, RM).mul(&BigFloat::from_f64(2.0, P), P, RM);
        let half_ln_two_pi = two_pi
            .ln(P, RM, &mut cc)
            .mul(&BigFloat::from_f64(0.5, P), P, RM);
        Oracle { cc, half_ln_two_pi }
    }

    /// Lifts a double-word value exactly: both words are binary floats,
    /// so their 256-bit sum loses nothing.
    pub fn big(x: ExtReal) -> BigFloat {
        lift(x.hi()).add(&lift(x.lo()), P, RM)
    }

    pub fn exp(&mut self, x: ExtReal) -> BigFloat {
        Self::big(x).exp(P, RM, &mut self.cc)
    }

    pub fn ln(&mut self, x: ExtReal) -> BigFloat {
        Self::big(x).ln(P, RM, &mut self.cc)
    }

    /// ln n! as a plain sum of logarithms; O(n) reference evaluations.
    pub fn log_factorial(&mut self, n: u64) -> BigFloat {
        let mut acc = BigFloat::from_f64(0.0, P);
        for k in 2..=n {
            let lk = BigFloat::from_u64(k, P).ln(P, RM, &mut self.cc);
            acc = acc.add(&lk, P, RM);
        }
        acc
    }

    /// g(a; n) = ln f(a, n) - ln n!, all in reference precision.
    pub fn residual_g(&mut self, a: &BigFloat, n: u64, log_fact: &BigFloat) -> BigFloat {
        let s = BigFloat::from_u64(n, P).add(a, P, RM);
        let ln_s = s.ln(P, RM, &mut self.cc);
        let one = BigFloat::from_f64(1.0, P);
        self.half_ln_two_pi
            .add(&s.mul(&ln_s.sub(&one, P, RM), P, RM), P, RM)
            .sub(log_fact, P, RM)
    }

    /// Root of g(a; n) = 0 by plain bisection on [0, 1/2]: no Newton, no
    /// shared code with the solver under test. `halvings` = 90 narrows
    /// the bracket to about 4e-28.
    pub fn bisect_a_n(&mut self, n: u64, halvings: u32) -> BigFloat {
        let log_fact = self.log_factorial(n);
        let half = BigFloat::from_f64(0.5, P);
        let mut lo = BigFloat::from_f64(0.0, P);
        let mut hi = half.clone();
        for _ in 0..halvings {
            let mid = lo.add(&hi, P, RM).mul(&half, P, RM);
            if self.residual_g(&mid, n, &log_fact).is_negative() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo.add(&hi, P, RM).mul(&half, P, RM)
    }
}

/// Exact f64 -> BigFloat conversion. astro-float 0.9's `from_f64` decodes
/// subnormals at half their value (the biased exponent is left at 0
/// instead of 1), which matters here because the low word of a tiny
/// double-word result is routinely subnormal. Scaling by 2^120 first is
/// exact and keeps the conversion on the normal path.
fn lift(v: f64) -> BigFloat {
    if v != 0.0 && v.abs() < f64::MIN_POSITIVE {
        let scale = BigFloat::from_f64(2f64.powi(120), P);
        BigFloat::from_f64(v * 2f64.powi(120), P).div(&scale, P, RM)
    } else {
        BigFloat::from_f64(v, P)
    }
}

/// Reads a reference value down to f64 for reporting and tolerance
/// comparison; error magnitudes of interest are 1e-20..1e-30, squarely
/// inside f64 range.
pub fn approx_f64(x: &BigFloat) -> f64 {
    format!("{x}").parse::<f64>().unwrap_or(f64::NAN)
}

pub fn abs_error(got: ExtReal, want: &BigFloat) -> f64 {
    approx_f64(&Oracle::big(got).sub(want, P, RM)).abs()
}

pub fn rel_error(got: ExtReal, want: &BigFloat) -> f64 {
    let diff = Oracle::big(got).sub(want, P, RM);
    if want.is_zero() {
        return approx_f64(&diff).abs();
    }
    approx_f64(&diff.div(want, P, RM)).abs()
}
