//! Bracketed root finding for monotone functions.

use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 100;

/// Root of an increasing function `h` on `[lo, hi]` with `h(lo) <= 0 <= h(hi)`.
///
/// `h` returns the value and the derivative. Newton steps that leave the
/// current bracket are replaced by bisection. Stops when `h` vanishes, when
/// `accept(h)` holds, when the step drops below two ulps or when the bracket
/// is four ulps wide.
pub fn solve_increasing<H, A>(h: H, mut lo: f64, mut hi: f64, guess: f64, accept: A) -> Result<f64>
where
    H: Fn(f64) -> (f64, f64),
    A: Fn(f64) -> bool,
{
    if !(lo <= hi) {
        return Err(Error::OscillatorDeclaration(format!("empty bracket [{lo}, {hi}]")));
    }
    let mut x = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    for _ in 0..MAX_ITERATIONS {
        let (v, dv) = h(x);
        if !v.is_finite() {
            return Err(Error::OscillatorDeclaration(format!("phase is not finite at {x}")));
        }
        if v == 0.0 || accept(v) {
            return Ok(x);
        }
        if v < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 4.0 * ulp(x) {
            return Ok(x);
        }
        let newton = x - v / dv;
        let next = if dv > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 2.0 * ulp(x) {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

fn ulp(x: f64) -> f64 {
    let a = x.abs();
    if a < f64::MIN_POSITIVE {
        f64::from_bits(1)
    } else {
        f64::from_bits(a.to_bits() + 1) - a
    }
}
