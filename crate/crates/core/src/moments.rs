//! Moments `ω_n(k) = ∫_{-1}^{1} T_n(x) e^{ikx} dx`.
//!
//! Integrating `2T_n = T'_{n+1}/(n+1) - T'_{n-1}/(n-1)` by parts gives, for `n >= 2`,
//!
//! ```text
//! 2ω_n = -2/(n²-1) (e^{ik} + (-1)^n e^{-ik}) - ik (ω_{n+1}/(n+1) - ω_{n-1}/(n-1))
//! ```
//!
//! and `ω_2 = (e^{ik} - e^{-ik} - 4ω_1)/(ik)` from `T_1 = T'_2/4`. The relation is
//! run forwards while `n < k`. Beyond that the forward direction is unstable, so
//! the remaining moments are found from the same relation posed as a tridiagonal
//! boundary-value problem (diagonally dominant once `n > k`) whose far end is
//! closed with a zero; the closure index is doubled until the requested moments
//! no longer move.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Below this wavenumber the plain Clenshaw-Curtis branch is used.
pub const OSCILLATORY_THRESHOLD: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `k >= 1/2`: Filon moments against `e^{ikx}`.
    Oscillatory,
    /// `k < 1/2`: the exponential is folded into the integrand and the
    /// Clenshaw-Curtis moments `ω_n(0)` are used.
    Plain,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FccWeights {
    pub k: f64,
    pub n: usize,
    pub omega: Vec<Complex64>,
    pub regime: Regime,
}

pub fn fcc_weights(k: f64, n: usize) -> Result<FccWeights> {
    if n < 1 {
        return Err(Error::invalid("FCC degree N must be at least 1"));
    }
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::invalid(format!(
            "wavenumber must be finite and non-negative, got {k}"
        )));
    }
    let (omega, regime) = if k < OSCILLATORY_THRESHOLD {
        (clenshaw_curtis_moments(n), Regime::Plain)
    } else {
        (oscillatory_moments(k, n), Regime::Oscillatory)
    };
    Ok(FccWeights { k, n, omega, regime })
}

/// `ω_n(0)`: `2/(1-n²)` for even `n`, zero for odd `n`.
pub fn clenshaw_curtis_moments(n: usize) -> Vec<Complex64> {
    (0..=n)
        .map(|m| {
            if m % 2 == 0 {
                let m = m as f64;
                Complex64::new(2.0 / (1.0 - m * m), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect()
}

/// `ω_0(k)` and `ω_1(k)` in closed form (series for tiny `k`).
pub fn low_moments(k: f64) -> (Complex64, Complex64) {
    if k.abs() < 1e-4 {
        let k2 = k * k;
        let w0 = 2.0 * (1.0 - k2 / 6.0 + k2 * k2 / 120.0);
        let w1 = 2.0 * k * (1.0 / 3.0 - k2 / 30.0 + k2 * k2 / 840.0);
        (Complex64::new(w0, 0.0), Complex64::new(0.0, w1))
    } else {
        let (s, c) = k.sin_cos();
        (
            Complex64::new(2.0 * s / k, 0.0),
            Complex64::new(0.0, 2.0 * (s / (k * k) - c / k)),
        )
    }
}

/// Moments `ω_0(k)..ω_n(k)` for any `k > 0`.
pub fn oscillatory_moments(k: f64, n: usize) -> Vec<Complex64> {
    assert!(k > 0.0, "oscillatory moments need k > 0");
    let len = n.max(2) + 1;
    let mut w = vec![Complex64::new(0.0, 0.0); len];
    let (w0, w1) = low_moments(k);
    w[0] = w0;
    w[1] = w1;
    if n == 1 {
        w.truncate(2);
        return w;
    }
    let ik = Complex64::new(0.0, k);
    let e_plus = Complex64::from_polar(1.0, k);
    let e_minus = e_plus.conj();

    // first index solved as a boundary-value problem
    let split = (k.ceil() as usize + 1).max(2);
    let forward_top = n.min(split - 1);
    if forward_top >= 2 {
        w[2] = (e_plus - e_minus - 4.0 * w[1]) / ik;
        for m in 2..forward_top {
            let mf = m as f64;
            let rhs = boundary_term(m, e_plus, e_minus) - 2.0 * w[m] + ik * w[m - 1] / (mf - 1.0);
            w[m + 1] = rhs * (mf + 1.0) / ik;
        }
    }
    if n >= split {
        let mut extra = 16usize.max(k.ceil() as usize);
        let mut tail = solve_tail(k, split, n + extra, w[split - 1], e_plus, e_minus);
        loop {
            extra *= 2;
            let wider = solve_tail(k, split, n + extra, w[split - 1], e_plus, e_minus);
            let scale = wider.iter().take(n + 1 - split).map(|z| z.norm()).fold(0.0, f64::max);
            let change = tail
                .iter()
                .zip(&wider)
                .take(n + 1 - split)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            tail = wider;
            if change <= 1e-15 * scale.max(1e-300) || extra > 64 * (n + 16) {
                break;
            }
        }
        w[split..=n].copy_from_slice(&tail[..=n - split]);
    }
    w.truncate(n + 1);
    w
}

#[inline]
fn boundary_term(m: usize, e_plus: Complex64, e_minus: Complex64) -> Complex64 {
    let mf = m as f64;
    let parity = if m % 2 == 0 { 1.0 } else { -1.0 };
    (e_plus + parity * e_minus) * (-2.0 / (mf * mf - 1.0))
}

/// Thomas solve for `ω_first..ω_{last-1}` with `ω_{first-1}` given and `ω_last = 0`.
fn solve_tail(
    k: f64,
    first: usize,
    last: usize,
    known: Complex64,
    e_plus: Complex64,
    e_minus: Complex64,
) -> Vec<Complex64> {
    let ik = Complex64::new(0.0, k);
    let size = last - first;
    let mut diag = vec![Complex64::new(2.0, 0.0); size];
    let mut rhs: Vec<Complex64> = (first..last).map(|m| boundary_term(m, e_plus, e_minus)).collect();
    let lower = |m: usize| -ik / (m as f64 - 1.0);
    let upper = |m: usize| ik / (m as f64 + 1.0);
    rhs[0] -= lower(first) * known;
    for i in 1..size {
        let m = first + i;
        let factor = lower(m) / diag[i - 1];
        diag[i] -= factor * upper(m - 1);
        let prev = rhs[i - 1];
        rhs[i] -= factor * prev;
    }
    let mut x = vec![Complex64::new(0.0, 0.0); size];
    x[size - 1] = rhs[size - 1] / diag[size - 1];
    for i in (0..size - 1).rev() {
        x[i] = (rhs[i] - upper(first + i) * x[i + 1]) / diag[i];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_regime_uses_clenshaw_curtis_moments() {
        let w = fcc_weights(0.3, 4).unwrap();
        assert_eq!(w.regime, Regime::Plain);
        let want = [2.0, 0.0, -2.0 / 3.0, 0.0, -2.0 / 15.0];
        for (got, want) in w.omega.iter().zip(want) {
            assert!((got - Complex64::new(want, 0.0)).norm() < 1e-16);
        }
    }

    #[test]
    fn closed_form_low_moments() {
        let w = fcc_weights(2.0, 1).unwrap();
        assert_eq!(w.regime, Regime::Oscillatory);
        assert!((w.omega[0] - Complex64::new(2f64.sin(), 0.0)).norm() < 1e-15);
        let w1 = 2.0 * (2f64.sin() / 4.0 - 2f64.cos() / 2.0);
        assert!((w.omega[1] - Complex64::new(0.0, w1)).norm() < 1e-15);
        assert!((w.omega[1].im - 0.870_795_55).abs() < 1e-8);
    }

    #[test]
    fn series_matches_closed_form_near_crossover() {
        let k = 1.0001e-4;
        let (a0, a1) = low_moments(k);
        let (s, c) = k.sin_cos();
        assert!((a0.re - 2.0 * s / k).abs() < 1e-15);
        // the closed form itself loses digits here; compare loosely
        assert!((a1.im - 2.0 * (s / (k * k) - c / k)).abs() < 1e-8);
    }

    #[test]
    fn parity_and_bound() {
        for &k in &[0.6, 3.0, 17.5, 120.0, 4000.0] {
            let w = oscillatory_moments(k, 40);
            let scale = w.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for (m, z) in w.iter().enumerate() {
                assert!(z.norm() <= 2.0 + 1e-12);
                let off = if m % 2 == 0 { z.im } else { z.re };
                assert!(off.abs() <= 1e-13 * scale, "k={k} m={m} {z}");
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fcc_weights(1.0, 0).is_err());
        assert!(fcc_weights(-1.0, 4).is_err());
        assert!(fcc_weights(f64::NAN, 4).is_err());
    }
}
