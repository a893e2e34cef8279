//! Clenshaw-Curtis points and Chebyshev coefficients of sampled data.
//!
//! Samples are always ordered `j = 0..=N`, i.e. descending in `x`, matching
//! `t_j = cos(jπ/N)`. Coefficients follow the halved-endpoint convention: the
//! interpolant is `Σ'' α_n T_n` where the first and last terms carry a factor 1/2.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Clenshaw-Curtis points `cos(jπ/N)` for `j = 0..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebGrid {
    n: usize,
    points: Vec<f64>,
}

impl ChebGrid {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

pub fn cheb_grid(n: usize) -> Result<ChebGrid> {
    if n < 1 {
        return Err(Error::invalid("Chebyshev grid degree N must be at least 1"));
    }
    Ok(ChebGrid {
        n,
        points: (0..=n).map(|j| cos_pi_ratio(j, n)).collect(),
    })
}

/// `cos(jπ/n)` evaluated through the symmetric angle so that
/// `cos_pi_ratio(j, n) == -cos_pi_ratio(n - j, n)` holds exactly.
pub(crate) fn cos_pi_ratio(j: usize, n: usize) -> f64 {
    let j = j % (2 * n);
    let j = if j > n { 2 * n - j } else { j };
    // reduce to the first quadrant: cos(θ) = sin(π/2 - θ)
    let twice = 2 * j;
    if twice == n {
        0.0
    } else if twice < n {
        (PI * (n - twice) as f64 / (2 * n) as f64).sin()
    } else {
        -(PI * (twice - n) as f64 / (2 * n) as f64).sin()
    }
}

/// Coefficients `α_0..α_N` of the interpolant through samples on a [`ChebGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct ChebCoeffs {
    pub alpha: Vec<Complex64>,
}

impl ChebCoeffs {
    pub fn degree(&self) -> usize {
        self.alpha.len() - 1
    }

    /// Evaluates `Σ'' α_n T_n(x)` with the Clenshaw recurrence.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        let n = self.degree();
        let mut b1 = Complex64::new(0.0, 0.0);
        let mut b2 = Complex64::new(0.0, 0.0);
        for (m, &a) in self.alpha.iter().enumerate().rev() {
            let a = if m == 0 || m == n { 0.5 * a } else { a };
            if m == 0 {
                return a + x * b1 - b2;
            }
            let b0 = a + 2.0 * x * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        unreachable!("coefficient vector is never empty")
    }
}

/// Sizes from which the FFT path is used (powers of two only).
const FAST_MIN: usize = 8;

pub fn cheb_coeffs(samples: &[Complex64]) -> Result<ChebCoeffs> {
    if samples.len() < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 samples (N >= 1), got {}",
            samples.len()
        )));
    }
    let n = samples.len() - 1;
    let alpha = if n >= FAST_MIN && n.is_power_of_two() {
        dct1_fft(samples)
    } else {
        dct1_direct(samples)
    };
    Ok(ChebCoeffs { alpha })
}

/// Direct `O(N^2)` evaluation of `α_n = (2/N) Σ''_j cos(jnπ/N) y_j`.
pub fn dct1_direct(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len() - 1;
    let table: Vec<f64> = (0..2 * n).map(|m| cos_pi_ratio(m, n)).collect();
    let scale = 2.0 / n as f64;
    (0..=n)
        .map(|m| {
            let mut acc = 0.5 * (samples[0] + samples[n] * table[(n * m) % (2 * n)]);
            for (j, &y) in samples.iter().enumerate().take(n).skip(1) {
                acc += y * table[(j * m) % (2 * n)];
            }
            acc * scale
        })
        .collect()
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// DCT-I through a length-`2N` FFT of the even extension.
pub fn dct1_fft(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len() - 1;
    let mut buf: Vec<Complex64> = Vec::with_capacity(2 * n);
    buf.extend_from_slice(samples);
    buf.extend(samples[1..n].iter().rev());
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(2 * n));
    fft.process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.truncate(n + 1);
    for v in buf.iter_mut() {
        *v *= scale;
    }
    buf
}
