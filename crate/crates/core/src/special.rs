//! Special functions used by the reference values and the scattering kernel:
//! sine/cosine integrals, the upper incomplete gamma function at imaginary
//! argument, and Bessel functions of the first and second kind of orders 0 and 1.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::sum::CompensatedSum;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;

/// Gamma function of a real argument.
pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// `Si(x)` and `Cin(x) = ∫_0^x (1 - cos t)/t dt` for `x >= 0`.
///
/// Power series below 2, and the continued fraction for `E1(ix)` above.
pub fn si_cin(x: f64) -> (f64, f64) {
    assert!(x >= 0.0, "si_cin expects a non-negative argument");
    if x <= 2.0 {
        let x2 = x * x;
        let mut si = CompensatedSum::new();
        let mut cin = CompensatedSum::new();
        // term_j = (-1)^j x^(2j+1) / (2j+1)!
        let mut odd = x;
        let mut j = 0usize;
        loop {
            let n = (2 * j + 1) as f64;
            si.add(Complex64::new(odd / n, 0.0));
            // even term (-1)^(j+1) x^(2j+2)/(2j+2)!
            let even = -odd * x / (n + 1.0);
            cin.add(Complex64::new(-even / (n + 1.0), 0.0));
            odd = even * x / (n + 2.0);
            j += 1;
            if odd.abs() < 1e-18 * x && even.abs() < 1e-18 * x2.max(1e-300) || j > 60 {
                break;
            }
        }
        (si.value().re, cin.value().re)
    } else {
        let (ci, si_shifted) = ci_si_cf(x);
        let si = si_shifted + FRAC_PI_2;
        let cin = EULER_GAMMA + x.ln() - ci;
        (si, cin)
    }
}

/// `Ci(x)` and `si(x) = Si(x) - π/2`.
pub fn ci_si(x: f64) -> (f64, f64) {
    assert!(x > 0.0, "ci_si expects a positive argument");
    if x <= 2.0 {
        let (si, cin) = si_cin(x);
        (EULER_GAMMA + x.ln() - cin, si - FRAC_PI_2)
    } else {
        ci_si_cf(x)
    }
}

/// `E1(ix) = -Ci(x) + i si(x)` by modified Lentz on the continued fraction.
fn ci_si_cf(x: f64) -> (f64, f64) {
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / CF_TINY, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 2..100_000 {
        let a = -((i - 1) * (i - 1)) as f64;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < CF_EPS {
            break;
        }
    }
    let e1 = Complex64::new(x.cos(), -x.sin()) * h;
    (-e1.re, e1.im)
}

/// Upper incomplete gamma `Γ(a, z)` for `Re z >= 0`, `|z|` not small,
/// by the Legendre continued fraction.
pub fn upper_incomplete_gamma_cf(a: f64, z: Complex64) -> Complex64 {
    let mut b = z + 1.0 - a;
    let mut c = Complex64::new(1.0 / CF_TINY, 0.0);
    let mut d = if b.norm() < CF_TINY {
        Complex64::new(1.0 / CF_TINY, 0.0)
    } else {
        1.0 / b
    };
    let mut h = d;
    for i in 1..100_000 {
        let fi = i as f64;
        let an = -fi * (fi - a);
        b += 2.0;
        d = an * d + b;
        if d.norm() < CF_TINY {
            d = Complex64::new(CF_TINY, 0.0);
        }
        c = b + an / c;
        if c.norm() < CF_TINY {
            c = Complex64::new(CF_TINY, 0.0);
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).norm() < CF_EPS {
            break;
        }
    }
    (-z + a * z.ln()).exp() * h
}

/// Bessel values `(J0, J1, Y0, Y1)` at `z > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselPair {
    pub j0: f64,
    pub j1: f64,
    pub y0: f64,
    pub y1: f64,
}

const SERIES_MAX: f64 = 5.0;
const ASYMPTOTIC_MIN: f64 = 25.0;

/// Bessel functions of orders 0 and 1: ascending series for small `z`,
/// Miller's backward recurrence with Neumann sums for `Y` in the middle,
/// and Hankel's asymptotic expansion for large `z`.
pub fn bessel01(z: f64) -> BesselPair {
    assert!(z > 0.0, "bessel01 expects a positive argument");
    if z <= SERIES_MAX {
        bessel01_series(z)
    } else if z <= ASYMPTOTIC_MIN {
        bessel01_miller(z)
    } else {
        let h0 = hankel_asymptotic(0, z);
        let h1 = hankel_asymptotic(1, z);
        let p0 = Complex64::from_polar(1.0, z - FRAC_PI_4);
        let p1 = Complex64::from_polar(1.0, z - FRAC_PI_2 - FRAC_PI_4);
        let v0 = h0 * p0;
        let v1 = h1 * p1;
        BesselPair {
            j0: v0.re,
            j1: v1.re,
            y0: v0.im,
            y1: v1.im,
        }
    }
}

/// `H_0^{(1)}(z) e^{-iz}`, which is free of the oscillation for large `z`.
pub fn hankel0_scaled(z: f64) -> Complex64 {
    if z > ASYMPTOTIC_MIN {
        hankel_asymptotic(0, z) * Complex64::from_polar(1.0, -FRAC_PI_4)
    } else {
        let b = bessel01(z);
        Complex64::new(b.j0, b.y0) * Complex64::from_polar(1.0, -z)
    }
}

/// `sqrt(2/(πz)) (P + iQ)` for order `nu`; the caller supplies the phase.
fn hankel_asymptotic(nu: u32, z: f64) -> Complex64 {
    let mu = 4.0 * (nu * nu) as f64;
    let mut p = CompensatedSum::new();
    let mut q = CompensatedSum::new();
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for j in 0..80u32 {
        if j > 0 {
            let odd = (2 * j - 1) as f64;
            term *= (mu - odd * odd) / (j as f64 * 8.0 * z);
        }
        if term.abs() > last {
            break;
        }
        last = term.abs();
        // (-1)^floor(j/2) split between P (even j) and Q (odd j)
        let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if j % 2 == 0 {
            p.add(Complex64::new(sign * term, 0.0));
        } else {
            q.add(Complex64::new(sign * term, 0.0));
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    Complex64::new(p.value().re, q.value().re) * (2.0 / (PI * z)).sqrt()
}

fn bessel01_series(z: f64) -> BesselPair {
    let x = 0.25 * z * z;
    let log_term = (0.5 * z).ln() + EULER_GAMMA;
    let mut j0 = CompensatedSum::new();
    let mut j1 = CompensatedSum::new();
    let mut y0_sum = CompensatedSum::new();
    let mut y1_sum = CompensatedSum::new();
    // a_m = (-1)^m x^m / (m!)^2, b_m = (-1)^m x^m / (m! (m+1)!)
    let mut a = 1.0;
    let mut harmonic = 0.0;
    for m in 0..80u32 {
        let mf = m as f64;
        if m > 0 {
            a *= -x / (mf * mf);
            harmonic += 1.0 / mf;
        }
        let b = a / (mf + 1.0);
        j0.add(Complex64::new(a, 0.0));
        j1.add(Complex64::new(b, 0.0));
        // Y0: (2/π) Σ_{m>=1} (-1)^{m+1} H_m x^m/(m!)^2 = -(2/π) Σ H_m a_m
        y0_sum.add(Complex64::new(-harmonic * a, 0.0));
        // ψ(m+1) + ψ(m+2) = 2 H_m + 1/(m+1) - 2γ
        let psi_sum = 2.0 * harmonic + 1.0 / (mf + 1.0) - 2.0 * EULER_GAMMA;
        y1_sum.add(Complex64::new(psi_sum * b, 0.0));
        if m > 2 && a.abs() < 1e-18 {
            break;
        }
    }
    let j0 = j0.value().re;
    let j1 = 0.5 * z * j1.value().re;
    let y0 = (2.0 / PI) * (log_term * j0 + y0_sum.value().re);
    let y1 = -2.0 / (PI * z) + (2.0 / PI) * (0.5 * z).ln() * j1
        - (1.0 / PI) * (0.5 * z) * y1_sum.value().re;
    BesselPair { j0, j1, y0, y1 }
}

fn bessel01_miller(z: f64) -> BesselPair {
    let start = 2 * (((z + 40.0) / 2.0).ceil() as usize);
    let mut j = vec![0.0; start + 2];
    j[start] = 1e-30;
    for m in (1..=start).rev() {
        j[m - 1] = (2.0 * m as f64 / z) * j[m] - j[m + 1];
        if j[m - 1].abs() > 1e250 {
            for v in j.iter_mut().skip(m - 1) {
                *v *= 1e-250;
            }
        }
    }
    let mut norm = CompensatedSum::new();
    norm.add(Complex64::new(j[0], 0.0));
    for k in (2..=start).step_by(2) {
        norm.add(Complex64::new(2.0 * j[k], 0.0));
    }
    let scale = 1.0 / norm.value().re;
    for v in j.iter_mut() {
        *v *= scale;
    }
    let log_term = (0.5 * z).ln() + EULER_GAMMA;
    let mut y0_sum = CompensatedSum::new();
    let mut y1_sum = CompensatedSum::new();
    for k in 1..=(start / 2) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let kf = k as f64;
        y0_sum.add(Complex64::new(sign * j[2 * k] / kf, 0.0));
        y1_sum.add(Complex64::new(sign * (j[2 * k - 1] - j[2 * k + 1]) / kf, 0.0));
    }
    let y0 = (2.0 / PI) * (log_term * j[0] - 2.0 * y0_sum.value().re);
    let y1 = (2.0 / PI) * (-j[0] / z + log_term * j[1] + y1_sum.value().re);
    BesselPair {
        j0: j[0],
        j1: j[1],
        y0,
        y1,
    }
}
