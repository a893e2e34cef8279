//! The circle scattering integral
//!
//! ```text
//! ∫_0^{2π} M_k(s, t) e^{ikΨ_s(t)} dt,   Ψ_s(t) = 2|sin((s - t)/2)| - cos s + cos t,
//! ```
//!
//! for the unit circle `x(t) = (cos t, sin t)` lit by a plane wave from the
//! direction `(1, 0)`, with density `V ≡ 1`. The kernel factor
//! `M_k(s, t) = (i/4) H_0^{(1)}(kR) e^{-ikR}`, `R = |x(s) - x(t)|`, is free of
//! oscillation and has a logarithmic singularity at `t = s`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fcc::QuadratureResult;
use crate::graded::{CompositeParams, Grading, SingularityClass};
use crate::integrand::Integrand;
use crate::oscillator::{Oscillator, OscillatoryParams, OscillatoryPlan, Phase, StationaryPoint, MAX_PIECE_LEN};
use crate::rootfind::solve_increasing;
use crate::special::{bessel01, hankel0_scaled};

/// `Ψ_s`, with a kink at `t = s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CirclePhase {
    s: f64,
}

impl CirclePhase {
    pub fn new(s: f64) -> Self {
        Self { s }
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// `+1` right of the kink, `-1` left of it; the kink itself counts as
    /// the side `d` points to.
    fn side(&self, anchor: f64, d: f64) -> f64 {
        if anchor == self.s {
            if d < 0.0 {
                -1.0
            } else {
                1.0
            }
        } else if anchor + d >= self.s {
            1.0
        } else {
            -1.0
        }
    }

    /// One-sided `Ψ'` at `t`.
    fn slope(&self, t: f64, side: f64) -> f64 {
        if side > 0.0 {
            (0.5 * (t - self.s)).cos() - t.sin()
        } else {
            -(0.5 * (self.s - t)).cos() - t.sin()
        }
    }
}

impl Phase for CirclePhase {
    fn value(&self, t: f64) -> f64 {
        2.0 * (0.5 * (self.s - t)).sin().abs() - self.s.cos() + t.cos()
    }

    fn derivative(&self, t: f64) -> f64 {
        self.slope(t, if t >= self.s { 1.0 } else { -1.0 })
    }

    fn increment(&self, anchor: f64, d: f64) -> f64 {
        let cosine = -2.0 * (anchor + 0.5 * d).sin() * (0.5 * d).sin();
        let u = 0.5 * (self.s - anchor);
        let v = 0.5 * (self.s - anchor - d);
        let modulus = if anchor == self.s {
            2.0 * (0.5 * d).sin().abs()
        } else if (u > 0.0) == (v > 0.0) {
            // |sin v| - |sin u| on one side of the kink
            let sign = u.signum();
            sign * 4.0 * (u - 0.25 * d).cos() * (-0.25 * d).sin()
        } else {
            2.0 * (v.sin().abs() - u.sin().abs())
        };
        modulus + cosine
    }

    fn derivative_offset(&self, anchor: f64, d: f64) -> f64 {
        let side = self.side(anchor, d);
        let crosses = anchor != self.s && (anchor >= self.s) != (side > 0.0);
        if crosses {
            return self.slope(anchor + d, side);
        }
        let x = anchor + d;
        let sine = -2.0 * (anchor + 0.5 * d).cos() * (0.5 * d).sin();
        let cosine = if side > 0.0 {
            -2.0 * (0.25 * (x + anchor - 2.0 * self.s)).sin() * (0.25 * d).sin()
        } else {
            -2.0 * (0.25 * (2.0 * self.s - x - anchor)).sin() * (0.25 * d).sin()
        };
        self.slope(anchor, side) + cosine + sine
    }

    fn higher_derivative(&self, order: usize, t: f64) -> Option<f64> {
        let j = order as f64;
        let shift = j * FRAC_PI_2;
        let modulus = if t >= self.s {
            2.0 * 0.5f64.powi(order as i32) * (0.5 * (t - self.s) + shift).sin()
        } else {
            2.0 * (-0.5f64).powi(order as i32) * (0.5 * (self.s - t) + shift).sin()
        };
        Some(modulus + (t + shift).cos())
    }

    fn kinks(&self) -> Vec<f64> {
        vec![self.s]
    }
}

/// `M_k(s, t) = (i/4) H_0^{(1)}(kR) e^{-ikR}` with `R = 2|sin((s - t)/2)|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmoothKernelFactor {
    pub s: f64,
    pub k: f64,
}

impl SmoothKernelFactor {
    pub fn new(s: f64, k: f64) -> Self {
        Self { s, k }
    }

    fn at_distance(&self, r: f64) -> Complex64 {
        Complex64::new(0.0, 0.25) * hankel0_scaled(self.k * r)
    }
}

impl Integrand for SmoothKernelFactor {
    fn eval(&self, t: f64) -> Complex64 {
        self.at_distance(2.0 * (0.5 * (self.s - t)).sin().abs())
    }

    fn eval_near(&self, anchor: f64, offset: f64) -> Complex64 {
        let gap = if anchor == self.s { -offset } else { (self.s - anchor) - offset };
        self.at_distance(2.0 * (0.5 * gap).sin().abs())
    }
}

/// `H_0^{(1)}(z) = J_0(z) + i Y_0(z)`.
pub fn hankel0_first_kind(z: f64) -> Result<Complex64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::invalid(format!("Hankel function needs z > 0, got {z}")));
    }
    let b = bessel01(z);
    Ok(Complex64::new(b.j0, b.y0))
}

const SCAN_POINTS: usize = 4096;

/// Stationary points of `Ψ_s` on `(0, 2π)` away from the kink, located by a
/// sign scan of `Ψ'` and refined in a bracket.
pub fn phase_stationary_points(s: f64) -> Result<Vec<StationaryPoint>> {
    if !(s >= 0.0 && s < 2.0 * PI) {
        return Err(Error::invalid(format!("s must lie in [0, 2π), got {s}")));
    }
    let phase = CirclePhase::new(s);
    let second = |t: f64| phase.higher_derivative(2, t).unwrap_or(f64::NAN);
    let mut points = Vec::new();
    for (lo, hi) in [(0.0, s), (s, 2.0 * PI)] {
        if hi - lo <= 0.0 {
            continue;
        }
        let side = if lo >= s { 1.0 } else { -1.0 };
        let slope = |t: f64| phase.slope(t, side);
        let steps = ((SCAN_POINTS as f64) * (hi - lo) / (2.0 * PI)).ceil().max(8.0) as usize;
        let grid = |i: usize| lo + (hi - lo) * i as f64 / steps as f64;
        for i in 0..steps {
            let (a, b) = (grid(i), grid(i + 1));
            // stay clear of the kink and the periodic seam
            let (a, b) = (if i == 0 { a + 1e-12 } else { a }, if i + 1 == steps { b - 1e-12 } else { b });
            let (fa, fb) = (slope(a), slope(b));
            if fa == 0.0 || fa.signum() == fb.signum() {
                continue;
            }
            let sign = fb.signum();
            let xi = solve_increasing(
                |t| (sign * slope(t), sign * second(t)),
                a,
                b,
                0.5 * (a + b),
                |_| false,
            )?;
            let lead = second(xi);
            if lead.abs() < 1e-6 {
                return Err(Error::Classification(format!(
                    "Ψ'' = {lead:e} at t = {xi} is too small for an order-1 point"
                )));
            }
            points.push(StationaryPoint::new(xi, 1, lead)?);
        }
    }
    Ok(points)
}

/// Parameters of the scattering pipeline: degree `n`, `l` cells per singular
/// piece, and decay target `r` in `q = (n + 1)/(β + 1 - r)`.
pub fn scattering_params(n: usize, l: usize, r: f64) -> OscillatoryParams {
    OscillatoryParams {
        composite: CompositeParams {
            n,
            m: l,
            grading: Grading::Unshifted { r },
        },
        smooth_degree: l.clamp(1, 128),
        max_piece_len: MAX_PIECE_LEN,
        cache_inverse: true,
    }
}

/// `∫_0^{2π} M_k(s, t) e^{ikΨ_s(t)} dt` with the logarithmic class at `t = s`,
/// `β = -1/2` at the stationary points and one FCC rule with `min(L + 1, 129)`
/// points on every smooth piece.
pub fn scattering_integral(s: f64, k: f64, n: usize, l: usize, r: f64) -> Result<QuadratureResult> {
    if !(k > 0.0) {
        return Err(Error::invalid(format!("wavenumber must be positive, got {k}")));
    }
    let osc = Oscillator::new(CirclePhase::new(s), phase_stationary_points(s)?)?;
    let kernel = SmoothKernelFactor::new(s, k);
    let plan = OscillatoryPlan::new(
        &kernel,
        &osc,
        0.0,
        2.0 * PI,
        &[(s, SingularityClass::Logarithmic)],
        scattering_params(n, l, r),
    )?;
    plan.integrate(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::{invert_oscillator, split_at_special_points, Piece};
    use crate::special::EULER_GAMMA;

    const S: f64 = 3.0 * PI / 4.0;

    #[test]
    fn phase_identities() {
        for s in [0.3, S, 4.0, 6.0] {
            let p = CirclePhase::new(s);
            assert_eq!(p.value(s), 0.0);
            for t in [0.1, 1.0, 2.5, 5.9] {
                assert!((p.value(t) - p.value(t + 2.0 * PI)).abs() < 1e-12 || t + 2.0 * PI > 2.0 * PI);
                for d in [1e-9, 1e-3, -0.2, 0.4] {
                    let direct = p.value(t + d) - p.value(t);
                    if (t - s) * (t + d - s) > 0.0 {
                        assert!((p.increment(t, d) - direct).abs() < 1e-14, "s={s} t={t} d={d}");
                        let fd = p.derivative(t + d);
                        assert!((p.derivative_offset(t, d) - fd).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn one_sided_slopes_at_the_kink() {
        let p = CirclePhase::new(S);
        assert!((p.derivative_offset(S, 1e-300) - (1.0 - S.sin())).abs() < 1e-15);
        assert!((p.derivative_offset(S, -1e-300) - (-1.0 - S.sin())).abs() < 1e-15);
        let d = 1e-10;
        let expected = d * (1.0 - S.sin()) - 0.5 * d * d * S.cos();
        assert!((p.increment(S, d) - expected).abs() < 1e-25);
    }

    #[test]
    fn higher_derivatives_match_differences() {
        let p = CirclePhase::new(S);
        for t in [1.0, 5.0] {
            let h = 1e-5;
            let d2 = (p.derivative(t + h) - p.derivative(t - h)) / (2.0 * h);
            assert!((p.higher_derivative(2, t).unwrap() - d2).abs() < 1e-8);
            let d3 = (p.higher_derivative(2, t + h).unwrap() - p.higher_derivative(2, t - h).unwrap()) / (2.0 * h);
            assert!((p.higher_derivative(3, t).unwrap() - d3).abs() < 1e-8);
            assert!((p.higher_derivative(1, t).unwrap() - p.derivative(t)).abs() < 1e-15);
        }
    }

    #[test]
    fn illuminated_point_has_one_stationary_point() {
        let pts = phase_stationary_points(S).unwrap();
        assert_eq!(pts.len(), 1);
        assert!((pts[0].xi - 23.0 * PI / 12.0).abs() < 1e-12);
        assert_eq!(pts[0].order, 1);
        for s in [1.7, 2.5, 3.5, 4.6] {
            assert_eq!(phase_stationary_points(s).unwrap().len(), 1, "s = {s}");
        }
    }

    #[test]
    fn shadow_point_has_three_stationary_points() {
        for s in [0.4, 5.9] {
            let pts = phase_stationary_points(s).unwrap();
            assert_eq!(pts.len(), 3, "s = {s}");
            // one of them lies in the illuminated half, cos t < 0
            assert_eq!(pts.iter().filter(|p| p.xi.cos() < 0.0).count(), 1);
            let p = CirclePhase::new(s);
            for sp in &pts {
                assert!(p.derivative(sp.xi).abs() < 1e-13);
                let (a, b) = (sp.xi - 1e-4, sp.xi + 1e-4);
                assert!(p.derivative(a).signum() != p.derivative(b).signum());
            }
        }
        assert!(phase_stationary_points(7.0).is_err());
    }

    #[test]
    fn split_isolates_the_kink_and_the_stationary_point() {
        let osc = Oscillator::new(CirclePhase::new(S), phase_stationary_points(S).unwrap()).unwrap();
        let pieces = split_at_special_points(&osc, &[S], 0.0, 2.0 * PI, 1.0).unwrap();
        assert_eq!(pieces.len(), 9);
        osc.validate(&pieces).unwrap();
    }

    #[test]
    fn inversion_round_trip_on_circle_phase() {
        let osc = Oscillator::new(CirclePhase::new(S), phase_stationary_points(S).unwrap()).unwrap();
        let piece = Piece { a: 0.5, b: 1.5, special: None };
        let tau = osc.phase().value(1.0);
        assert!((invert_oscillator(&osc, tau, &piece).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hankel_values() {
        assert!(hankel0_first_kind(0.0).is_err());
        let z = 1e-8;
        let h = hankel0_first_kind(z).unwrap();
        assert!((h.re - 1.0).abs() < 1e-15);
        let y0 = 2.0 / PI * ((z / 2.0).ln() + EULER_GAMMA);
        assert!((h.im - y0).abs() < 1e-14 * y0.abs());
        assert!((hankel0_first_kind(1.0).unwrap().re - 0.765_197_686_557_966_6).abs() < 1e-15);
        let z = 1e4;
        assert!((hankel0_first_kind(z).unwrap().norm() * (PI * z / 2.0).sqrt() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn wronskian() {
        let mut z = 0.1;
        while z <= 1e4 {
            let b = bessel01(z);
            // J0 Y0' - J0' Y0 with J0' = -J1, Y0' = -Y1
            let w = -b.j0 * b.y1 + b.j1 * b.y0;
            let expected = 2.0 / (PI * z);
            assert!((w - expected).abs() <= 1e-10 * expected, "z = {z}");
            z *= 1.37;
        }
    }

    #[test]
    fn kernel_offsets_agree_with_direct_evaluation() {
        let m = SmoothKernelFactor::new(S, 10.0);
        for t in [0.3, 2.0, 5.0] {
            let d = 0.01;
            assert!((m.eval_near(t, d) - m.eval(t + d)).norm() < 1e-12);
        }
        let tiny = m.eval_near(S, 1e-200);
        assert!(tiny.re.is_finite() && tiny.im.is_finite());
    }
}
