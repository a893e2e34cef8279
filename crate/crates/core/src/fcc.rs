//! The Filon-Clenshaw-Curtis rule on `[-1, 1]` and on a general interval.

use num_complex::Complex64;

use crate::chebyshev::{cheb_coeffs, cheb_grid, cos_pi_ratio};
use crate::error::{Error, Result};
use crate::integrand::{checked, Integrand};
use crate::moments::{clenshaw_curtis_moments, fcc_weights, Regime, OSCILLATORY_THRESHOLD};

/// Affine map `t ↦ c + h t` from `[-1, 1]` onto `[a, b]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntervalMap {
    a: f64,
    b: f64,
}

impl IntervalMap {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::invalid(format!("interval needs a < b, got [{a}, {b}]")));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn half_length(&self) -> f64 {
        0.5 * (self.b - self.a)
    }

    /// Image of the `j`-th Clenshaw-Curtis point; the ends land exactly on `b` and `a`.
    pub fn node(&self, j: usize, n: usize) -> f64 {
        if j == 0 {
            self.b
        } else if j == n {
            self.a
        } else {
            self.midpoint() + self.half_length() * cos_pi_ratio(j, n)
        }
    }
}

/// Contribution of one subinterval of a composite rule.
#[derive(Clone, Debug, PartialEq)]
pub struct SubintervalReport {
    pub index: usize,
    pub a: f64,
    pub b: f64,
    /// `k (b - a) / 2`, the wavenumber seen by the rule on `[-1, 1]`.
    pub local_k: f64,
    pub value: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// Number of integrand evaluations spent.
    pub f_evals: usize,
    pub diagnostics: Option<Vec<SubintervalReport>>,
}

impl QuadratureResult {
    pub(crate) fn scalar(value: Complex64, f_evals: usize) -> Self {
        Self {
            value,
            f_evals,
            diagnostics: None,
        }
    }
}

/// FCC rule from samples `f(t_j)`, `j = 0..=N`, on `[-1, 1]`.
///
/// For `k >= 1/2` this is `Σ'' α_n(f) ω_n(k)`; below, the exponential is
/// multiplied into the samples and integrated by Clenshaw-Curtis.
pub fn fcc_from_samples(samples: &[Complex64], k: f64) -> Result<Complex64> {
    let n = samples.len().saturating_sub(1);
    if n < 1 {
        return Err(Error::invalid("FCC rule needs N >= 1"));
    }
    if k >= OSCILLATORY_THRESHOLD {
        let coeffs = cheb_coeffs(samples)?;
        let weights = fcc_weights(k, n)?;
        debug_assert_eq!(weights.regime, Regime::Oscillatory);
        Ok(halved_dot(&coeffs.alpha, &weights.omega))
    } else {
        let folded: Vec<Complex64> = samples
            .iter()
            .enumerate()
            .map(|(j, &y)| y * Complex64::from_polar(1.0, k * cos_pi_ratio(j, n)))
            .collect();
        let coeffs = cheb_coeffs(&folded)?;
        Ok(halved_dot(&coeffs.alpha, &clenshaw_curtis_moments(n)))
    }
}

fn halved_dot(alpha: &[Complex64], omega: &[Complex64]) -> Complex64 {
    let n = alpha.len() - 1;
    let mut acc = 0.5 * (alpha[0] * omega[0] + alpha[n] * omega[n]);
    for m in 1..n {
        acc += alpha[m] * omega[m];
    }
    acc
}

/// `∫_{-1}^{1} f(x) e^{ikx} dx` by the FCC rule of degree `n`.
pub fn fcc_rule_unit(f: &dyn Integrand, k: f64, n: usize) -> Result<QuadratureResult> {
    check_k(k)?;
    let grid = cheb_grid(n)?;
    let samples = grid
        .points()
        .iter()
        .map(|&t| checked(f.eval(t), t))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuadratureResult::scalar(fcc_from_samples(&samples, k)?, n + 1))
}

/// `∫_a^b f(x) e^{ikx} dx` as `h e^{ikc} I_{hk,N}(f(c + h·))`.
pub fn fcc_rule_interval(
    f: &dyn Integrand,
    map: IntervalMap,
    k: f64,
    n: usize,
) -> Result<QuadratureResult> {
    check_k(k)?;
    if n < 1 {
        return Err(Error::invalid("FCC degree N must be at least 1"));
    }
    let samples = (0..=n)
        .map(|j| {
            let x = map.node(j, n);
            checked(f.eval(x), x)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuadratureResult::scalar(interval_value(&samples, map, k)?, n + 1))
}

/// Applies the mapped rule to samples taken at [`IntervalMap::node`].
pub fn interval_value(samples: &[Complex64], map: IntervalMap, k: f64) -> Result<Complex64> {
    let h = map.half_length();
    let unit = fcc_from_samples(samples, h * k)?;
    Ok(unit * Complex64::from_polar(h, k * map.midpoint()))
}

fn check_k(k: f64) -> Result<()> {
    if k >= 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "wavenumber must be finite and non-negative, got {k}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrand::real;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn constant_integrand_gives_first_moment() {
        let r = fcc_rule_unit(&real(|_| 1.0), 10.0, 4).unwrap();
        assert!(close(r.value, Complex64::new(2.0 * 10f64.sin() / 10.0, 0.0), 1e-15));
        assert_eq!(r.f_evals, 5);
    }

    #[test]
    fn exponential_in_plain_regime() {
        let z = Complex64::new(1.0, 0.1);
        let exact = (z.exp() - (-z).exp()) / z;
        let r = fcc_rule_unit(&real(f64::exp), 0.1, 16).unwrap();
        assert!(close(r.value, exact, 1e-12));
    }

    #[test]
    fn interval_examples() {
        let unit = IntervalMap::new(0.0, 1.0).unwrap();
        let r = fcc_rule_interval(&real(|_| 1.0), unit, 0.0, 3).unwrap();
        assert!(close(r.value, Complex64::new(1.0, 0.0), 1e-15));
        for n in 1..5 {
            let r = fcc_rule_interval(&real(|x| x), unit, 0.0, n).unwrap();
            assert!(close(r.value, Complex64::new(0.5, 0.0), 1e-15));
        }
        let z = Complex64::new(1.0, 20.0);
        let exact = (z.exp() - 1.0) / z;
        let r = fcc_rule_interval(&real(f64::exp), unit, 20.0, 24).unwrap();
        assert!((r.value - exact).norm() <= 1e-12 * exact.norm());
    }

    #[test]
    fn identity_map_matches_unit_rule() {
        let f = |x: f64| Complex64::new(x.cos(), x * x);
        let map = IntervalMap::new(-1.0, 1.0).unwrap();
        for &k in &[0.2, 0.5, 3.0, 77.0] {
            let a = fcc_rule_unit(&f, k, 12).unwrap().value;
            let b = fcc_rule_interval(&f, map, k, 12).unwrap().value;
            assert!((a - b).norm() <= 1e-15 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn regime_switch_is_continuous() {
        for &k in &[0.4999, 0.5001] {
            let z = Complex64::new(1.0, k);
            let exact = (z.exp() - (-z).exp()) / z;
            let r = fcc_rule_unit(&real(f64::exp), k, 16).unwrap().value;
            assert!((r - exact).norm() < 1e-6);
        }
        let lo = fcc_rule_unit(&real(f64::exp), 0.4999, 16).unwrap().value;
        let hi = fcc_rule_unit(&real(f64::exp), 0.5001, 16).unwrap().value;
        let z = Complex64::new(1.0, 0.5001);
        let shift = (z.exp() - (-z).exp()) / z - {
            let z = Complex64::new(1.0, 0.4999);
            (z.exp() - (-z).exp()) / z
        };
        assert!((hi - lo - shift).norm() <= 1e-6);
    }

    #[test]
    fn non_finite_sample_is_reported() {
        let err = fcc_rule_unit(&real(|x| 1.0 / x), 1.0, 2).unwrap_err();
        assert_eq!(err, Error::NonFiniteIntegrand { x: 0.0, subinterval: None });
        assert!(IntervalMap::new(1.0, 1.0).is_err());
    }
}
