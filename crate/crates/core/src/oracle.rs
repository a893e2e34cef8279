//! Independent reference values used to measure quadrature errors.
//!
//! Closed forms cover the model integrands `x^β` and `log x` on `[0, 1]`;
//! everything else is checked against a brute-force Gauss-Legendre sum on
//! oscillation-resolving panels or against a self-convergence run.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gauss::GaussLegendre;
use crate::graded::Endpoint;
use crate::integrand::Integrand;
use crate::special::{gamma, si_cin, upper_incomplete_gamma_cf};
use crate::sum::CompensatedSum;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMethod {
    KummerSeries,
    SiCiFormula,
    BruteForce,
    SelfConvergence,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleValue {
    pub value: Complex64,
    pub claimed_abs_error: f64,
    pub method: OracleMethod,
}

/// Largest `|k|` handled by the power series of `1F1`; above it the
/// incomplete-gamma continued fraction takes over.
pub const KUMMER_SERIES_MAX: f64 = 2.0;

/// Largest `|k|` accepted by [`kummer_moment`].
pub const KUMMER_K_MAX: f64 = 1e12;

/// `∫_0^1 x^β e^{ikx} dx = 1F1(1 + β; 2 + β; ik)/(1 + β)`.
pub fn kummer_moment(beta: f64, k: f64) -> Result<OracleValue> {
    if !(beta > -1.0 && beta < 1.0) || beta == 0.0 {
        return Err(Error::invalid(format!("β must lie in (-1, 0) ∪ (0, 1), got {beta}")));
    }
    if !k.is_finite() || k.abs() > KUMMER_K_MAX {
        return Err(Error::UnsupportedRange(format!("k = {k} for the Kummer closed form")));
    }
    if k < 0.0 {
        let v = kummer_moment(beta, -k)?;
        return Ok(OracleValue {
            value: v.value.conj(),
            ..v
        });
    }
    let a = 1.0 + beta;
    let (value, claimed_abs_error) = if k <= KUMMER_SERIES_MAX {
        kummer_series(a, k)
    } else {
        // z^{-a} (Γ(a) - Γ(a, z)) with z = -ik
        let z = Complex64::new(0.0, -k);
        let z_pow = (-a * z.ln()).exp();
        let complete = gamma(a) * z_pow;
        let upper = upper_incomplete_gamma_cf(a, z) * z_pow;
        let value = complete - upper;
        (value, 8.0 * f64::EPSILON * (complete.norm() + upper.norm()))
    };
    Ok(OracleValue {
        value,
        claimed_abs_error,
        method: OracleMethod::KummerSeries,
    })
}

fn kummer_series(a: f64, k: f64) -> (Complex64, f64) {
    let ik = Complex64::new(0.0, k);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = CompensatedSum::new();
    let mut magnitude = 0.0;
    let mut quiet = 0;
    let mut j = 0.0;
    while quiet < 8 && j < 500.0 {
        sum.add(term);
        magnitude += term.norm();
        term *= ik * (a + j) / ((a + 1.0 + j) * (j + 1.0));
        j += 1.0;
        if term.norm() < 1e-18 * sum.value().norm() {
            quiet += 1;
        } else {
            quiet = 0;
        }
    }
    let value = sum.value() / a;
    (value, 4.0 * f64::EPSILON * magnitude / a + term.norm())
}

/// `∫_0^1 log(x) e^{ikx} dx = -(Si(k) + i Cin(k))/k`, the sine/cosine-integral form.
pub fn log_moment(k: f64) -> Result<OracleValue> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::invalid(format!("log moment needs k > 0, got {k}")));
    }
    let (si, cin) = si_cin(k);
    let value = -Complex64::new(si, cin) / k;
    Ok(OracleValue {
        value,
        claimed_abs_error: 16.0 * f64::EPSILON * (si.abs() + cin.abs()) / k,
        method: OracleMethod::SiCiFormula,
    })
}

const BRUTE_NODES: usize = 20;
const BRUTE_MAX_LEVEL: u32 = 30;
const BRUTE_MAX_PANELS: usize = 1 << 26;

/// `∫_a^b f(x) e^{ikx} dx` by Gauss-Legendre on panels no longer than
/// `π/(4k)`, geometrically refined towards each endpoint listed in `singular`.
/// The panel count is doubled until two successive sums agree to `target_abs_err / 2`.
pub fn brute_force(
    f: &dyn Integrand,
    a: f64,
    b: f64,
    k: f64,
    target_abs_err: f64,
    singular: &[Endpoint],
) -> Result<OracleValue> {
    if !(a < b) {
        return Err(Error::invalid(format!("oracle interval needs a < b, got [{a}, {b}]")));
    }
    if !(target_abs_err > 0.0) {
        return Err(Error::invalid("oracle tolerance must be positive"));
    }
    let rule = GaussLegendre::new(BRUTE_NODES);
    let base = if k.abs() > 0.0 {
        ((b - a) / (PI / (4.0 * k.abs()))).ceil() as usize
    } else {
        1
    }
    .max(4);
    let left = singular.contains(&Endpoint::Left);
    let right = singular.contains(&Endpoint::Right);

    let mut previous: Option<Complex64> = None;
    for level in 0..=BRUTE_MAX_LEVEL {
        let panels = base << level;
        if panels > BRUTE_MAX_PANELS {
            break;
        }
        let ratio = 0.15f64.powf(1.0 / f64::from(1u32 << level.min(4)));
        let value = panel_sum(f, a, b, k, panels, left, right, ratio, target_abs_err, &rule);
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::OracleFailure(format!(
                "brute-force sum is not finite on [{a}, {b}]"
            )));
        }
        if let Some(prev) = previous {
            let diff = (value - prev).norm();
            if diff < 0.5 * target_abs_err {
                return Ok(OracleValue {
                    value,
                    claimed_abs_error: diff.max(f64::EPSILON * value.norm()),
                    method: OracleMethod::BruteForce,
                });
            }
        }
        previous = Some(value);
    }
    Err(Error::OracleFailure(format!(
        "brute force on [{a}, {b}] with k = {k} did not reach {target_abs_err:e}"
    )))
}

#[allow(clippy::too_many_arguments)]
fn panel_sum(
    f: &dyn Integrand,
    a: f64,
    b: f64,
    k: f64,
    panels: usize,
    left: bool,
    right: bool,
    ratio: f64,
    target: f64,
    rule: &GaussLegendre,
) -> Complex64 {
    let width = (b - a) / panels as f64;
    // offsets from the anchor keep tiny panels accurate
    let panel = |anchor: f64, lo: f64, hi: f64| {
        let c = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        let mut part = CompensatedSum::new();
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let d = c + h * t;
            part.add(f.eval_near(anchor, d) * Complex64::from_polar(w * h, k * (anchor + d)));
        }
        part.value()
    };
    let mut acc = CompensatedSum::new();
    let first = usize::from(left);
    let last = panels - usize::from(right);
    for p in first..last {
        let lo = a + width * p as f64;
        let hi = if p + 1 == panels { b } else { a + width * (p + 1) as f64 };
        acc.add(panel(0.0, lo, hi));
    }
    let taper = |anchor: f64, sign: f64, acc: &mut CompensatedSum| {
        let mut outer = width;
        loop {
            let inner = outer * ratio;
            let (lo, hi) = if sign > 0.0 { (inner, outer) } else { (-outer, -inner) };
            let contribution = panel(anchor, lo, hi);
            acc.add(contribution);
            outer = inner;
            if (contribution.norm() < 1e-4 * target && outer < 1e-12 * (b - a)) || outer < 1e-290 {
                break;
            }
        }
    };
    if left {
        taper(a, 1.0, &mut acc);
    }
    if right {
        taper(b, -1.0, &mut acc);
    }
    acc.value()
}

/// Reference from the method itself: runs `compute` on every level of
/// `schedule` and returns the finest value, with the last difference as its
/// claimed error.
///
/// Over the last three steps the differences must be non-increasing and the
/// last one at most a quarter of the first (or at round-off level), otherwise
/// the schedule is rejected.
pub fn self_convergence_ref<F>(schedule: &[usize], compute: F) -> Result<OracleValue>
where
    F: Fn(usize) -> Result<Complex64>,
{
    if schedule.len() < 4 {
        return Err(Error::invalid("self-convergence needs at least four levels"));
    }
    let values = schedule.iter().map(|&l| compute(l)).collect::<Result<Vec<_>>>()?;
    let diffs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let finest = values[values.len() - 1];
    let floor = 64.0 * f64::EPSILON * finest.norm().max(f64::MIN_POSITIVE);
    // The last three differences must not grow and must shrink fourfold overall.
    // A stagnating final step is tolerated; its size becomes the claimed error.
    let tail = &diffs[diffs.len() - 3..];
    let monotone = tail.windows(2).all(|w| w[1] <= w[0] || w[1] <= floor);
    let contracting = monotone && (tail[2] <= 0.25 * tail[0] || tail[2] <= floor);
    if !contracting {
        let shown: Vec<String> = diffs.iter().map(|d| format!("{d:.1e}")).collect();
        return Err(Error::OracleFailure(format!(
            "self-convergence is not contracting; differences [{}]",
            shown.join(", ")
        )));
    }
    Ok(OracleValue {
        value: finest,
        claimed_abs_error: diffs[diffs.len() - 1].max(floor),
        method: OracleMethod::SelfConvergence,
    })
}
