use num_complex::Complex64;

/// A complex-valued function of one real variable.
///
/// `eval_near` receives a point as `anchor + offset`. Integrands whose
/// singular behaviour depends on the distance to `anchor` can override it to
/// stay accurate when `offset` is far below the spacing of floating-point
/// numbers near `anchor`.
pub trait Integrand: Sync {
    fn eval(&self, x: f64) -> Complex64;

    fn eval_near(&self, anchor: f64, offset: f64) -> Complex64 {
        self.eval(anchor + offset)
    }
}

impl<F> Integrand for F
where
    F: Fn(f64) -> Complex64 + Sync,
{
    fn eval(&self, x: f64) -> Complex64 {
        self(x)
    }
}

/// Lifts a real-valued closure into an [`Integrand`].
pub fn real<F>(f: F) -> impl Integrand
where
    F: Fn(f64) -> f64 + Sync,
{
    move |x: f64| Complex64::new(f(x), 0.0)
}

pub(crate) fn checked(value: Complex64, x: f64) -> crate::Result<Complex64> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(crate::Error::NonFiniteIntegrand { x, subinterval: None })
    }
}
