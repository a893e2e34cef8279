//! Composite FCC on meshes graded towards an endpoint singularity.
//!
//! The normal form is `∫_0^1 f(x) e^{ikx} dx` with the singularity at `x = 0`.
//! On the mesh `x_j = (j/M)^q` every subinterval but the first gets an FCC
//! rule of degree `N`. The first one gets the two-point rule when `f` vanishes
//! at 0 like `x^β`, `β > 0`, and is dropped when `β <= 0` (or `f` is logarithmic).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fcc::{fcc_rule_interval, interval_value, IntervalMap, QuadratureResult, SubintervalReport};
use crate::integrand::{checked, Integrand};
use crate::sum::compensated_sum;

/// Behaviour of the integrand at a singular endpoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SingularityClass {
    /// Smooth up to the endpoint.
    None,
    /// Behaves like `|x - x_0|^β`, `β ∈ (-1, 0) ∪ (0, 1)`.
    Algebraic(f64),
    /// Behaves like `log |x - x_0|`.
    Logarithmic,
}

impl SingularityClass {
    pub fn algebraic(beta: f64) -> Result<Self> {
        if beta > -1.0 && beta < 1.0 && beta != 0.0 {
            Ok(Self::Algebraic(beta))
        } else {
            Err(Error::invalid(format!(
                "algebraic exponent must lie in (-1, 0) ∪ (0, 1), got {beta}"
            )))
        }
    }

    /// The exponent governing the mesh grading; logarithms count as `β = 0`.
    pub fn beta(&self) -> Option<f64> {
        match *self {
            Self::None => None,
            Self::Algebraic(b) => Some(b),
            Self::Logarithmic => Some(0.0),
        }
    }

    /// Whether the first mesh cell is integrated by the zero rule.
    pub fn drops_first_interval(&self) -> bool {
        matches!(self.beta(), Some(b) if b <= 0.0)
    }

    /// Picks the stronger singularity (the more negative exponent).
    pub fn strongest(self, other: Self) -> Self {
        match (self.beta(), other.beta()) {
            (None, _) => other,
            (_, None) => self,
            (Some(a), Some(b)) => {
                if b < a {
                    other
                } else {
                    self
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Left,
    Right,
}

/// Points `a + (b - a) (j/M)^q`, `j = 0..=M`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedMesh {
    pub m: usize,
    pub q: f64,
    pub points: Vec<f64>,
}

impl GradedMesh {
    pub fn widths(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.windows(2).map(|w| w[1] - w[0])
    }
}

pub fn build_mesh(m: usize, q: f64, a: f64, b: f64) -> Result<GradedMesh> {
    if m < 1 {
        return Err(Error::invalid("mesh needs at least one subinterval (M >= 1)"));
    }
    if !(q >= 1.0) || !q.is_finite() {
        return Err(Error::invalid(format!(
            "grading exponent must satisfy q >= 1, got {q}"
        )));
    }
    if !(a < b) {
        return Err(Error::invalid(format!("mesh interval needs a < b, got [{a}, {b}]")));
    }
    let mf = m as f64;
    let len = b - a;
    let mut points: Vec<f64> = (0..=m)
        .map(|j| a + len * (j as f64 / mf).powf(q))
        .collect();
    points[m] = b;
    debug_assert!(points.windows(2).all(|w| w[0] <= w[1]));
    Ok(GradedMesh { m, q, points })
}

/// Default margin added to the smallest admissible grading exponent.
pub const GRADING_MARGIN: f64 = 0.1;

/// `(N + 1 - r)/(β + 1 - r) + 0.1`.
pub fn min_grading_exponent(n: usize, beta: f64, r: f64) -> Result<f64> {
    grading_exponent(n, beta, r, GRADING_MARGIN)
}

/// `(N + 1 - r)/(β + 1 - r) + margin`, for `r < 1 + β`.
pub fn grading_exponent(n: usize, beta: f64, r: f64, margin: f64) -> Result<f64> {
    if !(beta > -1.0 && beta < 1.0) {
        return Err(Error::invalid(format!("β must lie in (-1, 1), got {beta}")));
    }
    if !(r < 1.0 + beta) || r < 0.0 {
        return Err(Error::invalid(format!(
            "decay rate r must satisfy 0 <= r < 1 + β = {}, got {r}",
            1.0 + beta
        )));
    }
    Ok((n as f64 + 1.0 - r) / (beta + 1.0 - r) + margin)
}

/// Largest `k`-decay rate the error estimate allows for a given mesh:
/// `min(1 + β, (q(β + 1) - N - 1)/(q - 1))`, floored at 0.
pub fn best_k_decay_rate(n: usize, beta: f64, q: f64) -> f64 {
    let rate = (q * (beta + 1.0) - n as f64 - 1.0) / (q - 1.0);
    rate.min(1.0 + beta).max(0.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Grading {
    Fixed(f64),
    /// `q = (N + 1 - r)/(β + 1 - r) + margin`, with `q = 1` for smooth integrands.
    Auto { r: f64, margin: f64 },
    /// `q = (N + 1)/(β + 1 - r)`, the looser rule used by the scattering tables.
    Unshifted { r: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompositeParams {
    pub n: usize,
    pub m: usize,
    pub grading: Grading,
}

impl CompositeParams {
    pub fn new(n: usize, m: usize, q: f64) -> Self {
        Self {
            n,
            m,
            grading: Grading::Fixed(q),
        }
    }

    /// Grading chosen from the singularity with target decay rate `r`.
    pub fn auto(n: usize, m: usize, r: f64) -> Self {
        Self {
            n,
            m,
            grading: Grading::Auto {
                r,
                margin: GRADING_MARGIN,
            },
        }
    }

    pub fn q_for(&self, sing: SingularityClass) -> Result<f64> {
        match self.grading {
            Grading::Fixed(q) => Ok(q),
            Grading::Auto { r, margin } => match sing.beta() {
                None => Ok(1.0),
                Some(beta) => grading_exponent(self.n, beta, r, margin),
            },
            Grading::Unshifted { r } => match sing.beta() {
                None => Ok(1.0),
                Some(beta) => Ok(grading_exponent(self.n, beta, r, 0.0)? + r / (beta + 1.0 - r)),
            },
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::invalid("FCC degree N must be at least 1"));
        }
        if self.m < 1 {
            return Err(Error::invalid("mesh needs at least one subinterval (M >= 1)"));
        }
        Ok(())
    }
}

/// Rule on the first cell `[0, x1]`.
///
/// Zero for `β <= 0` and logarithms; otherwise the FCC rule of degree 1, which
/// integrates the linear interpolant of `f` against `e^{ikx}` when `k x1 >= 1`
/// and is the trapezoid rule on `f e^{ikx}` below.
pub fn first_interval_rule(
    f: &dyn Integrand,
    x1: f64,
    k: f64,
    sing: SingularityClass,
) -> Result<QuadratureResult> {
    if !(x1 > 0.0) {
        return Err(Error::invalid(format!("first mesh point must be positive, got {x1}")));
    }
    if sing.drops_first_interval() {
        return Ok(QuadratureResult::scalar(Complex64::new(0.0, 0.0), 0));
    }
    let map = IntervalMap::new(0.0, x1)?;
    fcc_rule_interval(f, map, k, 1)
}

struct Cell {
    index: usize,
    map: IntervalMap,
    degree: usize,
    /// Position of the cell's left end in the flat sample vector.
    start: usize,
}

/// `∫_0^1 f(x) e^{ikx} dx` for `f` singular at 0 only.
///
/// Neighbouring cells share their common endpoint sample, so the cost is
/// `(M - 1) N + 1` evaluations plus 0, 1 or `N` for the first cell depending on
/// the singularity class.
pub fn composite_fcc(
    f: &dyn Integrand,
    sing: SingularityClass,
    k: f64,
    params: &CompositeParams,
) -> Result<QuadratureResult> {
    params.validate()?;
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::invalid(format!("wavenumber must be finite and non-negative, got {k}")));
    }
    let q = params.q_for(sing)?;
    let mesh = build_mesh(params.m, q, 0.0, 1.0)?;
    let n = params.n;

    let mut xs: Vec<f64> = Vec::with_capacity(params.m * n + 1);
    let mut cells: Vec<Cell> = Vec::with_capacity(params.m);
    for j in 1..=params.m {
        let (lo, hi) = (mesh.points[j - 1], mesh.points[j]);
        if !(hi > lo) {
            continue;
        }
        let degree = if j == 1 {
            match sing {
                SingularityClass::None => n,
                _ if sing.drops_first_interval() => continue,
                _ => 1,
            }
        } else {
            n
        };
        if lo == 0.0 && sing.drops_first_interval() {
            // x_1 underflowed: this cell touches the singularity
            continue;
        }
        let map = IntervalMap::new(lo, hi)?;
        if xs.last() != Some(&lo) {
            xs.push(lo);
        }
        let start = xs.len() - 1;
        xs.extend((1..degree).rev().map(|i| map.node(i, degree)));
        xs.push(hi);
        cells.push(Cell {
            index: j,
            map,
            degree,
            start,
        });
    }

    let samples = xs
        .par_iter()
        .map(|&x| checked(f.eval(x), x))
        .collect::<Vec<_>>();
    let samples = samples
        .into_iter()
        .enumerate()
        .map(|(pos, s)| {
            s.map_err(|e| {
                let owner = cells
                    .iter()
                    .find(|c| pos <= c.start + c.degree)
                    .map_or(0, |c| c.index);
                e.with_subinterval(owner)
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let reports = cells
        .par_iter()
        .map(|cell| {
            let mut local: Vec<Complex64> = samples[cell.start..=cell.start + cell.degree].to_vec();
            local.reverse();
            let value = interval_value(&local, cell.map, k)?;
            Ok(SubintervalReport {
                index: cell.index,
                a: cell.map.a(),
                b: cell.map.b(),
                local_k: k * cell.map.half_length(),
                value,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let values: Vec<Complex64> = reports.iter().map(|r| r.value).collect();
    Ok(QuadratureResult {
        value: compensated_sum(&values),
        f_evals: xs.len(),
        diagnostics: Some(reports),
    })
}

/// Normal-form view of `f` near one end of `[a, b]`: `u ↦ f(anchor ± (b - a) u)`,
/// optionally conjugated.
struct NormalForm<'a> {
    f: &'a dyn Integrand,
    anchor: f64,
    step: f64,
    conjugate: bool,
}

impl Integrand for NormalForm<'_> {
    fn eval(&self, u: f64) -> Complex64 {
        let v = self.f.eval_near(self.anchor, self.step * u);
        if self.conjugate {
            v.conj()
        } else {
            v
        }
    }
}

/// `∫_lo^hi f(x) e^{ikx} dx` with the singularity at the given end of the piece.
pub(crate) fn integrate_piece(
    f: &dyn Integrand,
    lo: f64,
    hi: f64,
    at: Endpoint,
    sing: SingularityClass,
    k: f64,
    params: &CompositeParams,
) -> Result<QuadratureResult> {
    let len = hi - lo;
    let (anchor, step, conjugate) = match at {
        Endpoint::Left => (lo, len, false),
        Endpoint::Right => (hi, -len, true),
    };
    let normal = NormalForm {
        f,
        anchor,
        step,
        conjugate,
    };
    let mut r = composite_fcc(&normal, sing, k * len, params)?;
    if conjugate {
        r.value = r.value.conj();
    }
    r.value *= Complex64::from_polar(len, k * anchor);
    r.diagnostics = None;
    Ok(r)
}

/// `∫_a^b f(x) e^{ikx} dx` with endpoint or interior singularities.
///
/// The interval is cut at every singular point and midway between neighbouring
/// ones; each piece is mapped to the normal form with its singular end at 0.
pub fn integrate_singular(
    f: &dyn Integrand,
    a: f64,
    b: f64,
    singular_points: &[(f64, SingularityClass)],
    k: f64,
    params: &CompositeParams,
) -> Result<QuadratureResult> {
    let whole = IntervalMap::new(a, b)?;
    let mut points: Vec<(f64, SingularityClass)> = singular_points.to_vec();
    points.sort_by(|x, y| x.0.total_cmp(&y.0));
    for &(p, _) in &points {
        if !(p >= a && p <= b) {
            return Err(Error::invalid(format!("singular point {p} lies outside [{a}, {b}]")));
        }
    }
    for w in points.windows(2) {
        if w[1].0 - w[0].0 <= 4.0 * f64::EPSILON * (b - a) {
            return Err(Error::invalid(format!(
                "singular points {} and {} overlap",
                w[0].0, w[1].0
            )));
        }
    }
    if points.is_empty() {
        return fcc_rule_interval(f, whole, k, params.n);
    }

    let mut pieces: Vec<(f64, f64, Endpoint, SingularityClass)> = Vec::new();
    let first = points[0];
    if first.0 > a {
        pieces.push((a, first.0, Endpoint::Right, first.1));
    }
    for w in points.windows(2) {
        let mid = 0.5 * (w[0].0 + w[1].0);
        pieces.push((w[0].0, mid, Endpoint::Left, w[0].1));
        pieces.push((mid, w[1].0, Endpoint::Right, w[1].1));
    }
    let last = points[points.len() - 1];
    if last.0 < b {
        pieces.push((last.0, b, Endpoint::Left, last.1));
    }

    let mut values = Vec::with_capacity(pieces.len());
    let mut evals = 0;
    for (i, &(lo, hi, at, sing)) in pieces.iter().enumerate() {
        let r = integrate_piece(f, lo, hi, at, sing, k, params).map_err(|e| e.in_piece(i, lo, hi))?;
        values.push(r.value);
        evals += r.f_evals;
    }
    Ok(QuadratureResult::scalar(compensated_sum(&values), evals))
}
