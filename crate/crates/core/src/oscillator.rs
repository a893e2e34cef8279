//! Nonlinear oscillators `e^{ik g(x)}` reduced to the linear normal form by the
//! change of variable `τ = g(x)`.
//!
//! The interval is cut at stationary points, kinks of `g` and singularities of
//! `f` so that `g` is monotone on every piece with at most one special point,
//! placed at a piece end. On a piece anchored at `x_s` the integral becomes
//!
//! ```text
//! ∫ f(x) e^{ikg(x)} dx = |c| e^{ikτ0} ∫_0^1 F̂(u) e^{±ik|c|u} du,
//! F̂(u) = f(x(u)) / |g'(x(u))|,   |g(x(u)) - τ0| = |c| u,
//! ```
//!
//! with `τ0 = g(x_s)` and `c` the signed range of `g` over the piece. A
//! stationary point of order `n` makes `F̂` behave like `u^{-n/(n+1)}`.

use std::collections::HashMap;
use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fcc::{fcc_rule_interval, IntervalMap, QuadratureResult, SubintervalReport};
use crate::gauss::GaussLegendre;
use crate::graded::{composite_fcc, CompositeParams, Endpoint, SingularityClass};
use crate::integrand::Integrand;
use crate::rootfind::solve_increasing;
use crate::sum::compensated_sum;

/// A phase function `g` with its derivative.
///
/// The offset forms take a point as `anchor + d`. Implementations that can
/// evaluate `g(anchor + d) - g(anchor)` and `g'(anchor + d)` without
/// cancellation should override them: the transformed integrand is evaluated
/// at offsets far below the float spacing near a stationary point.
pub trait Phase: Sync + Send {
    fn value(&self, x: f64) -> f64;

    fn derivative(&self, x: f64) -> f64;

    fn increment(&self, anchor: f64, d: f64) -> f64 {
        self.value(anchor + d) - self.value(anchor)
    }

    /// `g'(anchor + d)`, taken from the side of `anchor` given by the sign of `d`.
    fn derivative_offset(&self, anchor: f64, d: f64) -> f64 {
        self.derivative(anchor + d)
    }

    /// `g^{(order)}(x)` if available.
    fn higher_derivative(&self, _order: usize, _x: f64) -> Option<f64> {
        None
    }

    /// Points where `g'` jumps.
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// `g` given by two closures.
pub struct FnPhase<G, D> {
    g: G,
    dg: D,
}

impl<G, D> FnPhase<G, D>
where
    G: Fn(f64) -> f64 + Sync + Send,
    D: Fn(f64) -> f64 + Sync + Send,
{
    pub fn new(g: G, dg: D) -> Self {
        Self { g, dg }
    }
}

impl<G, D> Phase for FnPhase<G, D>
where
    G: Fn(f64) -> f64 + Sync + Send,
    D: Fn(f64) -> f64 + Sync + Send,
{
    fn value(&self, x: f64) -> f64 {
        (self.g)(x)
    }

    fn derivative(&self, x: f64) -> f64 {
        (self.dg)(x)
    }
}

/// `g(x) = Σ c_j x^j`. Offsets are evaluated through the Taylor expansion at the anchor.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialPhase {
    coeffs: Vec<f64>,
}

impl PolynomialPhase {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// Taylor coefficients of `g` at `x`: `g^{(j)}(x)/j!`.
    fn shifted(&self, x: f64) -> Vec<f64> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                c[j] += x * c[j + 1];
            }
        }
        c
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

impl Phase for PolynomialPhase {
    fn value(&self, x: f64) -> f64 {
        horner(&self.coeffs, x)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.derivative_offset(x, 0.0)
    }

    fn increment(&self, anchor: f64, d: f64) -> f64 {
        let c = self.shifted(anchor);
        if c.len() < 2 {
            return 0.0;
        }
        d * horner(&c[1..], d)
    }

    fn derivative_offset(&self, anchor: f64, d: f64) -> f64 {
        let c = self.shifted(anchor);
        let dc: Vec<f64> = c.iter().enumerate().skip(1).map(|(j, &a)| j as f64 * a).collect();
        horner(&dc, d)
    }

    fn higher_derivative(&self, order: usize, x: f64) -> Option<f64> {
        let c = self.shifted(x);
        let factorial: f64 = (1..=order).map(|i| i as f64).product();
        Some(c.get(order).copied().unwrap_or(0.0) * factorial)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StationaryPoint {
    pub xi: f64,
    /// `g'` and the next `order - 1` derivatives vanish at `xi`.
    pub order: usize,
    /// `g^{(order+1)}(xi)`; negative at a maximum.
    pub lead: f64,
}

impl StationaryPoint {
    pub fn new(xi: f64, order: usize, lead: f64) -> Result<Self> {
        if order < 1 {
            return Err(Error::OscillatorDeclaration(format!(
                "stationary point at {xi} needs order >= 1"
            )));
        }
        if !(lead != 0.0 && lead.is_finite()) || !xi.is_finite() {
            return Err(Error::OscillatorDeclaration(format!(
                "stationary point at {xi} needs a finite nonzero leading derivative"
            )));
        }
        Ok(Self { xi, order, lead })
    }

    /// `α = 1/(n + 1)`.
    pub fn alpha(&self) -> f64 {
        1.0 / (self.order as f64 + 1.0)
    }

    /// Exponent `-n/(n + 1)` of the transformed integrand at `g(ξ)`.
    pub fn induced_beta(&self) -> f64 {
        self.alpha() - 1.0
    }

    /// `T_ξ(ξ) = g^{(n+1)}(ξ)/(n + 1)!`.
    pub fn remainder_at_xi(&self) -> f64 {
        let factorial: f64 = (1..=self.order + 1).map(|i| i as f64).product();
        self.lead / factorial
    }
}

pub struct Oscillator {
    phase: Box<dyn Phase>,
    stationary: Vec<StationaryPoint>,
}

impl std::fmt::Debug for Oscillator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Oscillator")
            .field("stationary", &self.stationary)
            .finish_non_exhaustive()
    }
}

impl Oscillator {
    pub fn new(phase: impl Phase + 'static, mut stationary: Vec<StationaryPoint>) -> Result<Self> {
        stationary.sort_by(|x, y| x.xi.total_cmp(&y.xi));
        for w in stationary.windows(2) {
            if w[0].xi == w[1].xi {
                return Err(Error::OscillatorDeclaration(format!(
                    "stationary point {} declared twice",
                    w[0].xi
                )));
            }
        }
        Ok(Self {
            phase: Box::new(phase),
            stationary,
        })
    }

    /// `g(x) = x`.
    pub fn linear() -> Self {
        Self {
            phase: Box::new(PolynomialPhase::new(vec![0.0, 1.0])),
            stationary: Vec::new(),
        }
    }

    pub fn phase(&self) -> &dyn Phase {
        self.phase.as_ref()
    }

    pub fn stationary(&self) -> &[StationaryPoint] {
        &self.stationary
    }

    fn stationary_at(&self, x: f64) -> Option<&StationaryPoint> {
        self.stationary.iter().find(|p| p.xi == x)
    }

    /// Checks the declaration over `[a, b]`: `g'` must be nearly zero at each
    /// stationary point and keep one strict sign inside every piece.
    pub fn validate(&self, pieces: &[Piece]) -> Result<()> {
        let g = self.phase();
        for p in &self.stationary {
            let slope = g.derivative(p.xi);
            let scale = 1.0 + p.lead.abs();
            if !(slope.abs() <= 1e-8 * scale) {
                return Err(Error::OscillatorDeclaration(format!(
                    "g'({}) = {slope:e} at a declared stationary point",
                    p.xi
                )));
            }
        }
        let mut previous: Option<(f64, f64)> = None;
        for (i, piece) in pieces.iter().enumerate() {
            let probes = 16;
            let mut sign = 0.0;
            for j in 1..probes {
                let d = (piece.b - piece.a) * j as f64 / probes as f64;
                let s = g.derivative_offset(piece.a, d);
                if s == 0.0 || !s.is_finite() || (sign != 0.0 && s.signum() != sign) {
                    return Err(Error::OscillatorDeclaration(format!(
                        "g' is not of one sign on piece {i} [{}, {}]; a stationary point is missing",
                        piece.a, piece.b
                    )));
                }
                sign = s.signum();
            }
            // monotonicity must carry across a joint that is not a special point
            let joint_is_plain = piece.special != Some(Endpoint::Left)
                && pieces.get(i.wrapping_sub(1)).is_some_and(|p| p.special != Some(Endpoint::Right));
            if let Some((end, prev_sign)) = previous {
                if joint_is_plain && end == piece.a && prev_sign != sign {
                    return Err(Error::OscillatorDeclaration(format!(
                        "g' changes sign at {end}, which is not a declared stationary point"
                    )));
                }
            }
            previous = Some((piece.b, sign));
        }
        Ok(())
    }
}

/// A monotone piece of the interval with at most one special end.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Piece {
    pub a: f64,
    pub b: f64,
    pub special: Option<Endpoint>,
}

/// Default upper bound on the piece length.
pub const MAX_PIECE_LEN: f64 = 1.0;

/// Cuts `[a, b]` at the stationary points and kinks of `osc` and at
/// `singular_points`. Pieces between two special points are split at the
/// midpoint, and every piece longer than `max_len` is halved repeatedly.
pub fn split_at_special_points(
    osc: &Oscillator,
    singular_points: &[f64],
    a: f64,
    b: f64,
    max_len: f64,
) -> Result<Vec<Piece>> {
    if !(a < b) {
        return Err(Error::invalid(format!("interval needs a < b, got [{a}, {b}]")));
    }
    if !(max_len > 0.0) {
        return Err(Error::invalid("maximum piece length must be positive"));
    }
    let mut points: Vec<f64> = osc
        .stationary
        .iter()
        .map(|p| p.xi)
        .chain(osc.phase.kinks())
        .chain(singular_points.iter().copied())
        .collect();
    for &p in &points {
        if !p.is_finite() {
            return Err(Error::invalid("special points must be finite"));
        }
    }
    points.retain(|&p| p >= a && p <= b);
    points.sort_by(f64::total_cmp);
    points.dedup();

    let mut cuts = vec![a];
    cuts.extend(points.iter().copied().filter(|&p| p > a && p < b));
    cuts.push(b);
    let is_special = |x: f64| points.binary_search_by(|p| p.total_cmp(&x)).is_ok();

    let mut pieces = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let segments = match (is_special(lo), is_special(hi)) {
            (true, true) => {
                let mid = 0.5 * (lo + hi);
                vec![(lo, mid, Some(Endpoint::Left)), (mid, hi, Some(Endpoint::Right))]
            }
            (true, false) => vec![(lo, hi, Some(Endpoint::Left))],
            (false, true) => vec![(lo, hi, Some(Endpoint::Right))],
            (false, false) => vec![(lo, hi, None)],
        };
        for (lo, hi, special) in segments {
            let mut count = 1usize;
            while (hi - lo) / count as f64 > max_len {
                count *= 2;
            }
            for i in 0..count {
                let pa = if i == 0 { lo } else { lo + (hi - lo) * i as f64 / count as f64 };
                let pb = if i + 1 == count { hi } else { lo + (hi - lo) * (i + 1) as f64 / count as f64 };
                let s = match special {
                    Some(Endpoint::Left) if i == 0 => Some(Endpoint::Left),
                    Some(Endpoint::Right) if i + 1 == count => Some(Endpoint::Right),
                    _ => None,
                };
                pieces.push(Piece { a: pa, b: pb, special: s });
            }
        }
    }
    Ok(pieces)
}

/// Solves `g(x) = tau` on a monotone piece.
pub fn invert_oscillator(osc: &Oscillator, tau: f64, piece: &Piece) -> Result<f64> {
    let g = osc.phase();
    let (ga, gb) = (g.value(piece.a), g.value(piece.b));
    let (lo, hi) = (ga.min(gb), ga.max(gb));
    if !(tau >= lo && tau <= hi) {
        return Err(Error::OutOfRange { tau, lo, hi });
    }
    let s = if gb >= ga { 1.0 } else { -1.0 };
    let tol = 1e-13 * (1.0 + tau.abs());
    let x = solve_increasing(
        |x| (s * (g.value(x) - tau), s * g.derivative(x)),
        piece.a,
        piece.b,
        piece.a + (piece.b - piece.a) * ((tau - ga) / (gb - ga)).clamp(0.0, 1.0),
        |v| v.abs() <= 0.25 * tol,
    )?;
    if !((g.value(x) - tau).abs() <= tol) {
        return Err(Error::OscillatorDeclaration(format!(
            "inversion of g at tau = {tau} stalled at x = {x}"
        )));
    }
    Ok(x)
}

/// `x̃ = ξ + (ε/|T_ξ(ξ)|)^{1/(n+1)}`, the point right of `ξ` where
/// `|g(x) - g(ξ)| ≈ ε`. Its error is `O(ε^{2/(n+1)})`.
pub fn near_stationary_inverse<T>(sp: &StationaryPoint, t_xi: T, epsilon: f64) -> Result<f64>
where
    T: Fn(f64) -> f64,
{
    if !(epsilon > 0.0) {
        return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(sp.xi + (epsilon / t_xi(sp.xi).abs()).powf(sp.alpha()))
}

/// [`near_stationary_inverse`] followed by one fixed-point step `x̃ ← H(x̃)`,
/// error `O(ε^{3/(n+1)})`.
pub fn near_stationary_inverse_refined<T>(sp: &StationaryPoint, t_xi: T, epsilon: f64) -> Result<f64>
where
    T: Fn(f64) -> f64,
{
    let x = near_stationary_inverse(sp, &t_xi, epsilon)?;
    Ok(sp.xi + (epsilon / t_xi(x).abs()).powf(sp.alpha()))
}

/// `T_ξ(ξ + d) = (1/n!) ∫_0^1 (1 - y)^n g^{(n+1)}(ξ + y d) dy`, the factor in
/// `g(x) - g(ξ) = T_ξ(x)(x - ξ)^{n+1}`.
fn taylor_remainder(phase: &dyn Phase, xi: f64, d: f64, n: usize, rule: &GaussLegendre) -> Option<f64> {
    let factorial: f64 = (1..=n).map(|i| i as f64).product();
    let mut acc = 0.0;
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let y = 0.5 * (t + 1.0);
        acc += 0.5 * w * (1.0 - y).powi(n as i32) * phase.higher_derivative(n + 1, xi + y * d)?;
    }
    Some(acc / factorial)
}

/// Threshold below which the inverse near a stationary point comes from the
/// local expansion instead of root finding.
pub fn near_stationary_threshold(g_xi: f64) -> f64 {
    1e-10f64.max(1e-8 * g_xi.abs())
}

/// The normal-form integrand `F̂` of one piece.
pub struct TransformedIntegrand<'a> {
    f: &'a dyn Integrand,
    phase: &'a dyn Phase,
    piece: Piece,
    anchor: f64,
    /// `other end - anchor`.
    span: f64,
    stationary: Option<StationaryPoint>,
    tau0: f64,
    c: f64,
    /// `-n/(n + 1)` at a stationary anchor.
    pub induced_sing: SingularityClass,
    /// Class used for the grading: the induced class composed with any
    /// singularity of `f` at the anchor.
    pub sing: SingularityClass,
    eps0: f64,
    rule: GaussLegendre,
    cache: Option<Mutex<HashMap<u64, f64>>>,
    failure: Mutex<Option<Error>>,
}

impl<'a> TransformedIntegrand<'a> {
    pub fn piece(&self) -> Piece {
        self.piece
    }

    /// `g` at the anchor end.
    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    /// Signed range `g(other end) - g(anchor)`.
    pub fn range(&self) -> f64 {
        self.c
    }

    pub fn is_smooth(&self) -> bool {
        self.sing == SingularityClass::None
    }

    /// Signed offset `d` from the anchor with `|g(anchor + d) - τ0| = eps`.
    pub fn offset(&self, eps: f64) -> Result<f64> {
        if !(eps > 0.0) {
            return Ok(0.0);
        }
        if eps >= self.c.abs() {
            return Ok(self.span);
        }
        if let Some(cache) = &self.cache {
            if let Some(&d) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&eps.to_bits()) {
                return Ok(d);
            }
        }
        let d = self.solve_offset(eps)?;
        if let Some(cache) = &self.cache {
            cache.lock().unwrap_or_else(|e| e.into_inner()).insert(eps.to_bits(), d);
        }
        Ok(d)
    }

    fn solve_offset(&self, eps: f64) -> Result<f64> {
        let sigma = self.span.signum();
        let len = self.span.abs();
        let sc = self.c.signum();
        let guess = match &self.stationary {
            Some(sp) => {
                let alpha = sp.alpha();
                let mut t = (eps / sp.remainder_at_xi().abs()).powf(alpha);
                if eps < self.eps0 {
                    if let Some(rem) = taylor_remainder(self.phase, self.anchor, sigma * t, sp.order, &self.rule) {
                        t = (eps / rem.abs()).powf(alpha);
                    }
                    return Ok(sigma * t.min(len));
                }
                t
            }
            None => len * eps / self.c.abs(),
        };
        let t = solve_increasing(
            |t| {
                let d = sigma * t;
                (
                    sc * self.phase.increment(self.anchor, d) - eps,
                    sc * sigma * self.phase.derivative_offset(self.anchor, d),
                )
            },
            0.0,
            len,
            guess,
            |v| v.abs() <= f64::EPSILON * eps,
        )?;
        Ok(sigma * t)
    }

    /// `F̂(u) = f(x)/|g'(x)|` with `|g(x) - τ0| = |c| u`.
    pub fn eval_normal(&self, u: f64) -> Result<Complex64> {
        let d = self.offset(self.c.abs() * u)?;
        // at the anchor itself take the one-sided slope
        let toward = if d == 0.0 { self.span.signum() * f64::MIN_POSITIVE } else { d };
        let slope = self.phase.derivative_offset(self.anchor, toward);
        Ok(self.f.eval_near(self.anchor, d) / slope.abs())
    }

    /// `F(τ) = f(g^{-1}(τ))/|g'(g^{-1}(τ))|` on this piece.
    pub fn eval_tau(&self, tau: f64) -> Result<Complex64> {
        let other = self.tau0 + self.c;
        let (lo, hi) = (self.tau0.min(other), self.tau0.max(other));
        if !(tau >= lo && tau <= hi) {
            return Err(Error::OutOfRange { tau, lo, hi });
        }
        self.eval_normal((tau - self.tau0).abs() / self.c.abs())
    }

    fn record(&self, e: Error) {
        let mut slot = self.failure.lock().unwrap_or_else(|e| e.into_inner());
        if slot.is_none() {
            *slot = Some(e);
        }
    }

    fn take_failure(&self) -> Option<Error> {
        self.failure.lock().unwrap_or_else(|e| e.into_inner()).take()
    }
}

impl Integrand for TransformedIntegrand<'_> {
    fn eval(&self, u: f64) -> Complex64 {
        match self.eval_normal(u) {
            Ok(v) => v,
            Err(e) => {
                self.record(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        }
    }
}

struct Conjugated<'a>(&'a dyn Integrand);

impl Integrand for Conjugated<'_> {
    fn eval(&self, x: f64) -> Complex64 {
        self.0.eval(x).conj()
    }
}

/// Builds `F̂` for one piece. `f_sing` is the class of `f` at the special end.
pub fn build_transformed_integrand<'a>(
    osc: &'a Oscillator,
    f: &'a dyn Integrand,
    piece: &Piece,
    f_sing: SingularityClass,
    cache: bool,
) -> Result<TransformedIntegrand<'a>> {
    let g = osc.phase();
    let (anchor, other, stationary) = match piece.special {
        Some(Endpoint::Left) => (piece.a, piece.b, osc.stationary_at(piece.a).copied()),
        Some(Endpoint::Right) => (piece.b, piece.a, osc.stationary_at(piece.b).copied()),
        None => {
            if g.value(piece.b) < g.value(piece.a) {
                (piece.b, piece.a, None)
            } else {
                (piece.a, piece.b, None)
            }
        }
    };
    let span = other - anchor;
    let tau0 = g.value(anchor);
    let c = g.increment(anchor, span);
    if !(c != 0.0 && c.is_finite()) {
        return Err(Error::OscillatorDeclaration(format!(
            "g is constant on [{}, {}]",
            piece.a, piece.b
        )));
    }
    let induced_sing = match &stationary {
        Some(sp) => SingularityClass::Algebraic(sp.induced_beta()),
        None => SingularityClass::None,
    };
    let sing = if piece.special.is_some() {
        induced_sing.strongest(f_sing)
    } else {
        SingularityClass::None
    };
    Ok(TransformedIntegrand {
        f,
        phase: g,
        piece: *piece,
        anchor,
        span,
        stationary,
        tau0,
        c,
        induced_sing,
        sing,
        eps0: near_stationary_threshold(tau0),
        rule: GaussLegendre::new(8),
        cache: cache.then(|| Mutex::new(HashMap::new())),
        failure: Mutex::new(None),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillatoryParams {
    /// Rule on pieces with a special end.
    pub composite: CompositeParams,
    /// Degree of the single FCC rule on smooth pieces.
    pub smooth_degree: usize,
    pub max_piece_len: f64,
    pub cache_inverse: bool,
}

impl OscillatoryParams {
    /// Grading from the singularity with decay target `r`; smooth pieces get
    /// one rule with `min(M N, 128) + 1` points.
    pub fn new(n: usize, m: usize, r: f64) -> Self {
        Self {
            composite: CompositeParams::auto(n, m, r),
            smooth_degree: (n * m).clamp(1, 128),
            max_piece_len: MAX_PIECE_LEN,
            cache_inverse: true,
        }
    }
}

/// Pieces and their transformed integrands, reusable across wavenumbers.
pub struct OscillatoryPlan<'a> {
    parts: Vec<TransformedIntegrand<'a>>,
    params: OscillatoryParams,
}

impl<'a> OscillatoryPlan<'a> {
    /// `f_sing` lists the singular points of `f` with their classes.
    pub fn new(
        f: &'a dyn Integrand,
        osc: &'a Oscillator,
        a: f64,
        b: f64,
        f_sing: &[(f64, SingularityClass)],
        params: OscillatoryParams,
    ) -> Result<Self> {
        if params.smooth_degree < 1 {
            return Err(Error::invalid("smooth-piece degree must be at least 1"));
        }
        let locations: Vec<f64> = f_sing.iter().map(|p| p.0).collect();
        let pieces = split_at_special_points(osc, &locations, a, b, params.max_piece_len)?;
        osc.validate(&pieces)?;
        let class_at = |x: f64| {
            f_sing
                .iter()
                .filter(|p| p.0 == x)
                .fold(SingularityClass::None, |acc, p| acc.strongest(p.1))
        };
        let parts = pieces
            .iter()
            .enumerate()
            .map(|(i, piece)| {
                let at = match piece.special {
                    Some(Endpoint::Left) => class_at(piece.a),
                    Some(Endpoint::Right) => class_at(piece.b),
                    None => SingularityClass::None,
                };
                build_transformed_integrand(osc, f, piece, at, params.cache_inverse)
                    .map_err(|e| e.in_piece(i, piece.a, piece.b))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { parts, params })
    }

    pub fn parts(&self) -> &[TransformedIntegrand<'a>] {
        &self.parts
    }

    /// `∫_a^b f(x) e^{ikg(x)} dx`.
    pub fn integrate(&self, k: f64) -> Result<QuadratureResult> {
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::invalid(format!("wavenumber must be finite and non-negative, got {k}")));
        }
        let reports = self
            .parts
            .par_iter()
            .enumerate()
            .map(|(i, part)| {
                let piece = part.piece();
                self.integrate_part(part, k)
                    .map(|(value, evals)| {
                        (
                            SubintervalReport {
                                index: i,
                                a: piece.a,
                                b: piece.b,
                                local_k: k * part.range().abs(),
                                value,
                            },
                            evals,
                        )
                    })
                    .map_err(|e| e.in_piece(i, piece.a, piece.b))
            })
            .collect::<Result<Vec<_>>>()?;
        let values: Vec<Complex64> = reports.iter().map(|r| r.0.value).collect();
        Ok(QuadratureResult {
            value: compensated_sum(&values),
            f_evals: reports.iter().map(|r| r.1).sum(),
            diagnostics: Some(reports.into_iter().map(|r| r.0).collect()),
        })
    }

    fn integrate_part(&self, part: &TransformedIntegrand<'_>, k: f64) -> Result<(Complex64, usize)> {
        let c = part.range();
        let kc = k * c.abs();
        let conj = Conjugated(part);
        let view: &dyn Integrand = if c < 0.0 { &conj } else { part };
        let r = if part.piece().special.is_some() && !part.is_smooth() {
            composite_fcc(view, part.sing, kc, &self.params.composite)
        } else {
            fcc_rule_interval(view, IntervalMap::new(0.0, 1.0)?, kc, self.params.smooth_degree)
        };
        if let Some(e) = part.take_failure() {
            return Err(e);
        }
        let r = r?;
        let v = if c < 0.0 { r.value.conj() } else { r.value };
        Ok((v * Complex64::from_polar(c.abs(), k * part.tau0()), r.f_evals))
    }
}

/// `∫_a^b f(x) e^{ikg(x)} dx` for a declared oscillator.
pub fn integrate_oscillatory(
    f: &dyn Integrand,
    osc: &Oscillator,
    a: f64,
    b: f64,
    f_sing: &[(f64, SingularityClass)],
    k: f64,
    params: OscillatoryParams,
) -> Result<QuadratureResult> {
    OscillatoryPlan::new(f, osc, a, b, f_sing, params)?.integrate(k)
}
