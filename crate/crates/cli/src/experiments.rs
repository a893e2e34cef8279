//! The experiment tables: parameter grids, parallel cell evaluation and the
//! ratio columns.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use oscquad::oracle::{kummer_moment, log_moment, self_convergence_ref};
use oscquad::scattering::scattering_integral;
use oscquad::{composite_fcc, fcc_rule_interval, CompositeParams, IntervalMap, SingularityClass};
use rayon::prelude::*;

use crate::report::Row;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    One,
    Two,
    Three,
    Four,
    Scattering,
    Timing,
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" => Ok(Self::One),
            "2" => Ok(Self::Two),
            "3" => Ok(Self::Three),
            "4" => Ok(Self::Four),
            "scattering" => Ok(Self::Scattering),
            "timing" => Ok(Self::Timing),
            other => Err(format!(
                "unknown experiment '{other}' (expected 1, 2, 3, 4, scattering or timing)"
            )),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::One => "1",
            Self::Two => "2",
            Self::Three => "3",
            Self::Four => "4",
            Self::Scattering => "scattering",
            Self::Timing => "timing",
        })
    }
}

pub fn run(experiment: Experiment) -> Vec<Row> {
    match experiment {
        Experiment::One => experiment1(),
        Experiment::Two => experiment2(),
        Experiment::Three => experiment3(),
        Experiment::Four => experiment4(),
        Experiment::Scattering => scattering_table(),
        Experiment::Timing => timing_table(),
    }
}

/// Collocation point of the scattering runs, in the lit part of the circle.
pub const SCATTERING_S: f64 = 3.0 * PI / 4.0;
/// Cells per singular piece in the scattering runs.
pub const SCATTERING_L: [usize; 5] = [12, 24, 48, 96, 192];
/// Finest level, used as the reference.
pub const SCATTERING_REFERENCE_L: usize = 384;
pub const SCATTERING_K: [f64; 5] = [10.0, 1e2, 1e3, 1e4, 1e5];

/// `x^β` for `β ≠ 0` and `log x` for `β = 0`.
pub fn f_beta(beta: f64) -> impl Fn(f64) -> Complex64 + Sync {
    move |x: f64| Complex64::new(if beta == 0.0 { x.ln() } else { x.powf(beta) }, 0.0)
}

pub fn f_beta_class(beta: f64) -> SingularityClass {
    if beta == 0.0 {
        SingularityClass::Logarithmic
    } else {
        SingularityClass::Algebraic(beta)
    }
}

/// Exact `∫_0^1 f_β(x) e^{ikx} dx`.
pub fn f_beta_exact(beta: f64, k: f64) -> oscquad::Result<Complex64> {
    if beta == 0.0 {
        Ok(log_moment(k)?.value)
    } else {
        Ok(kummer_moment(beta, k)?.value)
    }
}

/// Error and cost of the composite rule for `f_β` on `[0, 1]`.
pub fn f_beta_cell(beta: f64, n: usize, m: usize, q: f64, k: f64) -> oscquad::Result<(f64, usize)> {
    let r = composite_fcc(&f_beta(beta), f_beta_class(beta), k, &CompositeParams::new(n, m, q))?;
    Ok(((r.value - f_beta_exact(beta, k)?).norm(), r.f_evals))
}

/// Error and cost of one FCC rule of degree `n` for `f_β` on `[0, 1]`.
pub fn f_beta_single_rule(beta: f64, n: usize, k: f64) -> oscquad::Result<(f64, usize)> {
    let r = fcc_rule_interval(&f_beta(beta), IntervalMap::new(0.0, 1.0)?, k, n)?;
    Ok(((r.value - f_beta_exact(beta, k)?).norm(), r.f_evals))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RatioRule {
    None,
    /// `log2(E_prev/E)` between doubled mesh sizes.
    Doubling,
    /// `log10(E_prev/E)` between successive decades of `k`.
    Decade,
}

struct Spec<C> {
    row: Row,
    group: usize,
    cell: C,
}

fn blank(experiment: &str, beta: Option<f64>, n: usize, m_or_l: usize, q: Option<f64>, k: f64) -> Row {
    Row {
        experiment: experiment.to_string(),
        beta,
        n,
        m_or_l,
        q,
        k,
        error_abs: None,
        ratio: None,
        f_evals: 0,
        seconds: None,
        block: 0,
        failure: None,
    }
}

/// Evaluates the cells in parallel and fills in ratios in grid order.
fn evaluate<C, F>(specs: Vec<Spec<C>>, rule: RatioRule, compute: F) -> Vec<Row>
where
    C: Sync,
    F: Fn(&C) -> oscquad::Result<(f64, usize)> + Sync,
{
    let results: Vec<_> = specs.par_iter().map(|s| compute(&s.cell)).collect();
    let mut rows: Vec<Row> = Vec::with_capacity(specs.len());
    let mut last: Option<(usize, Option<f64>)> = None;
    for (spec, result) in specs.into_iter().zip(results) {
        let mut row = spec.row;
        row.block = spec.group;
        match result {
            Ok((err, evals)) => {
                row.error_abs = Some(err);
                row.f_evals = evals;
            }
            Err(e) => row.failure = Some(e.to_string()),
        }
        if let Some((group, prev)) = last {
            if group == spec.group {
                if let (Some(p), Some(e)) = (prev, row.error_abs) {
                    row.ratio = match rule {
                        RatioRule::None => None,
                        RatioRule::Doubling => Some((p / e).log2()),
                        RatioRule::Decade => Some((p / e).log10()),
                    };
                }
            }
        }
        last = Some((spec.group, row.error_abs));
        rows.push(row);
    }
    rows
}

/// `k = 1000`, `q = (N + 1)/(β + 1) + 0.1`, `M` doubling.
pub fn experiment1() -> Vec<Row> {
    let mut specs = Vec::new();
    for (bi, beta) in [0.5, 0.0, -0.25].into_iter().enumerate() {
        for (ni, n) in [4usize, 6, 8].into_iter().enumerate() {
            let q = (n as f64 + 1.0) / (beta + 1.0) + 0.1;
            for m in [8usize, 16, 32, 64] {
                specs.push(Spec {
                    row: blank("1", Some(beta), n, m, Some(q), 1000.0),
                    group: bi * 3 + ni,
                    cell: (beta, n, m, q, 1000.0),
                });
            }
        }
    }
    evaluate(specs, RatioRule::Doubling, |&(b, n, m, q, k)| f_beta_cell(b, n, m, q, k))
}

pub const EXPERIMENT2_BETAS: [f64; 8] = [0.125, 0.25, 0.5, 0.75, -0.0625, -0.125, -0.25, -0.5];

/// `M = 10`, `N = 3`, `q = 12`, `k = 10^3 … 10^7`.
pub fn experiment2() -> Vec<Row> {
    let mut specs = Vec::new();
    for (g, beta) in EXPERIMENT2_BETAS.into_iter().enumerate() {
        for p in 3..=7 {
            let k = 10f64.powi(p);
            specs.push(Spec {
                row: blank("2", Some(beta), 3, 10, Some(12.0), k),
                group: g,
                cell: (beta, k),
            });
        }
    }
    evaluate(specs, RatioRule::Decade, |&(b, k)| f_beta_cell(b, 3, 10, 12.0, k))
}

/// `f = log`, `M = 12`, `N = 3`, `q ∈ {4, 8, 12, 16}`, `k = 10 … 10^7`.
pub fn experiment3() -> Vec<Row> {
    let mut specs = Vec::new();
    for (g, q) in [4.0, 8.0, 12.0, 16.0].into_iter().enumerate() {
        for p in 1..=7 {
            let k = 10f64.powi(p);
            specs.push(Spec {
                row: blank("3", Some(0.0), 3, 12, Some(q), k),
                group: g,
                cell: (q, k),
            });
        }
    }
    evaluate(specs, RatioRule::Decade, |&(q, k)| f_beta_cell(0.0, 3, 12, q, k))
}

/// Single FCC rule with `N = 24·2^i` against the composite rule with
/// `M = 6`, `q = 12`, `N = 4·2^i`, both for `β = 1/2`.
pub fn experiment4() -> Vec<Row> {
    let mut specs = Vec::new();
    for (ki, k) in [400.0, 1600.0].into_iter().enumerate() {
        for i in 0..4 {
            specs.push(Spec {
                row: blank("4", Some(0.5), 24 << i, 1, Some(1.0), k),
                group: 2 * ki,
                cell: (true, 24usize << i, k),
            });
        }
        for i in 0..4 {
            specs.push(Spec {
                row: blank("4", Some(0.5), 4 << i, 6, Some(12.0), k),
                group: 2 * ki + 1,
                cell: (false, 4usize << i, k),
            });
        }
    }
    evaluate(specs, RatioRule::None, |&(single, n, k)| {
        if single {
            f_beta_single_rule(0.5, n, k)
        } else {
            f_beta_cell(0.5, n, 6, 12.0, k)
        }
    })
}

/// `q` on pieces adjoining a stationary point of order 1.
pub fn scattering_stationary_q(n: usize, r: f64) -> f64 {
    (n as f64 + 1.0) / (0.5 - r)
}

/// Values of the scattering integral on the whole level schedule.
pub fn scattering_levels(n: usize, r: f64, k: f64) -> oscquad::Result<BTreeMap<usize, (Complex64, usize)>> {
    let mut levels: Vec<usize> = SCATTERING_L.to_vec();
    levels.push(SCATTERING_REFERENCE_L);
    levels
        .par_iter()
        .map(|&l| scattering_integral(SCATTERING_S, k, n, l, r).map(|q| (l, (q.value, q.f_evals))))
        .collect()
}

/// Errors of the scattering integral against the finest level.
pub fn scattering_errors(n: usize, r: f64, k: f64) -> oscquad::Result<Vec<(usize, f64, usize)>> {
    let levels = scattering_levels(n, r, k)?;
    let mut schedule: Vec<usize> = SCATTERING_L.to_vec();
    schedule.push(SCATTERING_REFERENCE_L);
    let reference = self_convergence_ref(&schedule, |l| Ok(levels[&l].0))?;
    Ok(SCATTERING_L
        .iter()
        .map(|l| {
            let (v, evals) = levels[l];
            (*l, (v - reference.value).norm(), evals)
        })
        .collect())
}

/// `N = 6`, `r = 0` and `N = 4`, `r = 1/4` over `k` and `L`.
pub fn scattering_table() -> Vec<Row> {
    let configs = [(6usize, 0.0), (4usize, 0.25)];
    let columns: Vec<(usize, f64, f64)> = configs
        .iter()
        .flat_map(|&(n, r)| SCATTERING_K.iter().map(move |&k| (n, r, k)))
        .collect();
    let results: Vec<_> = columns.par_iter().map(|&(n, r, k)| scattering_errors(n, r, k)).collect();
    let mut rows = Vec::new();
    for (block, (&(n, r, k), result)) in columns.iter().zip(results).enumerate() {
        let q = scattering_stationary_q(n, r);
        match result {
            Ok(errors) => {
                let mut prev: Option<f64> = None;
                for (l, e, evals) in errors {
                    let mut row = blank("scattering", None, n, l, Some(q), k);
                    row.block = block;
                    row.error_abs = Some(e);
                    row.f_evals = evals;
                    row.ratio = prev.map(|p| (p / e).log2());
                    prev = Some(e);
                    rows.push(row);
                }
            }
            Err(e) => {
                for l in SCATTERING_L {
                    let mut row = blank("scattering", None, n, l, Some(q), k);
                    row.block = block;
                    row.failure = Some(e.to_string());
                    rows.push(row);
                }
            }
        }
    }
    rows
}

pub const TIMING_K: [f64; 3] = [10.0, 1e3, 1e4];
const TIMING_REPEATS: usize = 3;

/// Wall time of the `N = 6`, `r = 0` scattering runs; the best of three
/// single-level runs per cell.
pub fn timing_table() -> Vec<Row> {
    let n = 6;
    let q = scattering_stationary_q(n, 0.0);
    let mut rows = Vec::new();
    for (block, k) in TIMING_K.into_iter().enumerate() {
        let errors = scattering_errors(n, 0.0, k);
        for (i, l) in SCATTERING_L.into_iter().enumerate() {
            let mut row = blank("timing", None, n, l, Some(q), k);
            row.block = block;
            let mut best = f64::INFINITY;
            for _ in 0..TIMING_REPEATS {
                let start = Instant::now();
                match scattering_integral(SCATTERING_S, k, n, l, 0.0) {
                    Ok(r) => row.f_evals = r.f_evals,
                    Err(e) => row.failure = Some(e.to_string()),
                }
                best = best.min(start.elapsed().as_secs_f64());
            }
            row.seconds = Some(best);
            match &errors {
                Ok(e) => row.error_abs = Some(e[i].1),
                Err(e) => row.failure = Some(e.to_string()),
            }
            rows.push(row);
        }
    }
    rows
}
