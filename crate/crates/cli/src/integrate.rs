//! `oscquad integrate`: one configured problem at a list of wavenumbers.

use std::io::Write;

use anyhow::{Context, Result};
use num_complex::Complex64;
use oscquad::oracle::{brute_force, kummer_moment, log_moment, OracleMethod, OracleValue, KUMMER_K_MAX};
use oscquad::oscillator::{integrate_oscillatory, Oscillator, OscillatoryParams, PolynomialPhase, StationaryPoint, MAX_PIECE_LEN};
use oscquad::scattering::{phase_stationary_points, CirclePhase, SmoothKernelFactor};
use oscquad::{integrate_singular, CompositeParams, Endpoint, Grading, Integrand, SingularityClass, GRADING_MARGIN};
use rayon::prelude::*;

use crate::config::{IntegrandSpec, OscillatorSpec, ProblemConfig, QSpec};
use crate::report::{fmt_error, Format};

/// Largest `k (b - a)` for which the brute-force reference is attempted.
const BRUTE_FORCE_MAX_PHASE: f64 = 1e5;
const BRUTE_FORCE_TOL: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrateRow {
    pub k: f64,
    pub value: Complex64,
    pub f_evals: usize,
    pub error_abs: Option<f64>,
    pub oracle: Option<OracleMethod>,
}

fn integrand(spec: &IntegrandSpec, oscillator: &OscillatorSpec, k: f64) -> Box<dyn Integrand> {
    match *spec {
        IntegrandSpec::FBeta { beta } if beta != 0.0 => Box::new(move |x: f64| Complex64::new(x.powf(beta), 0.0)),
        IntegrandSpec::FBeta { .. } | IntegrandSpec::Log => Box::new(|x: f64| Complex64::new(x.ln(), 0.0)),
        IntegrandSpec::One => Box::new(|_: f64| Complex64::new(1.0, 0.0)),
        IntegrandSpec::CircleKernel => {
            let s = match oscillator {
                OscillatorSpec::Circle { s } => *s,
                _ => 0.0,
            };
            Box::new(SmoothKernelFactor::new(s, k))
        }
    }
}

fn singular_points(cfg: &ProblemConfig) -> Vec<(f64, SingularityClass)> {
    let [a, b] = cfg.interval;
    let (at, class) = match (&cfg.integrand, &cfg.oscillator) {
        (IntegrandSpec::FBeta { beta }, _) if *beta != 0.0 => (0.0, SingularityClass::Algebraic(*beta)),
        (IntegrandSpec::FBeta { .. } | IntegrandSpec::Log, _) => (0.0, SingularityClass::Logarithmic),
        (IntegrandSpec::CircleKernel, OscillatorSpec::Circle { s }) => (*s, SingularityClass::Logarithmic),
        _ => return Vec::new(),
    };
    if at >= a && at <= b {
        vec![(at, class)]
    } else {
        Vec::new()
    }
}

fn composite(cfg: &ProblemConfig) -> CompositeParams {
    CompositeParams {
        n: cfg.rule.n,
        m: cfg.rule.m,
        grading: match cfg.rule.q {
            QSpec::Auto => Grading::Auto {
                r: cfg.rule.r,
                margin: GRADING_MARGIN,
            },
            QSpec::Value(q) => Grading::Fixed(q),
        },
    }
}

fn oscillator(spec: &OscillatorSpec) -> oscquad::Result<Option<Oscillator>> {
    match spec {
        OscillatorSpec::Linear => Ok(None),
        OscillatorSpec::Polynomial { coeffs, stationary } => {
            let points = stationary
                .iter()
                .map(|p| StationaryPoint::new(p.xi, p.order, p.lead))
                .collect::<oscquad::Result<Vec<_>>>()?;
            Oscillator::new(PolynomialPhase::new(coeffs.clone()), points).map(Some)
        }
        OscillatorSpec::Circle { s } => {
            Oscillator::new(CirclePhase::new(*s), phase_stationary_points(*s)?).map(Some)
        }
    }
}

fn reference(cfg: &ProblemConfig, f: &dyn Integrand, k: f64) -> oscquad::Result<Option<OracleValue>> {
    if cfg.oscillator != OscillatorSpec::Linear {
        return Ok(None);
    }
    let [a, b] = cfg.interval;
    if a == 0.0 && b == 1.0 {
        match cfg.integrand {
            IntegrandSpec::FBeta { beta } if beta != 0.0 && k <= KUMMER_K_MAX => {
                return kummer_moment(beta, k).map(Some)
            }
            IntegrandSpec::FBeta { .. } | IntegrandSpec::Log if k > 0.0 => return log_moment(k).map(Some),
            _ => {}
        }
    }
    if k * (b - a) > BRUTE_FORCE_MAX_PHASE {
        return Ok(None);
    }
    let singular: Vec<Endpoint> = singular_points(cfg)
        .iter()
        .filter(|p| p.0 == a)
        .map(|_| Endpoint::Left)
        .collect();
    brute_force(f, a, b, k, BRUTE_FORCE_TOL, &singular).map(Some)
}

fn one(cfg: &ProblemConfig, k: f64) -> oscquad::Result<IntegrateRow> {
    let f = integrand(&cfg.integrand, &cfg.oscillator, k);
    let [a, b] = cfg.interval;
    let sing = singular_points(cfg);
    let params = composite(cfg);
    let result = match oscillator(&cfg.oscillator)? {
        None => integrate_singular(f.as_ref(), a, b, &sing, k, &params)?,
        Some(osc) => {
            let smooth_degree = match cfg.oscillator {
                OscillatorSpec::Circle { .. } => cfg.rule.m.min(128),
                _ => (cfg.rule.n * cfg.rule.m).min(128),
            };
            let op = OscillatoryParams {
                composite: params,
                smooth_degree,
                max_piece_len: MAX_PIECE_LEN,
                cache_inverse: true,
            };
            integrate_oscillatory(f.as_ref(), &osc, a, b, &sing, k, op)?
        }
    };
    let oracle = reference(cfg, f.as_ref(), k)?;
    Ok(IntegrateRow {
        k,
        value: result.value,
        f_evals: result.f_evals,
        error_abs: oracle.map(|o| (result.value - o.value).norm()),
        oracle: oracle.map(|o| o.method),
    })
}

/// Validates the configuration and integrates at every `k`.
pub fn run(cfg: &ProblemConfig) -> Result<Vec<IntegrateRow>> {
    cfg.validate()?;
    cfg.k
        .par_iter()
        .map(|&k| one(cfg, k).with_context(|| format!("k = {k}")))
        .collect()
}

fn oracle_name(m: OracleMethod) -> &'static str {
    match m {
        OracleMethod::KummerSeries => "kummer",
        OracleMethod::SiCiFormula => "sici",
        OracleMethod::BruteForce => "brute_force",
        OracleMethod::SelfConvergence => "self_convergence",
    }
}

pub fn write(out: &mut dyn Write, rows: &[IntegrateRow], format: Format) -> Result<()> {
    let header = ["k", "re", "im", "f_evals", "error_abs", "oracle"];
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                format!("{}", r.k),
                format!("{:.16e}", r.value.re),
                format!("{:.16e}", r.value.im),
                r.f_evals.to_string(),
                r.error_abs.map(fmt_error).unwrap_or_default(),
                r.oracle.map(oracle_name).unwrap_or("-").to_string(),
            ]
        })
        .collect();
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(header)?;
            for c in &body {
                w.write_record(c)?;
            }
            w.flush()?;
        }
        Format::Text => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for c in &body {
                for (w, s) in widths.iter_mut().zip(c) {
                    *w = (*w).max(s.len());
                }
            }
            let line = |c: Vec<&str>| {
                c.iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(out, "{}", line(header.to_vec()))?;
            for c in &body {
                writeln!(out, "{}", line(c.iter().map(String::as_str).collect()))?;
            }
        }
    }
    Ok(())
}
