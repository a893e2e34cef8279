//! JSON problem description for `oscquad integrate`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::Format;

#[derive(Debug, Error, PartialEq)]
#[error("{path}: {message}")]
pub struct ConfigError {
    /// Dotted path of the offending field, e.g. `rule.q`.
    pub path: String,
    pub message: String,
}

fn fail<T>(path: &str, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        path: path.to_string(),
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub integrand: IntegrandSpec,
    #[serde(default)]
    pub oscillator: OscillatorSpec,
    #[serde(default = "unit_interval")]
    pub interval: [f64; 2],
    #[serde(default)]
    pub k: Vec<f64>,
    pub rule: RuleSpec,
    #[serde(default)]
    pub format: Format,
}

fn unit_interval() -> [f64; 2] {
    [0.0, 1.0]
}

/// Builtin integrand families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum IntegrandSpec {
    /// `x^β`, or `log x` when `β = 0`; singular at `x = 0`.
    FBeta { beta: f64 },
    Log,
    One,
    /// Kernel factor of the circle scattering integral; needs the circle oscillator.
    CircleKernel,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OscillatorSpec {
    #[default]
    Linear,
    /// `g(x) = Σ coeffs[j] x^j` with declared stationary points.
    Polynomial {
        coeffs: Vec<f64>,
        #[serde(default)]
        stationary: Vec<StationarySpec>,
    },
    /// `Ψ_s` of the unit circle; stationary points are located automatically.
    Circle { s: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationarySpec {
    pub xi: f64,
    pub order: usize,
    pub lead: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSpec {
    #[serde(rename = "N")]
    pub n: usize,
    /// Mesh cells per singular piece (`M`, or `L` for oscillatory problems).
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(default)]
    pub q: QSpec,
    #[serde(default)]
    pub r: f64,
}

/// Grading exponent: a number, or `"auto"` to derive it from the singularity.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum QSpec {
    #[default]
    Auto,
    Value(f64),
}

impl Serialize for QSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            QSpec::Auto => s.serialize_str("auto"),
            QSpec::Value(q) => s.serialize_f64(*q),
        }
    }
}

impl<'de> Deserialize<'de> for QSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(q) => Ok(QSpec::Value(q)),
            Raw::Word(w) if w == "auto" => Ok(QSpec::Auto),
            Raw::Word(w) => Err(serde::de::Error::custom(format!(
                "q must be a number or \"auto\", got \"{w}\""
            ))),
        }
    }
}

impl std::str::FromStr for QSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(QSpec::Auto);
        }
        s.parse::<f64>()
            .map(QSpec::Value)
            .map_err(|_| format!("q must be a number or 'auto', got '{s}'"))
    }
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError {
            path: "<config>".into(),
            message: e.to_string(),
        })
    }

    /// Checks every field against the preconditions of the numerical routines.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let [a, b] = self.interval;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return fail("interval", format!("needs finite a < b, got [{a}, {b}]"));
        }
        if self.k.is_empty() {
            return fail("k", "at least one wavenumber is required");
        }
        for (i, &k) in self.k.iter().enumerate() {
            if !(k >= 0.0 && k.is_finite()) {
                return fail(&format!("k[{i}]"), format!("must be finite and non-negative, got {k}"));
            }
        }
        if self.rule.n < 1 {
            return fail("rule.N", "must be at least 1");
        }
        if self.rule.m < 1 {
            return fail("rule.M", "must be at least 1");
        }
        if let QSpec::Value(q) = self.rule.q {
            if !(q >= 1.0 && q.is_finite()) {
                return fail("rule.q", format!("the mesh x_j = (j/M)^q needs q >= 1, got {q}"));
            }
        }
        if !self.rule.r.is_finite() || self.rule.r < 0.0 {
            return fail("rule.r", format!("must be a non-negative number, got {}", self.rule.r));
        }
        match self.integrand {
            IntegrandSpec::FBeta { beta } => {
                if !(beta > -1.0 && beta < 1.0) {
                    return fail("integrand.beta", format!("must lie in (-1, 1), got {beta}"));
                }
                if a < 0.0 {
                    return fail("interval", "x^β and log x need a >= 0");
                }
                if self.rule.q == QSpec::Auto && self.rule.r >= 1.0 + beta {
                    return fail("rule.r", format!("automatic grading needs r < 1 + β = {}", 1.0 + beta));
                }
            }
            IntegrandSpec::Log => {
                if a < 0.0 {
                    return fail("interval", "log x needs a >= 0");
                }
                if self.rule.q == QSpec::Auto && self.rule.r >= 1.0 {
                    return fail("rule.r", "automatic grading needs r < 1 for log x");
                }
            }
            IntegrandSpec::One => {}
            IntegrandSpec::CircleKernel => {
                if !matches!(self.oscillator, OscillatorSpec::Circle { .. }) {
                    return fail("integrand.family", "circle_kernel needs the circle oscillator");
                }
                if self.k.iter().any(|&k| k <= 0.0) {
                    return fail("k", "the circle kernel needs k > 0");
                }
            }
        }
        match &self.oscillator {
            OscillatorSpec::Linear => {}
            OscillatorSpec::Polynomial { coeffs, stationary } => {
                if coeffs.len() < 2 || coeffs.iter().any(|c| !c.is_finite()) {
                    return fail("oscillator.coeffs", "needs at least two finite coefficients");
                }
                for (i, sp) in stationary.iter().enumerate() {
                    if sp.order < 1 {
                        return fail(&format!("oscillator.stationary[{i}].order"), "must be at least 1");
                    }
                    if sp.lead == 0.0 || !sp.lead.is_finite() {
                        return fail(&format!("oscillator.stationary[{i}].lead"), "must be finite and nonzero");
                    }
                }
            }
            OscillatorSpec::Circle { s } => {
                if !(*s >= 0.0 && *s < 2.0 * std::f64::consts::PI) {
                    return fail("oscillator.s", format!("must lie in [0, 2π), got {s}"));
                }
                if a < 0.0 || b > 2.0 * std::f64::consts::PI {
                    return fail("interval", "the circle phase is defined on [0, 2π]");
                }
                if self.rule.r >= 0.5 {
                    return fail("rule.r", "stationary points need r < 1/2");
                }
            }
        }
        Ok(())
    }
}
