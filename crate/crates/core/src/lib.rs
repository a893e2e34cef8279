//! Filon-Clenshaw-Curtis quadrature for `∫_a^b f(x) e^{ikg(x)} dx` where `f`
//! may have algebraic or logarithmic endpoint singularities and `g` may have
//! stationary points.

pub mod chebyshev;
mod error;
pub mod fcc;
pub mod gauss;
pub mod graded;
mod integrand;
pub mod moments;
pub mod oracle;
pub mod oscillator;
pub mod rootfind;
pub mod scattering;
pub mod special;
pub mod sum;

pub use error::{Error, Result};
pub use fcc::{fcc_rule_interval, fcc_rule_unit, IntervalMap, QuadratureResult, SubintervalReport};
pub use graded::{
    best_k_decay_rate, build_mesh, composite_fcc, first_interval_rule, integrate_singular,
    grading_exponent, min_grading_exponent, CompositeParams, Endpoint, GradedMesh, Grading,
    SingularityClass, GRADING_MARGIN,
};
pub use integrand::{real, Integrand};
pub use moments::{fcc_weights, FccWeights, Regime};
