use thiserror::Error;

use crate::dynamics::State;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate spring geometry: alpha and beta are both zero")]
    DegenerateGeometry,

    #[error("static friction {mu_s} is below dynamic friction {mu_m}")]
    FrictionOrdering { mu_s: f64, mu_m: f64 },

    #[error("expected 1, 3 or 5 equilibria, found {count} at {roots:?}")]
    UnexpectedEquilibriumCount { count: usize, roots: Vec<f64> },

    #[error("no equilibrium in [-{x_max}, {x_max}]")]
    NoEquilibrium { x_max: f64 },

    #[error("quintic coefficient A5 is zero; the polynomial regions are undefined")]
    ZeroQuinticCoefficient,

    #[error("non-finite state at T = {t}; last good sample {last_good:?}")]
    NonFinite { t: f64, last_good: State },

    #[error("analysis window of {window} time units is {reason}")]
    Window { window: f64, reason: &'static str },

    #[error("empty input: {0}")]
    Empty(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
