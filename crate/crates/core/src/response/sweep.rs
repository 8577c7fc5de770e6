//! Electrical outputs and steady-state parameter sweeps.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dynamics::{integrate, steady_state, AnalysisWindow, State, SteadyStats, Trajectory};
use crate::error::{Error, Result};
use crate::model::Params;

/// Voltage `U = xi_q I` and power `P = xi_q I^2` at every sample.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ElectricalSeries {
    pub u: Vec<f64>,
    pub p: Vec<f64>,
}

pub fn electrical_outputs(traj: &Trajectory, xi_q: f64) -> ElectricalSeries {
    let (u, p) = traj
        .samples
        .iter()
        .map(|s| (xi_q * s.i, xi_q * s.i * s.i))
        .unzip();
    ElectricalSeries { u, p }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepVariable {
    V0,
    Theta,
    XiX,
    XiQ,
}

impl SweepVariable {
    pub const ALL: [SweepVariable; 4] = [Self::V0, Self::Theta, Self::XiX, Self::XiQ];

    pub fn name(self) -> &'static str {
        match self {
            Self::V0 => "v0",
            Self::Theta => "theta",
            Self::XiX => "xi_x",
            Self::XiQ => "xi_q",
        }
    }

    pub fn apply(self, p: &mut Params, value: f64) {
        match self {
            Self::V0 => p.v0 = value,
            Self::Theta => p.theta = value,
            Self::XiX => p.xi_x = value,
            Self::XiQ => p.xi_q = value,
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidParameter {
                name: "vary",
                reason: format!("unknown sweep variable `{s}` (v0, theta, xi_x, xi_q)"),
            })
    }
}

/// Named spring geometries used in the sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    QZS3,
    QZS5,
    BS,
    TS,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::QZS3, Case::QZS5, Case::BS, Case::TS];

    /// `(alpha, beta)`.
    pub fn geometry(self) -> (f64, f64) {
        match self {
            Case::QZS3 => (0.0, 1.0),
            Case::QZS5 => (0.25, 0.72),
            Case::BS => (0.25, 0.5),
            Case::TS => (0.5, 0.25),
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub t_end: f64,
    pub window: AnalysisWindow,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_end: 400.0,
            window: AnalysisWindow::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    /// Number of parameter values, endpoints included.
    pub steps: usize,
    pub cases: Vec<Case>,
    pub sim: SimConfig,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|k| {
                if k == n - 1 {
                    self.to
                } else {
                    self.from + (self.to - self.from) * k as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    /// `Err` when the simulation diverged or the value was invalid.
    pub stats: Result<SteadyStats>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub case: Case,
    pub variable: SweepVariable,
    pub rows: Vec<SweepRow>,
}

/// Steady-state statistics of one run from rest.
pub fn simulate_stats(p: &Params, sim: &SimConfig) -> Result<SteadyStats> {
    let traj = integrate(p, State::initial(0.0, 0.0, 0.0, 0.0), sim.t_end, sim.dt)?;
    steady_state(&traj, p.xi_q, sim.window)
}

/// Runs every `(case, value)` pair from rest. Failed runs are kept as
/// `Err` rows; rows come out ordered by parameter value.
pub fn sweep(base: &Params, spec: &SweepSpec) -> Result<Vec<SweepResult>> {
    if spec.steps < 2 {
        return Err(Error::InvalidParameter {
            name: "steps",
            reason: format!("need at least 2, got {}", spec.steps),
        });
    }
    if !(spec.from.is_finite() && spec.to.is_finite() && spec.from < spec.to) {
        return Err(Error::InvalidParameter {
            name: "from",
            reason: format!("need from < to, got {} and {}", spec.from, spec.to),
        });
    }
    if spec.cases.is_empty() {
        return Err(Error::Empty("sweep cases"));
    }
    let values = spec.values();
    let jobs: Vec<(Case, f64)> = spec
        .cases
        .iter()
        .flat_map(|&c| values.iter().map(move |&v| (c, v)))
        .collect();
    let stats: Vec<Result<SteadyStats>> = jobs
        .par_iter()
        .map(|&(case, value)| {
            let (alpha, beta) = case.geometry();
            let mut p = base.with_geometry(alpha, beta);
            spec.variable.apply(&mut p, value);
            simulate_stats(&p, &spec.sim)
        })
        .collect();
    let mut stats = stats.into_iter();
    Ok(spec
        .cases
        .iter()
        .map(|&case| SweepResult {
            case,
            variable: spec.variable,
            rows: values
                .iter()
                .map(|&value| SweepRow {
                    value,
                    stats: stats.next().expect("one result per job"),
                })
                .collect(),
        })
        .collect())
}
