//! Limit-cycle detection over a grid of initial conditions.

use rayon::prelude::*;

use super::integrator::{Integrator, State};
use crate::error::{Error, Result};
use crate::model::Params;

/// Section points closer than this in `X` are treated as the same return.
pub const CLOSURE_TOL: f64 = 1e-6;
/// Cycles whose period and extrema agree within this tolerance are merged.
pub const CLUSTER_TOL: f64 = 1e-3;
/// Velocity range below which a trajectory is considered at rest.
pub const EQUILIBRIUM_TOL: f64 = 1e-6;
/// Largest number of section returns per period that is searched.
pub const MAX_RETURNS: usize = 8;

/// Autonomous stick–slip configuration: velocity-weakening Stribeck branch
/// with slope 0.8 and its minimum at relative velocity 0.1, belt velocity
/// 0.05, no excitation, no coupling, no viscous damping.
pub fn self_excited(alpha: f64, beta: f64) -> Params {
    let xi = 0.8;
    let v_m = 0.1;
    Params {
        alpha,
        beta,
        gamma: 1.0,
        theta: 0.0,
        xi_x: 0.0,
        xi_q: 0.1,
        mu: 0.1,
        xi,
        eta: xi / (3.0 * v_m * v_m),
        v0: 0.05,
        f0: 0.0,
        omega0: 1.0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitCycle {
    pub period: f64,
    /// Largest `|X|` over one period.
    pub amplitude: f64,
    pub mean_x: f64,
    pub x_min: f64,
    pub x_max: f64,
    /// Successive displacement extrema over one period, starting after the
    /// section point.
    pub signature: Vec<f64>,
    /// Indices into the initial-condition grid that converged to this cycle.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Exclusion {
    /// The trajectory came to rest.
    Equilibrium {
        x: f64,
    },
    /// No periodic return within the observation window.
    NoRecurrence,
    Diverged(Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Excluded {
    pub index: usize,
    pub initial: State,
    pub reason: Exclusion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleReport {
    /// Distinct cycles sorted by amplitude, then by mean displacement.
    pub cycles: Vec<LimitCycle>,
    pub excluded: Vec<Excluded>,
}

#[derive(Debug, Clone, Copy)]
pub struct CycleSearch {
    pub dt: f64,
    pub t_settle: f64,
    pub t_observe: f64,
}

impl Default for CycleSearch {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_settle: 200.0,
            t_observe: 100.0,
        }
    }
}

/// Square grid of `n x n` initial states spanning `[-1, 1]^2` in `(X, V)`.
pub fn ic_grid(n: usize) -> Vec<State> {
    let coord = |k: usize| {
        if n == 1 {
            0.0
        } else {
            -1.0 + 2.0 * k as f64 / (n - 1) as f64
        }
    };
    (0..n)
        .flat_map(|a| (0..n).map(move |b| State::initial(coord(a), coord(b), 0.0, 0.0)))
        .collect()
}

/// A return to the section.
#[derive(Debug, Clone, Copy)]
struct Return {
    t: f64,
    x: f64,
}

/// Observed behaviour of one trajectory.
enum Outcome {
    Cycle(LimitCycle),
    Rejected(Exclusion),
}

fn observe(p: &Params, s0: State, search: &CycleSearch) -> Result<Outcome> {
    let mut it = Integrator::new(p, s0, search.dt)?;
    let settle = (search.t_settle / search.dt).round() as usize;
    let observe = (search.t_observe / search.dt).round() as usize;
    for _ in 0..settle {
        it.step()?;
    }
    let mut samples = Vec::with_capacity(observe + 1);
    let mut arrivals = Vec::new();
    let mut turns = Vec::new();
    samples.push(*it.state());
    for _ in 0..observe {
        let prev = *it.state();
        let cur = *it.step()?;
        for c in it.crossings() {
            if c.from < 0.0 {
                arrivals.push(Return { t: c.t, x: c.x });
            }
        }
        if prev.v > 0.0 && cur.v <= 0.0 {
            turns.push(hermite_turn(&prev, &cur));
        }
        samples.push(cur);
    }
    let (v_lo, v_hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s.v), hi.max(s.v))
        });
    if v_hi - v_lo < EQUILIBRIUM_TOL {
        return Ok(Outcome::Rejected(Exclusion::Equilibrium {
            x: samples.last().map_or(0.0, |s| s.x),
        }));
    }
    let returns = if arrivals.len() >= 3 { arrivals } else { turns };
    let Some((start, end)) = recurrence(&returns) else {
        return Ok(Outcome::Rejected(Exclusion::NoRecurrence));
    };
    Ok(Outcome::Cycle(measure(&samples, start, end)))
}

/// Displacement maximum where `V` falls through zero, by cubic Hermite
/// interpolation between two samples.
fn hermite_turn(a: &State, b: &State) -> Return {
    let h = b.t - a.t;
    let s = a.v / (a.v - b.v);
    let (s2, s3) = (s * s, s * s * s);
    let x = (2.0 * s3 - 3.0 * s2 + 1.0) * a.x
        + (s3 - 2.0 * s2 + s) * h * a.v
        + (-2.0 * s3 + 3.0 * s2) * b.x
        + (s3 - s2) * h * b.v;
    Return { t: a.t + s * h, x }
}

/// Finds the smallest number of returns per period such that the latest
/// returns repeat, and gives the time span of the last full period.
fn recurrence(returns: &[Return]) -> Option<(f64, f64)> {
    let n = returns.len();
    for per in 1..=MAX_RETURNS {
        if n < 2 * per + 1 {
            break;
        }
        let tail = &returns[n - 2 * per - 1..];
        let closes = (0..=per).all(|k| (tail[k + per].x - tail[k].x).abs() < CLOSURE_TOL);
        if closes {
            return Some((returns[n - 1 - per].t, returns[n - 1].t));
        }
    }
    None
}

fn measure(samples: &[State], start: f64, end: f64) -> LimitCycle {
    let window: Vec<&State> = samples
        .iter()
        .filter(|s| s.t >= start && s.t <= end)
        .collect();
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut area = 0.0;
    let mut signature = Vec::new();
    for (k, s) in window.iter().enumerate() {
        x_min = x_min.min(s.x);
        x_max = x_max.max(s.x);
        if k > 0 {
            let prev = window[k - 1];
            area += 0.5 * (prev.x + s.x) * (s.t - prev.t);
            if (prev.v > 0.0) != (s.v > 0.0) {
                signature.push(if prev.v.abs() < s.v.abs() {
                    prev.x
                } else {
                    s.x
                });
            }
        }
    }
    let span = window.last().map_or(0.0, |s| s.t) - window.first().map_or(0.0, |s| s.t);
    LimitCycle {
        period: end - start,
        amplitude: x_max.abs().max(x_min.abs()),
        mean_x: if span > 0.0 { area / span } else { x_max },
        x_min,
        x_max,
        signature,
        members: Vec::new(),
    }
}

fn same_cycle(a: &LimitCycle, b: &LimitCycle) -> bool {
    (a.period - b.period).abs() <= CLUSTER_TOL * a.period.max(1.0)
        && (a.x_max - b.x_max).abs() <= CLUSTER_TOL
        && (a.x_min - b.x_min).abs() <= CLUSTER_TOL
}

/// Integrates every initial state for `t_settle`, then looks for a periodic
/// return during `t_observe`. Returns the distinct cycles and the states
/// that did not settle onto one.
pub fn detect_limit_cycles(
    p: &Params,
    ic_grid: &[State],
    search: &CycleSearch,
) -> Result<CycleReport> {
    p.validate()?;
    if ic_grid.is_empty() {
        return Err(Error::Empty("initial-condition grid"));
    }
    if !(search.t_settle >= 0.0 && search.t_observe > 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_observe",
            reason: format!(
                "settle {} and observe {} must be >= 0 and > 0",
                search.t_settle, search.t_observe
            ),
        });
    }
    let outcomes: Vec<Result<Outcome>> = ic_grid
        .par_iter()
        .map(|s0| observe(p, *s0, search))
        .collect();

    let mut cycles: Vec<LimitCycle> = Vec::new();
    let mut excluded = Vec::new();
    for (index, outcome) in outcomes.into_iter().enumerate() {
        let reason = match outcome {
            Ok(Outcome::Cycle(c)) => {
                match cycles.iter_mut().find(|known| same_cycle(known, &c)) {
                    Some(known) => known.members.push(index),
                    None => cycles.push(LimitCycle {
                        members: vec![index],
                        ..c
                    }),
                }
                continue;
            }
            Ok(Outcome::Rejected(r)) => r,
            Err(e) => Exclusion::Diverged(e),
        };
        excluded.push(Excluded {
            index,
            initial: ic_grid[index],
            reason,
        });
    }
    cycles.sort_by(|a, b| {
        a.amplitude
            .total_cmp(&b.amplitude)
            .then(a.mean_x.total_cmp(&b.mean_x))
    });
    Ok(CycleReport { cycles, excluded })
}
